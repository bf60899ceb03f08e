//! The oriented chain complex `C_*(N_D)` and its integer homology.
//!
//! A `k`-cell is a nested set `H` of dimension `k` together with an orientation:
//! an ordering of its unsaturated elements `D_1, …, D_m` and of each α-set
//! `α_i = α^{D_i}_H`. Swapping adjacent `D_i, D_{i+1}` multiplies by
//! `(−1)^{(|α_i|−1)(|α_{i+1}|−1)}`; permuting inside `α_i` multiplies by the
//! sign of the permutation. The canonical orientation lists the unsaturated
//! elements by least vertex and then size, each α-set ascending.
//!
//! Up to a global sign this is the cellular chain complex of `A_D`.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::diagram::{Diagram, Subdiagram};
use crate::error::{Error, Result};
use crate::nested::{nested_sets, unsaturated_key, NestedSet};

/// A nested set with an ordering of its unsaturated elements and α-sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrientedCell {
    pub nested: NestedSet,
    pub order: Vec<(Subdiagram, Vec<usize>)>,
}

fn inversions(v: &[usize]) -> usize {
    let mut n = 0;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i] > v[j] {
                n += 1;
            }
        }
    }
    n
}

impl OrientedCell {
    /// The canonical orientation of `h`.
    pub fn canonical(h: &NestedSet) -> Self {
        OrientedCell {
            nested: h.clone(),
            order: h
                .unsaturated()
                .into_iter()
                .map(|(b, a)| (b, a.to_vec()))
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.order.iter().map(|(_, a)| a.len() - 1).sum()
    }

    fn validate(&self) -> Result<()> {
        let expected = self.nested.unsaturated();
        let malformed = |m: String| Err(Error::InvalidArgument(format!("malformed orientation: {m}")));
        if expected.len() != self.order.len() {
            return malformed(format!(
                "{} unsaturated elements listed, {} expected",
                self.order.len(),
                expected.len()
            ));
        }
        for (b, alpha) in &self.order {
            let Some((_, a)) = expected.iter().find(|(e, _)| e == b) else {
                return malformed(format!("{b:?} is not an unsaturated element"));
            };
            let listed = Subdiagram::from_indices(alpha.iter().copied());
            if listed != *a || alpha.len() != a.len() {
                return malformed(format!("α-order {alpha:?} does not enumerate {a:?}"));
            }
        }
        let mut seen: Vec<Subdiagram> = self.order.iter().map(|(b, _)| *b).collect();
        seen.sort();
        seen.dedup();
        if seen.len() != self.order.len() {
            return malformed("an unsaturated element is listed twice".into());
        }
        Ok(())
    }

    /// The canonical representative and the sign relating `self` to it.
    pub fn canonicalize(&self) -> Result<(OrientedCell, i32)> {
        self.validate()?;
        let mut sign = 1;
        let mut order = self.order.clone();
        for (_, alpha) in order.iter_mut() {
            if inversions(alpha) % 2 == 1 {
                sign = -sign;
            }
            alpha.sort_unstable();
        }
        // Bubble sort, tracking the sign of each adjacent swap.
        let n = order.len();
        for pass in 0..n {
            for i in 0..n.saturating_sub(1 + pass) {
                if unsaturated_key(order[i].0) > unsaturated_key(order[i + 1].0) {
                    if (order[i].1.len() - 1) * (order[i + 1].1.len() - 1) % 2 == 1 {
                        sign = -sign;
                    }
                    order.swap(i, i + 1);
                }
            }
        }
        Ok((
            OrientedCell {
                nested: self.nested.clone(),
                order,
            },
            sign,
        ))
    }
}

/// `s(β;α) = Σ_t (j_t − t)` where `β = (α_{j_1}, …, α_{j_p})`, `j_1 < … < j_p`.
pub fn shuffle_number(beta: &[usize], alpha: &[usize]) -> Result<usize> {
    let mut s = 0;
    let mut last: Option<usize> = None;
    for (t, b) in beta.iter().enumerate() {
        let j = alpha.iter().position(|a| a == b).ok_or_else(|| {
            Error::InvalidArgument(format!("{b} is not in {alpha:?}"))
        })?;
        if last.is_some_and(|l| j <= l) {
            return Err(Error::InvalidArgument(format!(
                "{beta:?} does not respect the order of {alpha:?}"
            )));
        }
        last = Some(j);
        s += j - t;
    }
    Ok(s)
}

/// A sparse integer combination of canonically oriented cells.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Chain {
    terms: BTreeMap<NestedSet, i64>,
}

impl Chain {
    pub fn new() -> Self {
        Chain::default()
    }

    pub fn cell(h: &NestedSet) -> Self {
        let mut c = Chain::new();
        c.add(h.clone(), 1);
        c
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<NestedSet, i64> {
        &self.terms
    }

    pub fn coefficient(&self, h: &NestedSet) -> i64 {
        self.terms.get(h).copied().unwrap_or(0)
    }

    /// Adds `coeff` times the canonically oriented cell `h`.
    pub fn add(&mut self, h: NestedSet, coeff: i64) {
        if coeff == 0 {
            return;
        }
        match self.terms.entry(h) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if *e.get() == 0 {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
        }
    }

    /// Adds `coeff` times an arbitrarily oriented cell.
    pub fn add_oriented(&mut self, cell: &OrientedCell, coeff: i64) -> Result<()> {
        let (c, sign) = cell.canonicalize()?;
        self.add(c.nested, coeff * sign as i64);
        Ok(())
    }
}

/// `∂` of a single oriented cell: the sum over unsaturated `D_i` and
/// `∅ ≠ β ⊊ α_i` of
/// `(−1)^{Σ_{l<i}(|α_l|−1)} (−1)^{|β|−1} (−1)^{s(β;α_i)} (H ∪ D_β)`, where `D_β`
/// is the component of `D_i ∖ (α_i ∖ β)` containing `β` (terms with no such
/// component vanish). `H ∪ D_β` is oriented by `D_1, …, D_{i−1}, D_β, D_i, …`
/// with `β` and `α_i ∖ β` in the order inherited from `α_i`.
pub fn boundary_of_cell(d: &Diagram, cell: &OrientedCell) -> Result<Chain> {
    cell.validate()?;
    let mut out = Chain::new();
    let mut prefix = 0usize;
    for (i, (di, alpha)) in cell.order.iter().enumerate() {
        let p = alpha.len();
        for mask in 1u64..(1u64 << p) - 1 {
            let beta: Vec<usize> = (0..p).filter(|t| mask >> t & 1 == 1).map(|t| alpha[t]).collect();
            let rest: Vec<usize> = (0..p).filter(|t| mask >> t & 1 == 0).map(|t| alpha[t]).collect();
            let d_beta = d.component_with(
                *di,
                Subdiagram::from_indices(rest.iter().copied()),
                Subdiagram::from_indices(beta.iter().copied()),
            );
            if d_beta.is_empty() {
                continue;
            }
            let s = shuffle_number(&beta, alpha)?;
            let exponent = prefix + (beta.len() - 1) + s;
            let sign: i64 = if exponent.is_multiple_of(2) { 1 } else { -1 };
            let mut order = Vec::with_capacity(cell.order.len() + 1);
            order.extend_from_slice(&cell.order[..i]);
            if beta.len() >= 2 {
                order.push((d_beta, beta.clone()));
            }
            if rest.len() >= 2 {
                order.push((*di, rest.clone()));
            }
            order.extend_from_slice(&cell.order[i + 1..]);
            let face = OrientedCell {
                nested: cell.nested.with(d_beta),
                order,
            };
            out.add_oriented(&face, sign)?;
        }
        prefix += p - 1;
    }
    Ok(out)
}

/// `∂` of a homogeneous chain.
pub fn boundary(d: &Diagram, chain: &Chain) -> Result<Chain> {
    let mut dims = chain.terms.keys().map(|h| h.dim(d));
    if let Some(k) = dims.next() {
        if dims.any(|x| x != k) {
            return Err(Error::InvalidArgument("chain mixes dimensions".into()));
        }
    }
    let mut out = Chain::new();
    for (h, &c) in &chain.terms {
        for (f, &x) in &boundary_of_cell(d, &OrientedCell::canonical(h))?.terms {
            out.add(f.clone(), c * x);
        }
    }
    Ok(out)
}

/// An integer matrix as `(row, column, value)` triplets, sorted, no zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, i64)>,
}

impl SparseMatrix {
    pub fn dense(&self) -> Vec<Vec<BigInt>> {
        let mut m = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for &(r, c, v) in &self.entries {
            m[r][c] = BigInt::from(v);
        }
        m
    }

    pub fn to_json(&self) -> Value {
        json!({
            "rows": self.rows,
            "cols": self.cols,
            "entries": self.entries.iter().map(|&(r, c, v)| json!([r, c, v])).collect::<Vec<_>>(),
        })
    }
}

/// Canonical cell bases of `C_*(N_D)`: `cells[k]` lists the nested sets of
/// dimension `k` in ascending order.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    diagram: Diagram,
    cells: Vec<Vec<NestedSet>>,
    index: Vec<HashMap<NestedSet, usize>>,
}

impl ChainComplex {
    pub fn new(d: &Diagram) -> Self {
        let mut cells = vec![Vec::new(); d.len()];
        for h in nested_sets(d) {
            cells[h.dim(d)].push(h);
        }
        let index = cells
            .iter()
            .map(|c| c.iter().cloned().enumerate().map(|(i, h)| (h, i)).collect())
            .collect();
        ChainComplex {
            diagram: d.clone(),
            cells,
            index,
        }
    }

    pub fn top_dim(&self) -> usize {
        self.cells.len().saturating_sub(1)
    }

    pub fn cells(&self, k: usize) -> &[NestedSet] {
        self.cells.get(k).map_or(&[], Vec::as_slice)
    }

    /// The matrix of `∂_k`: rows are `(k−1)`-cells, columns `k`-cells.
    pub fn boundary_matrix(&self, k: usize) -> Result<SparseMatrix> {
        let max = self.top_dim();
        if k > max || self.cells.is_empty() {
            return Err(Error::OutOfRange {
                what: "k",
                value: k,
                max,
            });
        }
        let cols = self.cells[k].len();
        if k == 0 {
            return Ok(SparseMatrix {
                rows: 0,
                cols,
                entries: Vec::new(),
            });
        }
        let mut entries = Vec::new();
        for (c, h) in self.cells[k].iter().enumerate() {
            let b = boundary_of_cell(&self.diagram, &OrientedCell::canonical(h))?;
            for (f, &v) in b.terms() {
                entries.push((self.index[k - 1][f], c, v));
            }
        }
        entries.sort_unstable();
        Ok(SparseMatrix {
            rows: self.cells[k - 1].len(),
            cols,
            entries,
        })
    }

    /// `H_k` for `k = 0, …, |D|−1`.
    pub fn homology(&self) -> Result<Vec<HomologyGroup>> {
        let n = self.cells.len();
        let mut factors: Vec<Vec<BigInt>> = Vec::with_capacity(n + 1);
        for k in 0..n {
            factors.push(smith_normal_form(&self.boundary_matrix(k)?.dense()));
        }
        factors.push(Vec::new());
        Ok((0..n)
            .map(|k| {
                let betti = self.cells[k].len() - factors[k].len() - factors[k + 1].len();
                let torsion = factors[k + 1].iter().filter(|x| !x.is_one()).cloned().collect();
                HomologyGroup { k, betti, torsion }
            })
            .collect())
    }
}

pub fn boundary_matrix(d: &Diagram, k: usize) -> Result<SparseMatrix> {
    ChainComplex::new(d).boundary_matrix(k)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyGroup {
    pub k: usize,
    pub betti: usize,
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn to_json(&self) -> Value {
        json!({
            "k": self.k,
            "betti": self.betti,
            "torsion": self.torsion.iter().map(|t| Value::String(t.to_string())).collect::<Vec<_>>(),
        })
    }
}

/// Integer homology of `C_*(N_D)` for a connected diagram.
pub fn homology(d: &Diagram) -> Result<Vec<HomologyGroup>> {
    ChainComplex::new(d).homology()
}

/// Invariant factors `d_1 | d_2 | …` (all positive) of an integer matrix.
///
/// Elementary row and column moves, always pivoting on an entry of least
/// absolute value.
pub fn smith_normal_form(matrix: &[Vec<BigInt>]) -> Vec<BigInt> {
    let mut m: Vec<Vec<BigInt>> = matrix.to_vec();
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pr, pc)) = least_entry(&m, t) else {
            break;
        };
        m.swap(t, pr);
        for row in m.iter_mut() {
            row.swap(t, pc);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if m[i][t].is_zero() {
                    continue;
                }
                let q = floor_div(&m[i][t], &m[t][t]);
                let (head, tail) = m.split_at_mut(i);
                let (pivot_row, row) = (&head[t], &mut tail[0]);
                for j in t..cols {
                    if !pivot_row[j].is_zero() {
                        row[j] -= &q * &pivot_row[j];
                    }
                }
                dirty |= !row[t].is_zero();
            }
            for j in t + 1..cols {
                if m[t][j].is_zero() {
                    continue;
                }
                let q = floor_div(&m[t][j], &m[t][t]);
                for row in m.iter_mut().skip(t) {
                    if !row[t].is_zero() {
                        let x = &q * &row[t];
                        row[j] -= x;
                    }
                }
                dirty |= !m[t][j].is_zero();
            }
            if dirty {
                // A nonzero remainder is smaller than the pivot: move it in.
                let (pr, pc) = least_in_cross(&m, t);
                m.swap(t, pr);
                for row in m.iter_mut() {
                    row.swap(t, pc);
                }
                continue;
            }
            // Enforce divisibility of the remaining block by the pivot.
            let bad = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !(&m[i][j] % &m[t][t]).is_zero())
            });
            match bad {
                Some(i) => {
                    let (head, tail) = m.split_at_mut(i);
                    for (a, b) in head[t].iter_mut().zip(tail[0].iter()) {
                        *a += b;
                    }
                }
                None => break,
            }
        }
        out.push(m[t][t].abs());
        t += 1;
    }
    out
}

fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    use num_integer::Integer;
    a.div_floor(b)
}

fn least_entry(m: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in m.iter().enumerate().skip(t) {
        for (j, x) in row.iter().enumerate().skip(t) {
            if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < m[bi][bj].abs()) {
                best = Some((i, j));
                if x.is_one() || (-x).is_one() {
                    return best;
                }
            }
        }
    }
    best
}

fn least_in_cross(m: &[Vec<BigInt>], t: usize) -> (usize, usize) {
    let mut best = (t, t);
    let better = |i: usize, j: usize, best: (usize, usize)| {
        !m[i][j].is_zero() && (m[best.0][best.1].is_zero() || m[i][j].abs() < m[best.0][best.1].abs())
    };
    for i in t..m.len() {
        if better(i, t, best) {
            best = (i, t);
        }
    }
    for j in t..m[t].len() {
        if better(t, j, best) {
            best = (t, j);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nested::parse_nested_set;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn factors(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn canonicalize_examples() {
        let p3 = Diagram::path(3).unwrap();
        let top = NestedSet::top(&p3);
        let c = OrientedCell::canonical(&top);
        assert_eq!(c.canonicalize().unwrap(), (c.clone(), 1));
        let scrambled = OrientedCell {
            nested: top.clone(),
            order: vec![(p3.vertices(), vec![1, 0, 2])],
        };
        assert_eq!(scrambled.canonicalize().unwrap(), (c, -1));

        let p5 = Diagram::path(5).unwrap();
        let h = parse_nested_set(&p5, "1 2;4 5").unwrap();
        let a = p5.parse_subdiagram("1 2").unwrap();
        let b = p5.parse_subdiagram("4 5").unwrap();
        let swapped = OrientedCell {
            nested: h.clone(),
            order: vec![(b, vec![3, 4]), (a, vec![0, 1])],
        };
        let (canon, sign) = swapped.canonicalize().unwrap();
        assert_eq!(canon.order[0].0, a);
        assert_eq!(sign, -1);

        let missing = OrientedCell {
            nested: h.clone(),
            order: vec![(a, vec![0, 1])],
        };
        assert!(missing.canonicalize().is_err());
        let duplicated = OrientedCell {
            nested: h,
            order: vec![(a, vec![0, 0]), (b, vec![3, 4])],
        };
        assert!(duplicated.canonicalize().is_err());
    }

    #[test]
    fn shuffle_examples() {
        assert_eq!(shuffle_number(&[2, 4], &[1, 2, 3, 4]).unwrap(), 3);
        assert_eq!(shuffle_number(&[7], &[7, 1, 5]).unwrap(), 0);
        assert_eq!(shuffle_number(&[1, 2, 3], &[1, 2, 3]).unwrap(), 0);
        assert!(shuffle_number(&[5], &[1, 2]).is_err());
        assert!(shuffle_number(&[2, 1], &[1, 2]).is_err());
    }

    #[test]
    fn boundary_examples() {
        let p2 = Diagram::path(2).unwrap();
        let b = boundary(&p2, &Chain::cell(&NestedSet::top(&p2))).unwrap();
        assert_eq!(b.coefficient(&parse_nested_set(&p2, "1").unwrap()), 1);
        assert_eq!(b.coefficient(&parse_nested_set(&p2, "2").unwrap()), -1);
        assert_eq!(b.terms().len(), 2);

        let p3 = Diagram::path(3).unwrap();
        let v = parse_nested_set(&p3, "1 2;1").unwrap();
        assert!(boundary(&p3, &Chain::cell(&v)).unwrap().is_zero());
        let b = boundary(&p3, &Chain::cell(&NestedSet::top(&p3))).unwrap();
        assert_eq!(b.terms().len(), 5);
        assert!(boundary(&p3, &b).unwrap().is_zero());

        let mut mixed = Chain::cell(&v);
        mixed.add(NestedSet::top(&p3), 1);
        assert!(boundary(&p3, &mixed).is_err());
    }

    #[test]
    fn boundary_matrix_examples() {
        let p2 = Diagram::path(2).unwrap();
        let m = boundary_matrix(&p2, 1).unwrap();
        assert_eq!((m.rows, m.cols), (2, 1));
        assert_eq!(m.entries, vec![(0, 0, 1), (1, 0, -1)]);
        let z = boundary_matrix(&p2, 0).unwrap();
        assert!(z.entries.is_empty());
        assert_eq!(z.cols, 2);
        let p3 = Diagram::path(3).unwrap();
        let m = boundary_matrix(&p3, 2).unwrap();
        assert_eq!((m.rows, m.cols), (5, 1));
        assert_eq!(m.entries.len(), 5);
        assert!(m.entries.iter().all(|e| e.2.abs() == 1));
        assert!(boundary_matrix(&p3, 3).is_err());
        assert_eq!(
            m.to_json()["entries"].as_array().unwrap().len(),
            5
        );
    }

    #[test]
    fn smith_examples() {
        assert_eq!(smith_normal_form(&big(&[&[1, 0], &[0, 1]])), factors(&[1, 1]));
        assert_eq!(smith_normal_form(&big(&[&[2, 0], &[0, 4]])), factors(&[2, 4]));
        assert_eq!(smith_normal_form(&big(&[&[1, -1]])), factors(&[1]));
        assert_eq!(smith_normal_form(&big(&[&[2, 0], &[0, 3]])), factors(&[1, 6]));
        assert_eq!(smith_normal_form(&big(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]])), factors(&[2, 6, 12]));
        assert!(smith_normal_form(&big(&[&[0, 0]])).is_empty());
        assert!(smith_normal_form(&[]).is_empty());
    }

    #[test]
    fn homology_examples() {
        let expect = |n: usize| {
            let mut v = vec![HomologyGroup { k: 0, betti: 1, torsion: vec![] }];
            v.extend((1..n).map(|k| HomologyGroup { k, betti: 0, torsion: vec![] }));
            v
        };
        assert_eq!(homology(&Diagram::path(3).unwrap()).unwrap(), expect(3));
        assert_eq!(homology(&Diagram::cycle(3).unwrap()).unwrap(), expect(3));
        assert_eq!(homology(&Diagram::path(1).unwrap()).unwrap(), expect(1));
    }
}
