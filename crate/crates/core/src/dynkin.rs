//! The Dynkin cochain complex `CD^*(D; M)` and its embedding into cellular
//! cochains of `A_D`.
//!
//! A coefficient system assigns to each connected `B` and `S ⊆ B` a subspace
//! `M(B,S)` of a fixed `Q^N`. Degree-`p` cochains (`p ≥ 1`) have one component
//! `m(B;α) ∈ M(B, B∖α)` per connected `B` and ascending `α ⊆ B` with `|α| = p`;
//! degree-0 cochains have one component `m_B ∈ M(B,B)` per connected `B`.
//!
//! Components are stored in the coordinates of the chosen basis of their
//! subspace; cross-slot terms of the differential pass through `Q^N`.

use std::collections::HashMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use crate::diagram::{Diagram, Subdiagram};
use crate::error::{Error, Result};
use crate::homology::ChainComplex;
use crate::linalg::Matrix;
use crate::nested::NestedSet;
use crate::rational::{self, Q};

/// A subspace of `Q^N` given by a basis (columns) and a left inverse of it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    basis: Matrix,
    coords: Matrix,
}

impl Subspace {
    /// Fails when the vectors are dependent.
    pub fn new(ambient_dim: usize, vectors: &[Vec<Q>]) -> Option<Self> {
        let basis = Matrix::from_columns(ambient_dim, vectors);
        let coords = basis.left_inverse()?;
        Some(Subspace { basis, coords })
    }

    /// The span of arbitrary vectors, keeping an independent subset.
    pub fn span(ambient_dim: usize, vectors: &[Vec<Q>]) -> Self {
        let mut kept: Vec<Vec<Q>> = Vec::new();
        for v in vectors {
            kept.push(v.clone());
            if Matrix::from_columns(ambient_dim, &kept).rank() < kept.len() {
                kept.pop();
            }
        }
        Subspace::new(ambient_dim, &kept).expect("independent by construction")
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            basis: Matrix::identity(ambient_dim),
            coords: Matrix::identity(ambient_dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        self.basis.spans(&other.basis)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Spaces {
    Constant(Subspace),
    Explicit(HashMap<(Subdiagram, Subdiagram), Subspace>),
}

/// Subspaces `M(B,S) ⊆ Q^N` for connected `B` and `S ⊆ B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientSystem {
    ambient_dim: usize,
    spaces: Spaces,
}

fn subsets(b: Subdiagram) -> impl Iterator<Item = Subdiagram> {
    // Enumerates submasks of b, including the empty set.
    let full = b.bits();
    let mut cur = Some(full);
    std::iter::from_fn(move || {
        let x = cur?;
        cur = if x == 0 { None } else { Some((x - 1) & full) };
        Some(Subdiagram::from_bits(x))
    })
}

impl CoefficientSystem {
    /// `N = 1` and every `M(B,S) = Q`.
    pub fn constant() -> Self {
        CoefficientSystem {
            ambient_dim: 1,
            spaces: Spaces::Constant(Subspace::full(1)),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn space(&self, b: Subdiagram, s: Subdiagram) -> Result<&Subspace> {
        match &self.spaces {
            Spaces::Constant(full) => Ok(full),
            Spaces::Explicit(map) => map.get(&(b, s)).ok_or_else(|| {
                Error::Coefficients(format!("no subspace for B = {b:?}, S = {s:?}"))
            }),
        }
    }

    /// An explicit system. Pairs absent from `entries` get the whole of `Q^N`.
    /// Validates every pair, monotonicity in `S` and the inclusions used by
    /// the differential.
    pub fn from_entries(
        d: &Diagram,
        ambient_dim: usize,
        entries: impl IntoIterator<Item = ((Subdiagram, Subdiagram), Subspace)>,
    ) -> Result<Self> {
        let mut map = HashMap::new();
        for ((b, s), space) in entries {
            d.check_subset(b)?;
            if !d.is_connected(b) {
                return Err(Error::Coefficients(format!("{} is not connected", d.show(b))));
            }
            if !s.is_subset(b) {
                return Err(Error::Coefficients(format!(
                    "S = {} is not inside B = {}",
                    d.show(s),
                    d.show(b)
                )));
            }
            if space.basis.rows() != ambient_dim {
                return Err(Error::Coefficients(format!(
                    "basis for ({}, {}) does not live in Q^{ambient_dim}",
                    d.show(b),
                    d.show(s)
                )));
            }
            if map.insert((b, s), space).is_some() {
                return Err(Error::Coefficients(format!(
                    "duplicate entry for ({}, {})",
                    d.show(b),
                    d.show(s)
                )));
            }
        }
        for b in d.connected_subdiagrams(d.vertices()) {
            for s in subsets(b) {
                map.entry((b, s)).or_insert_with(|| Subspace::full(ambient_dim));
            }
        }
        let m = CoefficientSystem {
            ambient_dim,
            spaces: Spaces::Explicit(map),
        };
        m.validate(d)?;
        Ok(m)
    }

    /// The system spanned by located generators: `M(B,S)` is the span of the
    /// `v_k` with `L_k ⊆ B` and `N_k ∩ S = ∅`, where each generator has a
    /// connected location `L_k` and a non-invariance set `N_k ⊆ L_k`.
    pub fn located(
        d: &Diagram,
        ambient_dim: usize,
        generators: &[(Vec<Q>, Subdiagram, Subdiagram)],
    ) -> Result<Self> {
        for (v, l, n) in generators {
            if v.len() != ambient_dim || !d.is_connected(*l) || !n.is_subset(*l) {
                return Err(Error::Coefficients("malformed located generator".into()));
            }
        }
        let mut entries = Vec::new();
        for b in d.connected_subdiagrams(d.vertices()) {
            for s in subsets(b) {
                let vs: Vec<Vec<Q>> = generators
                    .iter()
                    .filter(|(_, l, n)| l.is_subset(b) && !n.meets(s))
                    .map(|(v, _, _)| v.clone())
                    .collect();
                entries.push(((b, s), Subspace::span(ambient_dim, &vs)));
            }
        }
        CoefficientSystem::from_entries(d, ambient_dim, entries)
    }

    /// A seeded random located system with `count` generators of small
    /// integer entries in `Q^{ambient_dim}`.
    pub fn random(d: &Diagram, ambient_dim: usize, count: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let subs = d.connected_subdiagrams(d.vertices());
        let mut generators = Vec::with_capacity(count);
        for _ in 0..count {
            let v: Vec<Q> = (0..ambient_dim).map(|_| rational::int(rng.gen_range(-3..=3))).collect();
            let l = subs[rng.gen_range(0..subs.len())];
            let n = Subdiagram::from_indices(l.iter().filter(|_| rng.gen_bool(0.4)));
            generators.push((v, l, n));
        }
        CoefficientSystem::located(d, ambient_dim, &generators)
    }

    /// Reads `{ambient_dim, subspaces: [{B, S, basis}]}`, each basis a list of
    /// vectors of `"p/q"` strings (or integers).
    pub fn from_json(d: &Diagram, doc: &Value) -> Result<Self> {
        let bad = |m: &str| Error::parse(1, format!("coefficient document: {m}"));
        let n = doc
            .get("ambient_dim")
            .and_then(Value::as_u64)
            .ok_or_else(|| bad("missing ambient_dim"))? as usize;
        let list = match doc.get("subspaces") {
            None => Vec::new(),
            Some(v) => v.as_array().ok_or_else(|| bad("subspaces must be a list"))?.clone(),
        };
        let ids = |v: Option<&Value>, what: &str| -> Result<Subdiagram> {
            let arr = v
                .and_then(Value::as_array)
                .ok_or_else(|| bad(&format!("{what} must be a list of vertices")))?;
            let mut s = Subdiagram::EMPTY;
            for x in arr {
                let id = match x {
                    Value::String(t) => t.clone(),
                    Value::Number(k) => k.to_string(),
                    _ => return Err(bad("vertex ids are strings or numbers")),
                };
                let i = d
                    .index_of(&id)
                    .ok_or_else(|| bad(&format!("unknown vertex {id}")))?;
                s = s.with(i);
            }
            Ok(s)
        };
        let mut entries = Vec::new();
        for e in &list {
            let b = ids(e.get("B"), "B")?;
            let s = ids(e.get("S"), "S")?;
            let vectors = e
                .get("basis")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("basis must be a list of vectors"))?;
            let mut cols = Vec::new();
            for v in vectors {
                let v = v.as_array().ok_or_else(|| bad("basis vectors are lists"))?;
                let col: Vec<Q> = v
                    .iter()
                    .map(|x| match x {
                        Value::String(t) => rational::parse(t),
                        Value::Number(k) => rational::parse(&k.to_string()),
                        _ => Err(bad("coordinates are rationals")),
                    })
                    .collect::<Result<_>>()?;
                if col.len() != n {
                    return Err(Error::Coefficients(format!(
                        "basis vector of length {} in Q^{n}",
                        col.len()
                    )));
                }
                cols.push(col);
            }
            let space = Subspace::new(n, &cols).ok_or_else(|| {
                Error::Coefficients(format!(
                    "basis for ({}, {}) is not independent",
                    d.show(b),
                    d.show(s)
                ))
            })?;
            entries.push(((b, s), space));
        }
        CoefficientSystem::from_entries(d, n, entries)
    }

    fn validate(&self, d: &Diagram) -> Result<()> {
        let fail = |what: String| Err(Error::Coefficients(what));
        let subs = d.connected_subdiagrams(d.vertices());
        for &b in &subs {
            for s in subsets(b) {
                // Monotone on covering pairs: M(B,S) ⊆ M(B,S∖v).
                for v in s.iter() {
                    if !self.space(b, s.without(v))?.contains(self.space(b, s)?) {
                        return fail(format!(
                            "M({}, {}) is not inside M({}, {})",
                            d.show(b),
                            d.show(s),
                            d.show(b),
                            d.show(s.without(v))
                        ));
                    }
                }
            }
            for a in b.iter() {
                let target = self.space(b, b.without(a))?;
                for c in d.components_of(b.without(a)) {
                    if !target.contains(self.space(c, c)?) {
                        return fail(format!(
                            "M({}, {}) is not inside M({}, {})",
                            d.show(c),
                            d.show(c),
                            d.show(b),
                            d.show(b.without(a))
                        ));
                    }
                }
            }
            for alpha in subsets(b).filter(|a| a.len() >= 2) {
                let target = self.space(b, b.difference(alpha))?;
                for a in alpha.iter() {
                    let beta = alpha.without(a);
                    let c = d.component_with(b, Subdiagram::singleton(a), beta);
                    if c.is_empty() {
                        continue;
                    }
                    if !target.contains(self.space(c, c.difference(beta))?) {
                        return fail(format!(
                            "M({}, {}) is not inside M({}, {})",
                            d.show(c),
                            d.show(c.difference(beta)),
                            d.show(b),
                            d.show(b.difference(alpha))
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Basis pairs `(B, α)` of degree `p`: connected `B` ascending, then `α ⊆ B`
/// with `|α| = p` in ascending lexicographic order.
pub fn dynkin_basis(d: &Diagram, p: usize) -> Result<Vec<(Subdiagram, Vec<usize>)>> {
    if p > d.len() {
        return Err(Error::OutOfRange {
            what: "p",
            value: p,
            max: d.len(),
        });
    }
    let mut out = Vec::new();
    for b in d.connected_subdiagrams(d.vertices()) {
        let mut alphas: Vec<Subdiagram> = subsets(b).filter(|a| a.len() == p).collect();
        alphas.sort();
        out.extend(alphas.into_iter().map(|a| (b, a.to_vec())));
    }
    Ok(out)
}

#[derive(Clone, Debug)]
struct Slot {
    b: Subdiagram,
    alpha: Subdiagram,
    offset: usize,
}

/// `CD^*(D;M)` in the coordinates of the chosen subspace bases.
#[derive(Clone, Debug)]
pub struct DynkinComplex<'a> {
    diagram: Diagram,
    coefficients: &'a CoefficientSystem,
    slots: Vec<Vec<Slot>>,
    index: Vec<HashMap<(Subdiagram, Subdiagram), usize>>,
    dims: Vec<usize>,
}

impl<'a> DynkinComplex<'a> {
    pub fn new(d: &Diagram, m: &'a CoefficientSystem) -> Result<Self> {
        let mut slots = Vec::new();
        let mut index = Vec::new();
        let mut dims = Vec::new();
        for p in 0..=d.len() {
            let mut row = Vec::new();
            let mut idx = HashMap::new();
            let mut offset = 0;
            for (b, alpha) in dynkin_basis(d, p)? {
                let alpha = Subdiagram::from_indices(alpha);
                let s = if p == 0 { b } else { b.difference(alpha) };
                let dim = m.space(b, s)?.dim();
                idx.insert((b, alpha), row.len());
                row.push(Slot { b, alpha, offset });
                offset += dim;
            }
            slots.push(row);
            index.push(idx);
            dims.push(offset);
        }
        Ok(DynkinComplex {
            diagram: d.clone(),
            coefficients: m,
            slots,
            index,
            dims,
        })
    }

    /// `dim CD^p` for `p = 0, …, |D|`.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    fn space(&self, p: usize, slot: &Slot) -> &Subspace {
        let s = if p == 0 { slot.b } else { slot.b.difference(slot.alpha) };
        self.coefficients.space(slot.b, s).expect("validated at construction")
    }

    fn slot(&self, p: usize, b: Subdiagram, alpha: Subdiagram) -> &Slot {
        &self.slots[p][self.index[p][&(b, alpha)]]
    }

    /// Adds `sign · coords_T ∘ basis_S` into the block for target `t`, source `s`.
    fn add_block(&self, out: &mut Matrix, p: usize, t: &Slot, s: &Slot, sign: i64) {
        let tspace = self.space(p + 1, t);
        let sspace = self.space(p, s);
        let block = tspace.coords.mul(&sspace.basis);
        let sign = rational::int(sign);
        for i in 0..block.rows() {
            for j in 0..block.cols() {
                if !block[(i, j)].is_zero() {
                    out[(t.offset + i, s.offset + j)] += &block[(i, j)] * &sign;
                }
            }
        }
    }

    /// The matrix of `d: CD^p → CD^{p+1}` (zero rows for `p = |D|`).
    ///
    /// `(dm)(B;α_i) = m_B − Σ_C m_C` over the components `C` of `B∖α_i` for
    /// `p = 0`; for `p ≥ 1`, `(dm)(B;α) = Σ_i (−1)^{i−1} [m(B;α∖α_i) − m(B_i;α∖α_i)]`
    /// with `B_i` the component of `B∖α_i` containing `α∖α_i`, dropped when empty.
    pub fn differential(&self, p: usize) -> Result<Matrix> {
        let d = &self.diagram;
        if p > d.len() {
            return Err(Error::OutOfRange {
                what: "p",
                value: p,
                max: d.len(),
            });
        }
        if p == d.len() {
            return Ok(Matrix::zeros(0, self.dims[p]));
        }
        let mut out = Matrix::zeros(self.dims[p + 1], self.dims[p]);
        for t in &self.slots[p + 1] {
            if p == 0 {
                let a = t.alpha.least().expect("degree-1 slots have one vertex");
                self.add_block(&mut out, 0, t, self.slot(0, t.b, Subdiagram::EMPTY), 1);
                for c in d.components_of(t.b.without(a)) {
                    self.add_block(&mut out, 0, t, self.slot(0, c, Subdiagram::EMPTY), -1);
                }
                continue;
            }
            for (i, a) in t.alpha.iter().enumerate() {
                let sign = if i % 2 == 0 { 1 } else { -1 };
                let beta = t.alpha.without(a);
                self.add_block(&mut out, p, t, self.slot(p, t.b, beta), sign);
                let c = d.component_with(t.b, Subdiagram::singleton(a), beta);
                if !c.is_empty() {
                    self.add_block(&mut out, p, t, self.slot(p, c, beta), -sign);
                }
            }
        }
        Ok(out)
    }

    /// `dim HD^p = dim CD^p − rank d_p − rank d_{p−1}` for `p = 0, …, |D|`.
    pub fn cohomology(&self) -> Result<Vec<usize>> {
        let n = self.diagram.len();
        let ranks: Vec<usize> = (0..=n)
            .map(|p| self.differential(p).map(|m| m.rank()))
            .collect::<Result<_>>()?;
        Ok((0..=n)
            .map(|p| self.dims[p] - ranks[p] - if p > 0 { ranks[p - 1] } else { 0 })
            .collect())
    }

    /// The ambient vector of the `(B;α)` component of a degree-`p` cochain.
    pub fn component(&self, cochain: &DynkinCochain, b: Subdiagram, alpha: Subdiagram) -> Result<Vec<Q>> {
        let p = cochain.degree;
        let slot = self
            .index
            .get(p)
            .and_then(|idx| idx.get(&(b, alpha)))
            .map(|&i| &self.slots[p][i])
            .ok_or_else(|| Error::InvalidArgument(format!("no degree-{p} slot ({b:?}, {alpha:?})")))?;
        let space = self.space(p, slot);
        let coords = &cochain.coords[slot.offset..slot.offset + space.dim()];
        Ok(space.basis.mul_vec(coords))
    }
}

/// A Dynkin cochain in subspace coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DynkinCochain {
    pub degree: usize,
    pub coords: Vec<Q>,
}

pub fn dynkin_differential(d: &Diagram, m: &CoefficientSystem, p: usize) -> Result<Matrix> {
    DynkinComplex::new(d, m)?.differential(p)
}

pub fn dynkin_cohomology(d: &Diagram, m: &CoefficientSystem) -> Result<Vec<usize>> {
    DynkinComplex::new(d, m)?.cohomology()
}

/// The embedding `g^k: CD^k → C^{k−1}(A_D; Q^N)` and the cellular coboundary.
///
/// Cellular `(k−1)`-cochains are stacked per cell (in canonical cell order),
/// `N` coordinates each; degree −1 is the single augmentation slot.
pub struct CellularEmbedding<'a> {
    dynkin: DynkinComplex<'a>,
    cells: ChainComplex,
}

impl<'a> CellularEmbedding<'a> {
    pub fn new(d: &Diagram, m: &'a CoefficientSystem) -> Result<Self> {
        Ok(CellularEmbedding {
            dynkin: DynkinComplex::new(d, m)?,
            cells: ChainComplex::new(d),
        })
    }

    pub fn dynkin(&self) -> &DynkinComplex<'a> {
        &self.dynkin
    }

    fn n(&self) -> usize {
        self.dynkin.coefficients.ambient_dim
    }

    /// Cells of dimension `k − 1` (`None` for the augmentation degree `k = 0`).
    fn cells_below(&self, k: usize) -> Option<&[NestedSet]> {
        (k > 0).then(|| self.cells.cells(k - 1))
    }

    fn cochain_len(&self, k: usize) -> usize {
        self.cells_below(k).map_or(1, <[NestedSet]>::len) * self.n()
    }

    /// `g^0 m = m_D`; `g^1 m (F) = Σ_{B∈F} m(B;α^B_F)`; for `k ≥ 2`,
    /// `g^k m (H) = m(B;α^B_H)` when `B` is the only unsaturated element of `H`,
    /// and 0 otherwise.
    pub fn matrix(&self, k: usize) -> Result<Matrix> {
        let d = &self.dynkin.diagram;
        if k > d.len() {
            return Err(Error::OutOfRange {
                what: "k",
                value: k,
                max: d.len(),
            });
        }
        let n = self.n();
        let mut out = Matrix::zeros(self.cochain_len(k), self.dynkin.dims[k]);
        let place = |out: &mut Matrix, row: usize, b: Subdiagram, alpha: Subdiagram| {
            let slot = self.dynkin.slot(k, b, alpha);
            let basis = &self.dynkin.space(k, slot).basis;
            for i in 0..n {
                for j in 0..basis.cols() {
                    out[(row * n + i, slot.offset + j)] += &basis[(i, j)];
                }
            }
        };
        match self.cells_below(k) {
            None => place(&mut out, 0, d.vertices(), Subdiagram::EMPTY),
            Some(cells) => {
                for (r, h) in cells.iter().enumerate() {
                    if k == 1 {
                        for b in h.iter() {
                            place(&mut out, r, b, h.alpha_of(b));
                        }
                    } else {
                        let unsat = h.unsaturated();
                        if unsat.len() == 1 {
                            place(&mut out, r, unsat[0].0, unsat[0].1);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// `δ: C^{k−1} → C^k`, `(δc)(H) = c(∂H)`; from the augmentation degree
    /// it is the constant extension `c ↦ (F ↦ c)`.
    pub fn coboundary(&self, k: usize) -> Result<Matrix> {
        let n = self.n();
        let mut out = Matrix::zeros(self.cochain_len(k + 1), self.cochain_len(k));
        if k == 0 {
            for r in 0..self.cells.cells(0).len() {
                for i in 0..n {
                    out[(r * n + i, i)] = rational::int(1);
                }
            }
            return Ok(out);
        }
        let bd = self.cells.boundary_matrix(k)?;
        for &(lower, upper, v) in &bd.entries {
            for i in 0..n {
                out[(upper * n + i, lower * n + i)] = rational::int(v);
            }
        }
        Ok(out)
    }
}

/// A cellular cochain of degree `k − 1 ≥ −1`: one vector of `Q^N` per cell,
/// cells in canonical order (a single entry in degree −1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellularCochain {
    pub degree: i64,
    pub values: Vec<Vec<Q>>,
}

/// `g^k` applied to a Dynkin cochain of degree `k`.
pub fn cellular_embedding_g(
    d: &Diagram,
    m: &CoefficientSystem,
    cochain: &DynkinCochain,
) -> Result<CellularCochain> {
    let emb = CellularEmbedding::new(d, m)?;
    let k = cochain.degree;
    if k > d.len() || cochain.coords.len() != emb.dynkin.dims[k] {
        return Err(Error::InvalidArgument(format!(
            "cochain of degree {k} with {} coordinates",
            cochain.coords.len()
        )));
    }
    let flat = emb.matrix(k)?.mul_vec(&cochain.coords);
    let n = emb.n();
    Ok(CellularCochain {
        degree: k as i64 - 1,
        values: flat.chunks(n.max(1)).map(<[Q]>::to_vec).collect(),
    })
}

/// Outcome of [`verify_chain_map`]: `ok` with no failures, or the failures found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMapReport {
    pub ok: bool,
    pub failures: Vec<String>,
}

/// Checks `δ ∘ g^k = g^{k+1} ∘ d` on `trials` seeded random cochains in every
/// degree, injectivity of `g^k` for `k ≥ 2`, and on every basis element of
/// degree `k ≥ 2`: vanishing on reducible cells, equal values on cells with
/// the same unsaturated element and α-set, and values in `M(B, B∖α)`.
pub fn verify_chain_map(
    d: &Diagram,
    m: &CoefficientSystem,
    trials: usize,
    seed: u64,
) -> Result<ChainMapReport> {
    let complex = DynkinComplex::new(d, m)?;
    verify_chain_map_with(d, m, trials, seed, |p| complex.differential(p))
}

/// [`verify_chain_map`] against an arbitrary candidate differential.
pub fn verify_chain_map_with(
    d: &Diagram,
    m: &CoefficientSystem,
    trials: usize,
    seed: u64,
    differential: impl Fn(usize) -> Result<Matrix>,
) -> Result<ChainMapReport> {
    let emb = CellularEmbedding::new(d, m)?;
    let n = d.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let g: Vec<Matrix> = (0..=n).map(|k| emb.matrix(k)).collect::<Result<_>>()?;
    for k in 0..n {
        let dk = differential(k)?;
        let delta = emb.coboundary(k)?;
        for trial in 0..trials {
            let x: Vec<Q> = (0..emb.dynkin.dims[k])
                .map(|_| Q::new(rng.gen_range(-6..=6).into(), rng.gen_range(1..=4).into()))
                .collect();
            let lhs = delta.mul_vec(&g[k].mul_vec(&x));
            let rhs = g[k + 1].mul_vec(&dk.mul_vec(&x));
            if lhs != rhs {
                failures.push(format!("degree {k}, trial {trial}: δ∘g ≠ g∘d"));
                break;
            }
        }
    }
    for (k, gk) in g.iter().enumerate().skip(2) {
        let rank = gk.rank();
        if rank != emb.dynkin.dims[k] {
            failures.push(format!(
                "g^{k} has rank {rank} on a space of dimension {}",
                emb.dynkin.dims[k]
            ));
        }
        failures.extend(image_clauses(&emb, k, gk));
    }
    Ok(ChainMapReport {
        ok: failures.is_empty(),
        failures,
    })
}

fn image_clauses(emb: &CellularEmbedding<'_>, k: usize, gk: &Matrix) -> Vec<String> {
    let d = &emb.dynkin.diagram;
    let n = emb.n();
    let cells = emb.cells_below(k).expect("k ≥ 2");
    let mut out = Vec::new();
    for col in 0..gk.cols() {
        let value = |r: usize| -> Vec<Q> { (0..n).map(|i| gk[(r * n + i, col)].clone()).collect() };
        let mut seen: HashMap<(Subdiagram, Subdiagram), Vec<Q>> = HashMap::new();
        for (r, h) in cells.iter().enumerate() {
            let v = value(r);
            let unsat = h.unsaturated();
            if unsat.len() != 1 {
                if v.iter().any(|x| !x.is_zero()) {
                    out.push(format!("g^{k} does not vanish on reducible {}", h.show(d)));
                }
                continue;
            }
            let (b, alpha) = unsat[0];
            if let Some(prev) = seen.get(&(b, alpha)) {
                if *prev != v {
                    out.push(format!("g^{k} differs on cells with unsaturated {}", d.show(b)));
                }
            } else {
                let space = emb
                    .dynkin
                    .coefficients
                    .space(b, b.difference(alpha))
                    .expect("validated");
                if !space.basis.spans(&Matrix::from_columns(n, std::slice::from_ref(&v))) {
                    out.push(format!("g^{k} value at {} leaves M(B, B∖α)", h.show(d)));
                }
                seen.insert((b, alpha), v);
            }
        }
    }
    out
}
