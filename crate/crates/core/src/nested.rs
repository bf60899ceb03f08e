//! Nested sets: the face poset of the associahedron `A_D`.
//!
//! A nested set is a family of pairwise compatible connected subdiagrams
//! containing `D`. Faces of `A_D` are nested sets ordered by reverse
//! inclusion; vertices are the maximal ones, of cardinality `|D|`.

use serde_json::{json, Value};

use crate::diagram::{Diagram, Quotient, Subdiagram};
use crate::error::{Error, Result};

/// A nested set, stored as its elements in ascending [`Subdiagram`] order (so the
/// full diagram comes last). Nested sets compare lexicographically on that list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NestedSet {
    elements: Vec<Subdiagram>,
}

fn check_family(d: &Diagram, elements: &[Subdiagram]) -> Result<Option<String>> {
    for &b in elements {
        d.check_subset(b)?;
    }
    if !elements.contains(&d.vertices()) {
        return Ok(Some("the full diagram is missing".into()));
    }
    for &b in elements {
        if !d.is_connected(b) {
            return Ok(Some(format!("{} is not connected", d.show(b))));
        }
    }
    for (i, &a) in elements.iter().enumerate() {
        for &b in &elements[i + 1..] {
            if !d.compatible(a, b) {
                return Ok(Some(format!(
                    "{} and {} are not compatible",
                    d.show(a),
                    d.show(b)
                )));
            }
        }
    }
    Ok(None)
}

/// Whether `elements` contains `D`, consists of connected subdiagrams and is
/// pairwise compatible.
pub fn is_nested(d: &Diagram, elements: &[Subdiagram]) -> Result<bool> {
    Ok(check_family(d, elements)?.is_none())
}

impl NestedSet {
    pub fn new(d: &Diagram, elements: impl IntoIterator<Item = Subdiagram>) -> Result<Self> {
        let h = NestedSet::from_unchecked(elements.into_iter().collect());
        match check_family(d, &h.elements)? {
            None => Ok(h),
            Some(reason) => Err(Error::NotNested(reason)),
        }
    }

    pub(crate) fn from_unchecked(mut elements: Vec<Subdiagram>) -> Self {
        elements.sort();
        elements.dedup();
        NestedSet { elements }
    }

    /// The nested set `{D}`, the top face.
    pub fn top(d: &Diagram) -> Self {
        NestedSet {
            elements: vec![d.vertices()],
        }
    }

    pub fn elements(&self) -> &[Subdiagram] {
        &self.elements
    }

    pub fn iter(&self) -> impl Iterator<Item = Subdiagram> + '_ {
        self.elements.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, b: Subdiagram) -> bool {
        self.elements.binary_search(&b).is_ok()
    }

    /// `|D| − |H|`.
    pub fn dim(&self, d: &Diagram) -> usize {
        d.len() - self.len()
    }

    pub fn is_maximal(&self, d: &Diagram) -> bool {
        self.len() == d.len()
    }

    pub(crate) fn with(&self, b: Subdiagram) -> Self {
        let mut e = self.elements.clone();
        e.push(b);
        NestedSet::from_unchecked(e)
    }

    pub fn intersection(&self, other: &NestedSet) -> NestedSet {
        NestedSet {
            elements: self.iter().filter(|&b| other.contains(b)).collect(),
        }
    }

    /// Elements of `self` not in `other`, ascending.
    pub fn difference(&self, other: &NestedSet) -> Vec<Subdiagram> {
        self.iter().filter(|&b| !other.contains(b)).collect()
    }

    /// Elements properly contained in `b`.
    pub(crate) fn below(&self, b: Subdiagram) -> Vec<Subdiagram> {
        self.iter().filter(|&c| c.is_proper_subset(b)).collect()
    }

    /// The maximal elements properly contained in `b`.
    pub fn children(&self, b: Subdiagram) -> Vec<Subdiagram> {
        let below = self.below(b);
        below
            .iter()
            .copied()
            .filter(|&c| !below.iter().any(|&e| c.is_proper_subset(e)))
            .collect()
    }

    /// `i_H(B)`: the union of the maximal elements properly contained in `b`.
    pub fn inner(&self, b: Subdiagram) -> Subdiagram {
        self.below(b)
            .into_iter()
            .fold(Subdiagram::EMPTY, Subdiagram::union)
    }

    pub(crate) fn alpha_of(&self, b: Subdiagram) -> Subdiagram {
        b.difference(self.inner(b))
    }

    /// `α^B_H = B ∖ i_H(B)`.
    pub fn alpha(&self, b: Subdiagram) -> Result<Subdiagram> {
        if !self.contains(b) {
            return Err(Error::InvalidArgument(format!(
                "subdiagram {b:?} is not an element of the nested set"
            )));
        }
        Ok(self.alpha_of(b))
    }

    /// The single vertex of `α^B_H`, for maximal nested sets.
    pub(crate) fn alpha_vertex(&self, b: Subdiagram) -> usize {
        let a = self.alpha_of(b);
        debug_assert_eq!(a.len(), 1);
        a.least().expect("alpha sets are nonempty")
    }

    /// Elements with `|α^B_H| ≥ 2` and their α-sets, ordered by least vertex
    /// and then by size.
    pub fn unsaturated(&self) -> Vec<(Subdiagram, Subdiagram)> {
        let mut out: Vec<(Subdiagram, Subdiagram)> = self
            .iter()
            .map(|b| (b, self.alpha_of(b)))
            .filter(|(_, a)| a.len() >= 2)
            .collect();
        out.sort_by_key(|(b, _)| unsaturated_key(*b));
        out
    }

    pub fn show(&self, d: &Diagram) -> String {
        let parts: Vec<String> = self.elements.iter().rev().map(|&b| d.show(b)).collect();
        format!("[{}]", parts.join(","))
    }

    /// Elements as lists of vertex identifiers, largest first.
    pub fn to_json(&self, d: &Diagram) -> Value {
        Value::Array(
            self.elements
                .iter()
                .rev()
                .map(|&b| d.subdiagram_json(b))
                .collect(),
        )
    }

    /// `{elements, dim, unsaturated: [{B, alpha}]}`.
    pub fn face_json(&self, d: &Diagram) -> Value {
        let unsat: Vec<Value> = self
            .unsaturated()
            .into_iter()
            .map(|(b, a)| json!({"B": d.subdiagram_json(b), "alpha": d.subdiagram_json(a)}))
            .collect();
        json!({"elements": self.to_json(d), "dim": self.dim(d), "unsaturated": unsat})
    }
}

pub(crate) fn unsaturated_key(b: Subdiagram) -> (usize, usize) {
    (b.least().unwrap_or(usize::MAX), b.len())
}

/// Parses `"1 2 3;1 2;1"`: subdiagrams as vertex identifiers separated by
/// semicolons. The full diagram is added when omitted.
pub fn parse_nested_set(d: &Diagram, text: &str) -> Result<NestedSet> {
    let mut elements = vec![d.vertices()];
    for part in text.split(';') {
        let b = d.parse_subdiagram(part)?;
        if b.is_empty() {
            if text.trim().is_empty() {
                break;
            }
            return Err(Error::parse(1, format!("empty subdiagram in {text:?}")));
        }
        elements.push(b);
    }
    NestedSet::new(d, elements)
}

/// All maximal nested sets on the connected subdiagram `b` that contain
/// `inner` (elements strictly inside `b`, assumed nested together with `b`).
pub(crate) fn extensions_on(d: &Diagram, b: Subdiagram, inner: &[Subdiagram]) -> Vec<Vec<Subdiagram>> {
    let covered = inner.iter().fold(Subdiagram::EMPTY, |acc, &c| acc.union(c));
    let mut out = Vec::new();
    for a in b.difference(covered).iter() {
        let mut partial: Vec<Vec<Subdiagram>> = vec![vec![b]];
        for comp in d.components_of(b.without(a)) {
            let sub: Vec<Subdiagram> = inner
                .iter()
                .copied()
                .filter(|&c| c.is_proper_subset(comp))
                .collect();
            let options = extensions_on(d, comp, &sub);
            let mut next = Vec::with_capacity(partial.len() * options.len());
            for p in &partial {
                for o in &options {
                    let mut e = p.clone();
                    e.extend_from_slice(o);
                    next.push(e);
                }
            }
            partial = next;
        }
        out.extend(partial);
    }
    out
}

/// The vertices of the face `H`: all maximal nested sets containing `h`, sorted.
pub fn maximal_extensions(d: &Diagram, h: &NestedSet) -> Vec<NestedSet> {
    let top = d.vertices();
    let inner = h.below(top);
    let mut out: Vec<NestedSet> = extensions_on(d, top, &inner)
        .into_iter()
        .map(NestedSet::from_unchecked)
        .collect();
    out.sort();
    out
}

/// All maximal nested sets of a connected diagram, sorted; empty when `D` is
/// disconnected.
pub fn maximal_nested_sets(d: &Diagram) -> Vec<NestedSet> {
    if !d.is_connected(d.vertices()) {
        return Vec::new();
    }
    maximal_extensions(d, &NestedSet::top(d))
}

/// All nested sets of a connected diagram, sorted.
///
/// Depth-first extension over the proper connected subdiagrams in ascending
/// order, keeping only families that stay pairwise compatible.
pub fn nested_sets(d: &Diagram) -> Vec<NestedSet> {
    let top = d.vertices();
    if !d.is_connected(top) {
        return Vec::new();
    }
    let proper: Vec<Subdiagram> = d
        .connected_subdiagrams(top)
        .into_iter()
        .filter(|&b| b != top)
        .collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    extend_family(d, &proper, 0, &mut chosen, &mut out);
    out.sort();
    out
}

fn extend_family(
    d: &Diagram,
    candidates: &[Subdiagram],
    start: usize,
    chosen: &mut Vec<Subdiagram>,
    out: &mut Vec<NestedSet>,
) {
    let mut e = chosen.clone();
    e.push(d.vertices());
    out.push(NestedSet::from_unchecked(e));
    for i in start..candidates.len() {
        let c = candidates[i];
        if chosen.iter().all(|&x| d.compatible(x, c)) {
            chosen.push(c);
            extend_family(d, candidates, i + 1, chosen, out);
            chosen.pop();
        }
    }
}

/// The nested sets of dimension `dim`, sorted.
pub fn faces(d: &Diagram, dim: usize) -> Result<Vec<NestedSet>> {
    let max = d.len().saturating_sub(1);
    if dim > max {
        return Err(Error::OutOfRange {
            what: "dim",
            value: dim,
            max,
        });
    }
    Ok(nested_sets(d)
        .into_iter()
        .filter(|h| h.dim(d) == dim)
        .collect())
}

/// Face counts `f_0, …, f_{|D|−1}`.
pub fn f_vector(d: &Diagram) -> Vec<usize> {
    let mut f = vec![0; d.len()];
    for h in nested_sets(d) {
        f[h.dim(d)] += 1;
    }
    f
}

/// The quotients `D_j / i_H(D_j)` over the unsaturated elements `D_j` of `h`,
/// in canonical order. The face of `A_D` at `h` is the product of their
/// associahedra.
pub fn face_factorization(d: &Diagram, h: &NestedSet) -> Vec<Quotient> {
    h.unsaturated()
        .into_iter()
        .map(|(b, _)| Quotient::new(d, b, h.inner(b)))
        .collect()
}

/// The 1-skeleton of `A_D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeGraph {
    pub vertices: Vec<NestedSet>,
    /// Index pairs `(i, j)` with `i < j`, sorted.
    pub edges: Vec<(usize, usize)>,
}

impl EdgeGraph {
    pub fn neighbours(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }
}

/// Maximal nested sets joined when they differ in exactly one element. Each
/// edge is the pair of maximal extensions of a nested set of cardinality
/// `|D| − 1`.
pub fn edge_graph(d: &Diagram) -> EdgeGraph {
    let vertices = maximal_nested_sets(d);
    let mut edges = Vec::new();
    if d.len() >= 2 {
        for h in nested_sets(d).iter().filter(|h| h.dim(d) == 1) {
            let ends = maximal_extensions(d, h);
            debug_assert_eq!(ends.len(), 2);
            let i = vertices.binary_search(&ends[0]).expect("vertex listed");
            let j = vertices.binary_search(&ends[1]).expect("vertex listed");
            edges.push((i.min(j), i.max(j)));
        }
    }
    edges.sort_unstable();
    EdgeGraph { vertices, edges }
}

/// Shape of a 2-dimensional face.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum TwoFace {
    Square,
    Pentagon,
    Hexagon,
}

impl TwoFace {
    pub fn sides(self) -> usize {
        match self {
            TwoFace::Square => 4,
            TwoFace::Pentagon => 5,
            TwoFace::Hexagon => 6,
        }
    }
}

fn require_dim_two(d: &Diagram, h: &NestedSet) -> Result<()> {
    if h.dim(d) != 2 {
        return Err(Error::InvalidArgument(format!(
            "face {} has dimension {}, expected 2",
            h.show(d),
            h.dim(d)
        )));
    }
    Ok(())
}

/// Square for two unsaturated elements; otherwise the three-vertex quotient
/// `B / i_H(B)` is a triangle (hexagon) or a path (pentagon).
pub fn classify_two_face(d: &Diagram, h: &NestedSet) -> Result<TwoFace> {
    require_dim_two(d, h)?;
    let unsat = h.unsaturated();
    let shape = if unsat.len() == 2 {
        TwoFace::Square
    } else {
        let (b, _) = unsat[0];
        let q = Quotient::new(d, b, h.inner(b));
        match q.diagram.edges().count() {
            3 => TwoFace::Hexagon,
            _ => TwoFace::Pentagon,
        }
    };
    debug_assert_eq!(maximal_extensions(d, h).len(), shape.sides());
    Ok(shape)
}

/// The vertices of a 2-face in boundary order, starting from the least vertex
/// and stepping first to its lesser neighbour.
pub fn two_face_cycle(d: &Diagram, h: &NestedSet) -> Result<Vec<NestedSet>> {
    require_dim_two(d, h)?;
    let verts = maximal_extensions(d, h);
    let adjacent = |a: &NestedSet, b: &NestedSet| a.difference(b).len() == 1;
    let mut cycle = vec![0usize];
    let mut prev = usize::MAX;
    let mut cur = 0;
    loop {
        let next = (0..verts.len())
            .find(|&j| j != cur && j != prev && adjacent(&verts[cur], &verts[j]))
            .expect("2-faces are polygons");
        if next == 0 {
            break;
        }
        cycle.push(next);
        prev = cur;
        cur = next;
        assert!(cycle.len() <= verts.len(), "boundary walk did not close");
    }
    debug_assert_eq!(cycle.len(), verts.len());
    Ok(cycle.into_iter().map(|i| verts[i].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(d: &Diagram, ids: &[&str]) -> Subdiagram {
        Subdiagram::from_indices(ids.iter().map(|id| d.index_of(id).unwrap()))
    }

    fn h(d: &Diagram, parts: &[&[&str]]) -> NestedSet {
        NestedSet::new(d, parts.iter().map(|p| s(d, p))).unwrap()
    }

    const D3: &[&str] = &["1", "2", "3"];
    const D5: &[&str] = &["1", "2", "3", "4", "5"];

    #[test]
    fn is_nested_examples() {
        let d = Diagram::path(3).unwrap();
        let full = d.vertices();
        assert!(is_nested(&d, &[full, s(&d, &["1", "2"]), s(&d, &["1"])]).unwrap());
        assert!(!is_nested(&d, &[full, s(&d, &["1", "2"]), s(&d, &["2", "3"])]).unwrap());
        assert!(!is_nested(&d, &[s(&d, &["1"])]).unwrap());
        assert!(!is_nested(&d, &[full, s(&d, &["1", "3"])]).unwrap());
        assert!(is_nested(&d, &[Subdiagram::singleton(7)]).is_err());
    }

    #[test]
    fn maximal_nested_set_examples() {
        let p2 = Diagram::path(2).unwrap();
        assert_eq!(
            maximal_nested_sets(&p2),
            vec![h(&p2, &[&["1", "2"], &["1"]]), h(&p2, &[&["1", "2"], &["2"]])]
        );
        assert_eq!(maximal_nested_sets(&Diagram::path(3).unwrap()).len(), 5);
        assert_eq!(maximal_nested_sets(&Diagram::cycle(3).unwrap()).len(), 6);
        let disconnected = parse_diagram_str("vertices: 1 2\nedges:");
        assert!(maximal_nested_sets(&disconnected).is_empty());
    }

    fn parse_diagram_str(t: &str) -> Diagram {
        crate::diagram::parse_diagram(t).unwrap()
    }

    #[test]
    fn faces_examples() {
        let p3 = Diagram::path(3).unwrap();
        assert_eq!(faces(&p3, 2).unwrap(), vec![NestedSet::top(&p3)]);
        assert_eq!(faces(&p3, 1).unwrap().len(), 5);
        assert_eq!(faces(&Diagram::path(2).unwrap(), 0).unwrap().len(), 2);
        assert!(matches!(faces(&p3, 3), Err(Error::OutOfRange { .. })));
        assert_eq!(f_vector(&p3), vec![5, 5, 1]);
    }

    #[test]
    fn alpha_set_examples() {
        let d = Diagram::path(3).unwrap();
        let x = h(&d, &[D3, &["1", "2"], &["1"]]);
        assert_eq!(x.alpha(s(&d, &["1", "2"])).unwrap(), s(&d, &["2"]));
        assert_eq!(x.alpha(d.vertices()).unwrap(), s(&d, &["3"]));
        assert_eq!(NestedSet::top(&d).alpha(d.vertices()).unwrap(), d.vertices());
        assert!(x.alpha(s(&d, &["2"])).is_err());
    }

    #[test]
    fn unsaturated_examples() {
        let d = Diagram::path(3).unwrap();
        for m in maximal_nested_sets(&d) {
            assert!(m.unsaturated().is_empty());
        }
        assert_eq!(
            NestedSet::top(&d).unsaturated(),
            vec![(d.vertices(), d.vertices())]
        );
        let p5 = Diagram::path(5).unwrap();
        let x = h(&p5, &[D5, &["1", "2"], &["4", "5"]]);
        let a = s(&p5, &["1", "2"]);
        let b = s(&p5, &["4", "5"]);
        assert_eq!(x.unsaturated(), vec![(a, a), (b, b)]);
        assert_eq!(x.alpha(p5.vertices()).unwrap(), s(&p5, &["3"]));
    }

    #[test]
    fn face_factorization_examples() {
        let p3 = Diagram::path(3).unwrap();
        let f = face_factorization(&p3, &NestedSet::top(&p3));
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].diagram, p3);

        let p5 = Diagram::path(5).unwrap();
        let x = h(&p5, &[D5, &["1", "2"], &["4", "5"]]);
        let f = face_factorization(&p5, &x);
        assert_eq!(f.len(), 2);
        for q in &f {
            assert_eq!(q.diagram.len(), 2);
            assert!(q.diagram.is_connected(q.diagram.vertices()));
        }

        let x = h(&p3, &[D3, &["2"]]);
        let f = face_factorization(&p3, &x);
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].diagram.ids(), ["1", "3"]);
        assert_eq!(f[0].diagram.edges().count(), 1);

        assert!(face_factorization(&p3, &maximal_nested_sets(&p3)[0]).is_empty());
    }

    #[test]
    fn edge_graph_examples() {
        let g = edge_graph(&Diagram::path(2).unwrap());
        assert_eq!(g.vertices.len(), 2);
        assert_eq!(g.edges, vec![(0, 1)]);
        for (d, n) in [(Diagram::path(3).unwrap(), 5), (Diagram::cycle(3).unwrap(), 6)] {
            let g = edge_graph(&d);
            assert_eq!(g.vertices.len(), n);
            assert_eq!(g.edges.len(), n);
            for v in 0..n {
                assert_eq!(g.neighbours(v).len(), 2);
            }
        }
        assert!(edge_graph(&Diagram::path(1).unwrap()).edges.is_empty());
    }

    #[test]
    fn two_face_examples() {
        let p3 = Diagram::path(3).unwrap();
        assert_eq!(classify_two_face(&p3, &NestedSet::top(&p3)).unwrap(), TwoFace::Pentagon);
        let c3 = Diagram::cycle(3).unwrap();
        assert_eq!(classify_two_face(&c3, &NestedSet::top(&c3)).unwrap(), TwoFace::Hexagon);
        let p5 = Diagram::path(5).unwrap();
        let x = h(&p5, &[D5, &["1", "2"], &["4", "5"]]);
        assert_eq!(classify_two_face(&p5, &x).unwrap(), TwoFace::Square);
        assert!(classify_two_face(&p3, &maximal_nested_sets(&p3)[0]).is_err());

        let cycle = two_face_cycle(&p3, &NestedSet::top(&p3)).unwrap();
        assert_eq!(cycle.len(), 5);
        for i in 0..5 {
            assert_eq!(cycle[i].difference(&cycle[(i + 1) % 5]).len(), 1);
        }
    }

    #[test]
    fn parse_nested_set_syntax() {
        let d = Diagram::path(3).unwrap();
        let x = parse_nested_set(&d, "1 2 3;1 2;1").unwrap();
        assert_eq!(x, h(&d, &[D3, &["1", "2"], &["1"]]));
        assert_eq!(parse_nested_set(&d, "1 2;1").unwrap(), x);
        assert_eq!(parse_nested_set(&d, "").unwrap(), NestedSet::top(&d));
        assert!(matches!(parse_nested_set(&d, "1 2;2 3"), Err(Error::NotNested(_))));
        assert!(parse_nested_set(&d, "1 9").unwrap_err().is_parse());
        assert!(parse_nested_set(&d, "1;;2").unwrap_err().is_parse());
    }

    #[test]
    fn face_json_shape() {
        let p3 = Diagram::path(3).unwrap();
        let v = NestedSet::top(&p3).face_json(&p3);
        assert_eq!(
            v,
            json!({"elements": [[1, 2, 3]], "dim": 2, "unsaturated": [{"B": [1, 2, 3], "alpha": [1, 2, 3]}]})
        );
    }
}
