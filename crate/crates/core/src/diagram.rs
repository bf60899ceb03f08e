//! Labelled diagrams and their subdiagrams.
//!
//! A [`Diagram`] is a finite simple graph whose vertices carry string
//! identifiers and whose edges carry labels `m_ij ∈ {3, 4, …, ∞}`; non-adjacent
//! pairs are implicitly labelled 2. Subdiagrams are full induced subgraphs
//! and are stored as vertex bitmasks ([`Subdiagram`]), which caps diagrams at 64
//! vertices.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde_json::Value;

use crate::error::{Error, Result};

pub const MAX_VERTICES: usize = 64;

/// A set of vertices of an ambient diagram, as a bitmask over vertex indices.
///
/// The order is by cardinality first, then lexicographic on the ascending
/// vertex index sequence. The empty set sorts first.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Subdiagram(u64);

impl Subdiagram {
    pub const EMPTY: Subdiagram = Subdiagram(0);

    pub const fn from_bits(bits: u64) -> Self {
        Subdiagram(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(v: usize) -> Self {
        debug_assert!(v < MAX_VERTICES);
        Subdiagram(1 << v)
    }

    /// All vertices `0..n`.
    pub fn full(n: usize) -> Self {
        if n >= 64 {
            Subdiagram(u64::MAX)
        } else {
            Subdiagram((1u64 << n) - 1)
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        Subdiagram(it.into_iter().fold(0, |acc, v| acc | (1u64 << v)))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, v: usize) -> bool {
        v < 64 && self.0 >> v & 1 == 1
    }

    pub fn is_subset(self, other: Subdiagram) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_proper_subset(self, other: Subdiagram) -> bool {
        self.is_subset(other) && self != other
    }

    pub fn meets(self, other: Subdiagram) -> bool {
        self.0 & other.0 != 0
    }

    pub fn union(self, other: Subdiagram) -> Self {
        Subdiagram(self.0 | other.0)
    }

    pub fn intersection(self, other: Subdiagram) -> Self {
        Subdiagram(self.0 & other.0)
    }

    pub fn difference(self, other: Subdiagram) -> Self {
        Subdiagram(self.0 & !other.0)
    }

    pub fn with(self, v: usize) -> Self {
        Subdiagram(self.0 | 1 << v)
    }

    pub fn without(self, v: usize) -> Self {
        Subdiagram(self.0 & !(1 << v))
    }

    pub fn least(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Vertex indices in ascending order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(v)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl Ord for Subdiagram {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| {
            // For equal sizes, the set owning the lowest differing vertex has the
            // lexicographically smaller index sequence.
            let diff = self.0 ^ other.0;
            if diff == 0 {
                Ordering::Equal
            } else if self.0 & diff & diff.wrapping_neg() != 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        })
    }
}

impl PartialOrd for Subdiagram {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Subdiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Edge label `m_ij`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Finite(u32),
    Infinite,
}

impl Label {
    pub fn finite(self) -> Option<u32> {
        match self {
            Label::Finite(m) => Some(m),
            Label::Infinite => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Finite(m) => write!(f, "{m}"),
            Label::Infinite => f.write_str("inf"),
        }
    }
}

/// A finite labelled simple graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    ids: Vec<String>,
    adjacency: Vec<u64>,
    labels: BTreeMap<(usize, usize), Label>,
}

impl Diagram {
    /// Builds a diagram from vertex identifiers and labelled edges given by
    /// vertex index.
    pub fn new<S: Into<String>>(
        ids: impl IntoIterator<Item = S>,
        edges: impl IntoIterator<Item = (usize, usize, Label)>,
    ) -> Result<Self> {
        let ids: Vec<String> = ids.into_iter().map(Into::into).collect();
        if ids.len() > MAX_VERTICES {
            return Err(Error::Capacity(ids.len()));
        }
        let mut seen = HashSet::new();
        for id in &ids {
            if !seen.insert(id.as_str()) {
                return Err(Error::InvalidArgument(format!("duplicate vertex {id}")));
            }
        }
        let n = ids.len();
        let mut adjacency = vec![0u64; n];
        let mut labels = BTreeMap::new();
        for (a, b, label) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidArgument(format!(
                    "edge ({a},{b}) references an unknown vertex"
                )));
            }
            if a == b {
                return Err(Error::InvalidArgument(format!("loop at vertex {}", ids[a])));
            }
            if let Label::Finite(m) = label {
                if m < 3 {
                    return Err(Error::InvalidArgument(format!(
                        "edge {}-{} has label {m}; edges need labels >= 3",
                        ids[a], ids[b]
                    )));
                }
            }
            let key = (a.min(b), a.max(b));
            if labels.insert(key, label).is_some() {
                return Err(Error::InvalidArgument(format!(
                    "duplicate edge {}-{}",
                    ids[key.0], ids[key.1]
                )));
            }
            adjacency[a] |= 1 << b;
            adjacency[b] |= 1 << a;
        }
        Ok(Diagram {
            ids,
            adjacency,
            labels,
        })
    }

    fn numbered(n: usize, offset: usize) -> Vec<String> {
        (0..n).map(|i| (i + offset).to_string()).collect()
    }

    /// The path `1 - 2 - … - n` with unlabelled (infinite) edges.
    pub fn path(n: usize) -> Result<Self> {
        Diagram::new(
            Self::numbered(n, 1),
            (1..n).map(|i| (i - 1, i, Label::Infinite)),
        )
    }

    /// The cycle on `1..=n` (`n >= 3`).
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidArgument("a cycle needs 3 vertices".into()));
        }
        Diagram::new(
            Self::numbered(n, 1),
            (0..n).map(|i| (i, (i + 1) % n, Label::Infinite)),
        )
    }

    /// The star with centre `0` and legs `1..=legs`.
    pub fn star(legs: usize) -> Result<Self> {
        Diagram::new(
            Self::numbered(legs + 1, 0),
            (1..=legs).map(|i| (0, i, Label::Infinite)),
        )
    }

    /// The complete graph on `1..=n`.
    pub fn complete(n: usize) -> Result<Self> {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i, j, Label::Infinite));
            }
        }
        Diagram::new(Self::numbered(n, 1), edges)
    }

    /// Diagram on `1..=n` from an adjacency bitmask over the pairs `(i, j)`,
    /// `i < j`, enumerated row by row.
    pub fn from_edge_mask(n: usize, mask: u64) -> Result<Self> {
        let mut edges = Vec::new();
        let mut bit = 0;
        for i in 0..n {
            for j in i + 1..n {
                if mask >> bit & 1 == 1 {
                    edges.push((i, j, Label::Infinite));
                }
                bit += 1;
            }
        }
        Diagram::new(Self::numbered(n, 1), edges)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn vertices(&self) -> Subdiagram {
        Subdiagram::full(self.len())
    }

    pub fn id(&self, v: usize) -> &str {
        &self.ids[v]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|x| x == id)
    }

    pub fn neighbours(&self, v: usize) -> Subdiagram {
        Subdiagram(self.adjacency[v])
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a] >> b & 1 == 1
    }

    /// `m_ij`; 2 for distinct non-adjacent vertices.
    pub fn label(&self, a: usize, b: usize) -> Label {
        self.labels
            .get(&(a.min(b), a.max(b)))
            .copied()
            .unwrap_or(Label::Finite(2))
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, Label)> + '_ {
        self.labels.iter().map(|(&(a, b), &l)| (a, b, l))
    }

    /// Vertices outside `s` adjacent to some vertex of `s`.
    pub fn boundary(&self, s: Subdiagram) -> Subdiagram {
        let mut out = 0;
        for v in s.iter() {
            out |= self.adjacency[v];
        }
        Subdiagram(out & !s.0)
    }

    pub fn check_subset(&self, s: Subdiagram) -> Result<()> {
        if s.is_subset(self.vertices()) {
            Ok(())
        } else {
            Err(Error::NotSubset(s.0))
        }
    }

    /// Human readable `{a,b,c}` rendering using vertex identifiers.
    pub fn show(&self, s: Subdiagram) -> String {
        let parts: Vec<&str> = s.iter().map(|v| self.id(v)).collect();
        format!("{{{}}}", parts.join(","))
    }

    /// Identifier as JSON: a number when it is a plain unsigned integer.
    pub fn id_json(&self, v: usize) -> Value {
        let id = self.id(v);
        match id.parse::<u64>() {
            Ok(n) if n.to_string() == id => Value::from(n),
            _ => Value::from(id),
        }
    }

    pub fn subdiagram_json(&self, s: Subdiagram) -> Value {
        Value::Array(s.iter().map(|v| self.id_json(v)).collect())
    }

    /// Parses whitespace separated vertex identifiers into a subdiagram.
    pub fn parse_subdiagram(&self, text: &str) -> Result<Subdiagram> {
        let mut s = Subdiagram::EMPTY;
        for tok in text.split_whitespace() {
            let v = self
                .index_of(tok)
                .ok_or_else(|| Error::parse(1, format!("unknown vertex {tok}")))?;
            s = s.with(v);
        }
        Ok(s)
    }

    // Unchecked graph algorithms used throughout the crate. The checked
    // variants below validate their arguments first.

    /// Connected components of the induced subgraph on `s`, sorted by least vertex.
    pub(crate) fn components_of(&self, s: Subdiagram) -> Vec<Subdiagram> {
        let mut rest = s.0;
        let mut out = Vec::new();
        while rest != 0 {
            let start = rest & rest.wrapping_neg();
            let comp = self.grow(start, s.0);
            out.push(Subdiagram(comp));
            rest &= !comp;
        }
        out
    }

    fn grow(&self, seed: u64, within: u64) -> u64 {
        let mut comp = seed;
        let mut frontier = seed;
        while frontier != 0 {
            let mut next = 0;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= self.adjacency[v];
            }
            next &= within & !comp;
            comp |= next;
            frontier = next;
        }
        comp
    }

    pub fn is_connected(&self, s: Subdiagram) -> bool {
        match s.least() {
            None => false,
            Some(v) => self.grow(1 << v, s.0) == s.0,
        }
    }

    pub(crate) fn orthogonal(&self, a: Subdiagram, b: Subdiagram) -> bool {
        !a.meets(b) && !self.boundary(a).meets(b)
    }

    pub(crate) fn compatible(&self, a: Subdiagram, b: Subdiagram) -> bool {
        a.is_subset(b) || b.is_subset(a) || self.orthogonal(a, b)
    }

    /// The component of `context ∖ removed` containing all of `anchor`, or
    /// empty when `anchor` is empty, leaves `context`, or is split.
    pub(crate) fn component_with(
        &self,
        context: Subdiagram,
        removed: Subdiagram,
        anchor: Subdiagram,
    ) -> Subdiagram {
        let within = context.difference(removed);
        if anchor.is_empty() || !anchor.is_subset(within) {
            return Subdiagram::EMPTY;
        }
        let start = anchor.0 & anchor.0.wrapping_neg();
        let comp = self.grow(start, within.0);
        if anchor.0 & !comp == 0 {
            Subdiagram(comp)
        } else {
            Subdiagram::EMPTY
        }
    }

    /// All connected subdiagrams contained in `within`, in [`Subdiagram`] order.
    pub fn connected_subdiagrams(&self, within: Subdiagram) -> Vec<Subdiagram> {
        let mut seen: HashSet<u64> = HashSet::new();
        let mut layer: Vec<u64> = within.iter().map(|v| 1u64 << v).collect();
        seen.extend(layer.iter().copied());
        let mut all = layer.clone();
        while !layer.is_empty() {
            let mut next = Vec::new();
            for &s in &layer {
                let ext = self.boundary(Subdiagram(s)).0 & within.0;
                let mut e = ext;
                while e != 0 {
                    let v = e & e.wrapping_neg();
                    e &= e - 1;
                    let t = s | v;
                    if seen.insert(t) {
                        next.push(t);
                    }
                }
            }
            all.extend(next.iter().copied());
            layer = next;
        }
        let mut out: Vec<Subdiagram> = all.into_iter().map(Subdiagram).collect();
        out.sort();
        out
    }

    // Checked operations.

    /// Connected components of the induced subgraph on `s`, sorted by least vertex.
    pub fn components(&self, s: Subdiagram) -> Result<Vec<Subdiagram>> {
        self.check_subset(s)?;
        Ok(self.components_of(s))
    }

    /// No edge joins the two subdiagrams and they are disjoint.
    pub fn is_orthogonal(&self, a: Subdiagram, b: Subdiagram) -> Result<bool> {
        self.check_subset(a)?;
        self.check_subset(b)?;
        Ok(self.orthogonal(a, b))
    }

    /// One contains the other or they are orthogonal.
    pub fn is_compatible(&self, a: Subdiagram, b: Subdiagram) -> Result<bool> {
        self.check_subset(a)?;
        self.check_subset(b)?;
        Ok(self.compatible(a, b))
    }

    /// The connected component of `context ∖ removed` containing `anchor`
    /// (the whole diagram when `context` is `None`), or the empty subdiagram
    /// if `anchor` is split across components.
    pub fn component_containing(
        &self,
        removed: Subdiagram,
        anchor: Subdiagram,
        context: Option<Subdiagram>,
    ) -> Result<Subdiagram> {
        self.check_subset(removed)?;
        self.check_subset(anchor)?;
        let context = context.unwrap_or_else(|| self.vertices());
        self.check_subset(context)?;
        if anchor.meets(removed) {
            return Err(Error::InvalidArgument(format!(
                "anchor {} meets removed set {}",
                self.show(anchor),
                self.show(removed)
            )));
        }
        Ok(self.component_with(context, removed, anchor))
    }

    /// The induced diagram on `s` together with the embedding of its vertex
    /// indices into this diagram.
    pub fn induced(&self, s: Subdiagram) -> (Diagram, Vec<usize>) {
        let embedding = s.to_vec();
        let ids = embedding.iter().map(|&v| self.ids[v].clone());
        let mut edges = Vec::new();
        for (i, &a) in embedding.iter().enumerate() {
            for (j, &b) in embedding.iter().enumerate().skip(i + 1) {
                if self.adjacent(a, b) {
                    edges.push((i, j, self.label(a, b)));
                }
            }
        }
        let d = Diagram::new(ids, edges).expect("induced subgraph of a valid diagram");
        (d, embedding)
    }

    /// `D/B` for a proper nonempty subdiagram `B` of this (connected) diagram.
    pub fn quotient(&self, base: Subdiagram) -> Result<Quotient> {
        self.check_subset(base)?;
        if base.is_empty() || base == self.vertices() {
            return Err(Error::InvalidArgument(
                "quotient needs a proper nonempty subdiagram".into(),
            ));
        }
        Ok(Quotient::new(self, self.vertices(), base))
    }

    /// Lifts a connected subdiagram `a` of `D/B` (in quotient indexing) to `D`.
    pub fn lift(&self, base: Subdiagram, a: Subdiagram) -> Result<Subdiagram> {
        self.quotient(base)?.lift(self, a)
    }
}

/// The quotient `C/B` of the induced diagram on `ambient ⊆ D` by `base ⊆ ambient`.
///
/// Vertices are those of `ambient ∖ base`; two of them are adjacent when they
/// are adjacent in `D` or both touch a common component of `base`. New edges
/// are labelled infinity.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub diagram: Diagram,
    /// Quotient vertex index to ambient-diagram vertex index.
    pub embedding: Vec<usize>,
    pub ambient: Subdiagram,
    pub base: Subdiagram,
    base_components: Vec<Subdiagram>,
}

impl Quotient {
    pub(crate) fn new(d: &Diagram, ambient: Subdiagram, base: Subdiagram) -> Self {
        let embedding = ambient.difference(base).to_vec();
        let base_components = d.components_of(base);
        let ids = embedding.iter().map(|&v| d.id(v).to_string());
        let mut edges = Vec::new();
        for (i, &a) in embedding.iter().enumerate() {
            for (j, &b) in embedding.iter().enumerate().skip(i + 1) {
                if d.adjacent(a, b) {
                    edges.push((i, j, d.label(a, b)));
                } else if base_components.iter().any(|&c| {
                    d.boundary(c).contains(a) && d.boundary(c).contains(b)
                }) {
                    edges.push((i, j, Label::Infinite));
                }
            }
        }
        let diagram = Diagram::new(ids, edges).expect("quotient of a valid diagram");
        Quotient {
            diagram,
            embedding,
            ambient,
            base,
            base_components,
        }
    }

    /// A quotient-indexed subdiagram in ambient indexing.
    pub fn embed(&self, a: Subdiagram) -> Subdiagram {
        Subdiagram::from_indices(a.iter().map(|i| self.embedding[i]))
    }

    /// `Ã`: the vertices of `a` together with every component of the base
    /// that is not orthogonal to them, in ambient indexing.
    pub fn lift(&self, d: &Diagram, a: Subdiagram) -> Result<Subdiagram> {
        self.diagram.check_subset(a)?;
        if !self.diagram.is_connected(a) {
            return Err(Error::NotConnected(self.diagram.show(a)));
        }
        Ok(self.lift_embedded(d, self.embed(a)))
    }

    pub(crate) fn lift_embedded(&self, d: &Diagram, a: Subdiagram) -> Subdiagram {
        self.base_components
            .iter()
            .filter(|&&c| !d.orthogonal(c, a))
            .fold(a, |acc, &c| acc.union(c))
    }

    /// `C̄`: the image in the quotient of a subdiagram not contained in the base.
    pub fn project(&self, c: Subdiagram) -> Subdiagram {
        let rest = c.difference(self.base);
        Subdiagram::from_indices(
            self.embedding
                .iter()
                .enumerate()
                .filter(|(_, &v)| rest.contains(v))
                .map(|(i, _)| i),
        )
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// Parses the line oriented diagram grammar:
///
/// ```text
/// vertices: <id> <id> ...
/// edges: <id>-<id>[:<label>] ...
/// ```
///
/// Labels are integers `>= 3` or `inf`; a missing label means infinity.
pub fn parse_diagram(text: &str) -> Result<Diagram> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, strip_comment(l).trim()))
        .filter(|(_, l)| !l.is_empty());

    let (vline, vertices) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing `vertices:` line"))?;
    let vertices = vertices
        .strip_prefix("vertices:")
        .ok_or_else(|| Error::parse(vline, "expected `vertices:`"))?;
    let ids: Vec<&str> = vertices.split_whitespace().collect();
    if ids.is_empty() {
        return Err(Error::parse(vline, "a diagram needs at least one vertex"));
    }
    if ids.len() > MAX_VERTICES {
        return Err(Error::Capacity(ids.len()));
    }
    for id in &ids {
        if id.contains('-') || id.contains(':') || id.contains(';') {
            return Err(Error::parse(vline, format!("invalid vertex identifier {id}")));
        }
    }
    let mut index = BTreeMap::new();
    for (i, id) in ids.iter().enumerate() {
        if index.insert(*id, i).is_some() {
            return Err(Error::parse(vline, format!("duplicate vertex {id}")));
        }
    }

    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    if let Some((eline, rest)) = lines.next() {
        let rest = rest
            .strip_prefix("edges:")
            .ok_or_else(|| Error::parse(eline, "expected `edges:`"))?;
        for tok in rest.split_whitespace() {
            let (pair, label) = match tok.split_once(':') {
                Some((p, l)) => (p, Some(l)),
                None => (tok, None),
            };
            let (a, b) = pair
                .split_once('-')
                .ok_or_else(|| Error::parse(eline, format!("malformed edge {tok}")))?;
            let ia = *index
                .get(a)
                .ok_or_else(|| Error::parse(eline, format!("edge {tok} references unknown vertex {a}")))?;
            let ib = *index
                .get(b)
                .ok_or_else(|| Error::parse(eline, format!("edge {tok} references unknown vertex {b}")))?;
            if ia == ib {
                return Err(Error::parse(eline, format!("loop {tok}")));
            }
            if !seen.insert((ia.min(ib), ia.max(ib))) {
                return Err(Error::parse(eline, format!("duplicate edge {tok}")));
            }
            let label = match label {
                None | Some("inf") => Label::Infinite,
                Some(l) => {
                    let m: u32 = l
                        .parse()
                        .map_err(|_| Error::parse(eline, format!("bad label {l}")))?;
                    if m < 3 {
                        return Err(Error::parse(
                            eline,
                            format!("edge {pair} has label {m}; adjacent vertices need m >= 3"),
                        ));
                    }
                    Label::Finite(m)
                }
            };
            edges.push((ia, ib, label));
        }
        if let Some((extra, _)) = lines.next() {
            return Err(Error::parse(extra, "unexpected content after `edges:` line"));
        }
    }
    Diagram::new(ids, edges)
}

impl fmt::Display for Diagram {
    /// Writes the diagram in the textual grammar accepted by [`parse_diagram`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vertices: {}", self.ids.join(" "))?;
        write!(f, "edges:")?;
        for (a, b, l) in self.edges() {
            write!(f, " {}-{}:{}", self.ids[a], self.ids[b], l)?;
        }
        writeln!(f)
    }
}
