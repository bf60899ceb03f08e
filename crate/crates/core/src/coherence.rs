//! Elementary pairs, supports, good elementary sequences and the symbolic
//! quasi-Coxeter presentation of a diagram.
//!
//! Letters are opaque: associators `Φ(B;α,β)`, local generators `S_i` and
//! twist symbols `a(B;α)`. Words are free-group words over them.
//!
//! For an elementary pair `(G, F)` of maximal nested sets with support `B`,
//! `Φ_{GF}` is the associator `Φ(B; α^B_G, α^B_F)`.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde_json::{json, Value};

use crate::diagram::{Diagram, Quotient, Subdiagram};
use crate::error::{Error, Result};
use crate::nested::{
    classify_two_face, faces, maximal_extensions, two_face_cycle, NestedSet, TwoFace,
};

fn require_maximal(d: &Diagram, sets: &[&NestedSet]) -> Result<()> {
    for h in sets {
        if !h.is_maximal(d) {
            return Err(Error::NotMaximal);
        }
    }
    Ok(())
}

/// `F ∆ G`, ascending.
pub fn symmetric_difference(f: &NestedSet, g: &NestedSet) -> Vec<Subdiagram> {
    let mut out = f.difference(g);
    out.extend(g.difference(f));
    out.sort();
    out
}

pub fn is_elementary(f: &NestedSet, g: &NestedSet) -> bool {
    f.len() == g.len() && f.difference(g).len() == 1
}

/// `supp(F,G)`: the union of the elements of `F ∆ G`; empty when `F = G`.
pub fn support(d: &Diagram, f: &NestedSet, g: &NestedSet) -> Result<Subdiagram> {
    require_maximal(d, &[f, g])?;
    Ok(union_of(&symmetric_difference(f, g)))
}

fn union_of(sets: &[Subdiagram]) -> Subdiagram {
    sets.iter().fold(Subdiagram::EMPTY, |acc, &b| acc.union(b))
}

/// `κ(C)`: connected `B` such that every `C′ ∈ C` is orthogonal to or
/// contains `B`.
pub fn kappa(d: &Diagram, family: &[Subdiagram]) -> Vec<Subdiagram> {
    d.connected_subdiagrams(d.vertices())
        .into_iter()
        .filter(|&b| family.iter().all(|&c| d.orthogonal(b, c) || b.is_subset(c)))
        .collect()
}

/// `zsupp(F,G)`: the union of the elements of `κ(F ∆ G)` contained in
/// `supp(F,G)`; empty when `F = G`.
pub fn central_support(d: &Diagram, f: &NestedSet, g: &NestedSet) -> Result<Subdiagram> {
    Ok(pair_support(d, f, g)?.zsupp)
}

/// Support data of a pair of maximal nested sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairSupport {
    pub symmetric_difference: Vec<Subdiagram>,
    pub supp: Subdiagram,
    pub zsupp: Subdiagram,
}

pub fn pair_support(d: &Diagram, f: &NestedSet, g: &NestedSet) -> Result<PairSupport> {
    require_maximal(d, &[f, g])?;
    let delta = symmetric_difference(f, g);
    let supp = union_of(&delta);
    let zsupp = if delta.is_empty() {
        Subdiagram::EMPTY
    } else {
        kappa(d, &delta)
            .into_iter()
            .filter(|b| b.is_subset(supp))
            .fold(Subdiagram::EMPTY, Subdiagram::union)
    };
    Ok(PairSupport {
        symmetric_difference: delta,
        supp,
        zsupp,
    })
}

/// `(F,G) ~ (F′,G′)` iff `F∖G = F′∖G′` and `G∖F = G′∖F′`.
pub fn are_equivalent(
    d: &Diagram,
    (f, g): (&NestedSet, &NestedSet),
    (f2, g2): (&NestedSet, &NestedSet),
) -> Result<bool> {
    require_maximal(d, &[f, g, f2, g2])?;
    Ok(f.difference(g) == f2.difference(g2) && g.difference(f) == g2.difference(f2))
}

/// An elementary pair up to equivalence: support `B` and the two α-vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub support: Subdiagram,
    pub alpha_g: usize,
    pub alpha_f: usize,
}

/// `(supp(G,F), α^supp_G, α^supp_F)` for an elementary pair.
pub fn triple_from_pair(d: &Diagram, g: &NestedSet, f: &NestedSet) -> Result<Triple> {
    require_maximal(d, &[f, g])?;
    if !is_elementary(f, g) {
        return Err(Error::NotElementary);
    }
    let b = union_of(&symmetric_difference(f, g));
    let alpha_g = g.alpha_vertex(b);
    let alpha_f = f.alpha_vertex(b);
    debug_assert_ne!(alpha_g, alpha_f);
    Ok(Triple {
        support: b,
        alpha_g,
        alpha_f,
    })
}

/// The lexicographically least maximal nested set on the connected subdiagram `c`.
pub(crate) fn least_maximal_on(d: &Diagram, c: Subdiagram) -> Vec<Subdiagram> {
    crate::nested::extensions_on(d, c, &[])
        .into_iter()
        .map(NestedSet::from_unchecked)
        .min()
        .expect("connected subdiagrams carry maximal nested sets")
        .elements()
        .to_vec()
}

/// The chain `B = C_0 ⊂ C_1 ⊂ … ⊂ D` obtained by adding the least adjacent
/// vertex at each step (`B` excluded).
fn ascending_chain(d: &Diagram, b: Subdiagram) -> Vec<Subdiagram> {
    let mut out = Vec::new();
    let mut c = b;
    while c != d.vertices() {
        let v = d
            .boundary(c)
            .least()
            .expect("connected diagram: proper subdiagrams have neighbours");
        c = c.with(v);
        out.push(c);
    }
    out
}

/// A representative elementary pair `(G, F)` of the triple `(B, α_G, α_F)`.
///
/// Both share the lexicographically least maximal nested sets on the
/// components of `B ∖ {α_F, α_G}` and the chain above `B` that adds the least
/// adjacent vertex at each step. `F` additionally contains the component of
/// `B ∖ α_F` through `α_G`, and `G` the component of `B ∖ α_G` through `α_F`.
pub fn pair_from_triple(
    d: &Diagram,
    b: Subdiagram,
    alpha_g: usize,
    alpha_f: usize,
) -> Result<(NestedSet, NestedSet)> {
    d.check_subset(b)?;
    if !d.is_connected(d.vertices()) {
        return Err(Error::NotConnected(d.show(d.vertices())));
    }
    if !d.is_connected(b) {
        return Err(Error::NotConnected(d.show(b)));
    }
    if alpha_g == alpha_f || !b.contains(alpha_g) || !b.contains(alpha_f) {
        return Err(Error::InvalidArgument(format!(
            "need two distinct vertices of {}",
            d.show(b)
        )));
    }
    let mut common = vec![b];
    common.extend(ascending_chain(d, b));
    for comp in d.components_of(b.without(alpha_g).without(alpha_f)) {
        common.extend(least_maximal_on(d, comp));
    }
    let f_extra = d.component_with(b, Subdiagram::singleton(alpha_f), Subdiagram::singleton(alpha_g));
    let g_extra = d.component_with(b, Subdiagram::singleton(alpha_g), Subdiagram::singleton(alpha_f));
    let mut f = common.clone();
    f.push(f_extra);
    let mut g = common;
    g.push(g_extra);
    let f = NestedSet::from_unchecked(f);
    let g = NestedSet::from_unchecked(g);
    debug_assert!(f.is_maximal(d) && g.is_maximal(d));
    Ok((g, f))
}

/// Checks one step `(H, H′)` of a sequence from `F` to `G` against the
/// intersection, support and central-support clauses.
fn step_is_good(
    d: &Diagram,
    fg: &NestedSet,
    whole: &PairSupport,
    zcomponents: &[Subdiagram],
    h: &NestedSet,
    h2: &NestedSet,
) -> std::result::Result<(), String> {
    if !fg.iter().all(|b| h.contains(b) && h2.contains(b)) {
        return Err("step does not contain F ∩ G".into());
    }
    let step = pair_support(d, h, h2).map_err(|e| e.to_string())?;
    if !step.supp.is_subset(whole.supp) {
        return Err(format!(
            "step support {} leaves {}",
            d.show(step.supp),
            d.show(whole.supp)
        ));
    }
    for &c in zcomponents {
        if !(d.orthogonal(c, step.supp) || c.is_subset(step.zsupp)) {
            return Err(format!(
                "central component {} meets step support {} outside step central support {}",
                d.show(c),
                d.show(step.supp),
                d.show(step.zsupp)
            ));
        }
    }
    Ok(())
}

/// Re-checks a sequence `F = H_1, …, H_m = G`: endpoints, maximality,
/// elementary steps, and for every step `H_i ∩ H_{i+1} ⊇ F ∩ G`,
/// `supp(H_i,H_{i+1}) ⊆ supp(F,G)`, and every component of `zsupp(F,G)`
/// orthogonal to `supp(H_i,H_{i+1})` or inside `zsupp(H_i,H_{i+1})`.
pub fn validate_sequence(
    d: &Diagram,
    f: &NestedSet,
    g: &NestedSet,
    seq: &[NestedSet],
) -> std::result::Result<(), String> {
    if seq.first() != Some(f) || seq.last() != Some(g) {
        return Err("sequence does not run from F to G".into());
    }
    if seq.iter().any(|h| !h.is_maximal(d)) {
        return Err("sequence contains a non-maximal nested set".into());
    }
    let whole = pair_support(d, f, g).map_err(|e| e.to_string())?;
    let fg = f.intersection(g);
    let zc = d.components_of(whole.zsupp);
    for (i, w) in seq.windows(2).enumerate() {
        if !is_elementary(&w[0], &w[1]) {
            return Err(format!("step {i} is not elementary"));
        }
        step_is_good(d, &fg, &whole, &zc, &w[0], &w[1]).map_err(|e| format!("step {i}: {e}"))?;
    }
    Ok(())
}

/// A shortest elementary sequence from `F` to `G` inside the face `F ∩ G` whose
/// every step satisfies the clauses of [`validate_sequence`].
pub fn good_elementary_sequence(
    d: &Diagram,
    f: &NestedSet,
    g: &NestedSet,
) -> Result<Vec<NestedSet>> {
    require_maximal(d, &[f, g])?;
    if f == g {
        return Ok(vec![f.clone()]);
    }
    let fg = f.intersection(g);
    let whole = pair_support(d, f, g)?;
    let zc = d.components_of(whole.zsupp);
    let verts = maximal_extensions(d, &fg);
    let index: HashMap<&NestedSet, usize> = verts.iter().enumerate().map(|(i, h)| (h, i)).collect();
    let start = index[f];
    let goal = index[g];
    let mut prev = vec![usize::MAX; verts.len()];
    prev[start] = start;
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        if u == goal {
            break;
        }
        for v in 0..verts.len() {
            if prev[v] == usize::MAX
                && is_elementary(&verts[u], &verts[v])
                && step_is_good(d, &fg, &whole, &zc, &verts[u], &verts[v]).is_ok()
            {
                prev[v] = u;
                queue.push_back(v);
            }
        }
    }
    if prev[goal] == usize::MAX {
        return Err(Error::InvalidArgument(format!(
            "no good elementary sequence from {} to {}",
            f.show(d),
            g.show(d)
        )));
    }
    let mut path = vec![goal];
    while *path.last().unwrap() != start {
        path.push(prev[*path.last().unwrap()]);
    }
    path.reverse();
    let seq: Vec<NestedSet> = path.into_iter().map(|i| verts[i].clone()).collect();
    debug_assert_eq!(validate_sequence(d, f, g, &seq), Ok(()));
    Ok(seq)
}

/// Carries a sequence for `(F,G)` over to an equivalent pair `(F′,G′)` by
/// replacing `F ∩ G` with `F′ ∩ G′` in every term.
pub fn transport_sequence(
    d: &Diagram,
    seq: &[NestedSet],
    (f, g): (&NestedSet, &NestedSet),
    (f2, g2): (&NestedSet, &NestedSet),
) -> Result<Vec<NestedSet>> {
    if !are_equivalent(d, (f, g), (f2, g2))? {
        return Err(Error::InvalidArgument("pairs are not equivalent".into()));
    }
    let old = f.intersection(g);
    let new = f2.intersection(g2);
    seq.iter()
        .map(|h| {
            let mut e: Vec<Subdiagram> = h.iter().filter(|&b| !old.contains(b)).collect();
            e.extend(new.iter());
            let h2 = NestedSet::new(d, e)?;
            if h2.is_maximal(d) {
                Ok(h2)
            } else {
                Err(Error::NotMaximal)
            }
        })
        .collect()
}

/// `Φ(B;first,second)` with `first < second`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AssociatorSymbol {
    pub support: Subdiagram,
    pub first: usize,
    pub second: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Phi(AssociatorSymbol),
    S(usize),
    Twist { support: Subdiagram, alpha: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Factor {
    pub letter: Letter,
    pub exp: i32,
}

pub type Word = Vec<Factor>;

/// `Φ(B;x,y)` in canonical form: `Φ(B;y,x)^{-1}` when `x > y`.
pub fn phi(b: Subdiagram, x: usize, y: usize) -> Factor {
    debug_assert_ne!(x, y);
    let (first, second, exp) = if x < y { (x, y, 1) } else { (y, x, -1) };
    Factor {
        letter: Letter::Phi(AssociatorSymbol {
            support: b,
            first,
            second,
        }),
        exp,
    }
}

pub fn s(i: usize) -> Factor {
    Factor {
        letter: Letter::S(i),
        exp: 1,
    }
}

pub fn twist(b: Subdiagram, alpha: usize, exp: i32) -> Factor {
    Factor {
        letter: Letter::Twist { support: b, alpha },
        exp,
    }
}

pub fn invert(word: &[Factor]) -> Word {
    word.iter()
        .rev()
        .map(|f| Factor {
            letter: f.letter,
            exp: -f.exp,
        })
        .collect()
}

/// Free reduction: merges adjacent equal letters and drops zero exponents.
pub fn reduce(word: &[Factor]) -> Word {
    let mut out: Word = Vec::with_capacity(word.len());
    for f in word {
        match out.last_mut() {
            Some(last) if last.letter == f.letter => {
                last.exp += f.exp;
                if last.exp == 0 {
                    out.pop();
                }
            }
            _ => {
                if f.exp != 0 {
                    out.push(*f);
                }
            }
        }
    }
    out
}

/// `Φ_{GF}` for an elementary pair.
pub fn pair_associator(d: &Diagram, g: &NestedSet, f: &NestedSet) -> Result<Factor> {
    let t = triple_from_pair(d, g, f)?;
    Ok(phi(t.support, t.alpha_g, t.alpha_f))
}

/// `Φ_{H_m H_{m−1}} ⋯ Φ_{H_2 H_1}` along an elementary sequence.
pub fn sequence_word(d: &Diagram, seq: &[NestedSet]) -> Result<Word> {
    let mut w = Vec::with_capacity(seq.len().saturating_sub(1));
    for pair in seq.windows(2).rev() {
        w.push(pair_associator(d, &pair[1], &pair[0])?);
    }
    Ok(w)
}

/// `π_F(S_i) = Φ_{F G_i} · S_i · Φ_{G_i F}`, with `G_i` the least maximal
/// nested set containing `{α_i}` and `Φ_{G_i F}` expanded along a good
/// elementary sequence from `F` to `G_i`.
pub fn monodromy_word(d: &Diagram, f: &NestedSet, i: usize) -> Result<Word> {
    require_maximal(d, &[f])?;
    if i >= d.len() {
        return Err(Error::OutOfRange {
            what: "vertex",
            value: i,
            max: d.len().saturating_sub(1),
        });
    }
    let single = Subdiagram::singleton(i);
    if f.contains(single) {
        return Ok(vec![s(i)]);
    }
    let seed = NestedSet::top(d).with(single);
    let gi = maximal_extensions(d, &seed)
        .into_iter()
        .next()
        .expect("every vertex lies in some maximal nested set");
    let forward = sequence_word(d, &good_elementary_sequence(d, f, &gi)?)?;
    let mut w = invert(&forward);
    w.push(s(i));
    w.extend(forward);
    Ok(w)
}

/// The associator `Φ(B;α_j,α_i)` after twisting by `a`:
/// `a(B;α_j) a(B_i;α_i) Φ(B;α_j,α_i) a(B_j;α_j)^{-1} a(B;α_i)^{-1}` with
/// `B_i` the component of `B∖α_j` through `α_i` and `B_j` that of `B∖α_i`
/// through `α_j`.
pub fn twist_associator(d: &Diagram, b: Subdiagram, j: usize, i: usize) -> Result<Word> {
    d.check_subset(b)?;
    if !d.is_connected(b) {
        return Err(Error::NotConnected(d.show(b)));
    }
    if i == j || !b.contains(i) || !b.contains(j) {
        return Err(Error::InvalidArgument(format!(
            "need two distinct vertices of {}",
            d.show(b)
        )));
    }
    let bi = d.component_with(b, Subdiagram::singleton(j), Subdiagram::singleton(i));
    let bj = d.component_with(b, Subdiagram::singleton(i), Subdiagram::singleton(j));
    let mut w = vec![twist(b, j, 1)];
    if !bi.is_empty() {
        w.push(twist(bi, i, 1));
    }
    w.push(phi(b, j, i));
    if !bj.is_empty() {
        w.push(twist(bj, j, -1));
    }
    w.push(twist(b, i, -1));
    Ok(w)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RelationKind {
    Pentagon5,
    Hexagon6,
    Braid,
}

impl RelationKind {
    pub fn tag(self) -> &'static str {
        match self {
            RelationKind::Pentagon5 => "pentagon5",
            RelationKind::Hexagon6 => "hexagon6",
            RelationKind::Braid => "braid",
        }
    }
}

/// `lhs = rhs`; coherence relations have an empty right-hand side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationWord {
    pub kind: RelationKind,
    pub lhs: Word,
    pub rhs: Word,
}

impl RelationWord {
    /// `lhs · rhs^{-1}`.
    pub fn relator(&self) -> Word {
        let mut w = self.lhs.clone();
        w.extend(invert(&self.rhs));
        w
    }

    pub fn phi_letters(&self) -> usize {
        self.relator()
            .iter()
            .filter(|f| matches!(f.letter, Letter::Phi(_)))
            .count()
    }
}

/// The coherence word of a pentagonal or hexagonal 2-face `h`, or `None` for
/// squares.
///
/// With `B` the unsaturated element and `α^B_H = {α_i, α_j, α_k}`, write `B_xy`
/// for the component of `B ∖ α_z` through `α_x, α_y`. Pentagons (`α_i` the
/// middle vertex of the path `B / i_H(B)`, `j < k`) give
/// `Φ(B;k,i) Φ(B;i,j) Φ(B_ik;i,k) Φ(B;j,k) Φ(B_ij;j,i)`; hexagons (`i < j < k`)
/// give `Φ(B;k,i) Φ(B_jk;k,j) Φ(B;i,j) Φ(B_ik;i,k) Φ(B;j,k) Φ(B_ij;j,i)`.
pub fn face_relation(d: &Diagram, h: &NestedSet) -> Result<Option<RelationWord>> {
    let shape = classify_two_face(d, h)?;
    if shape == TwoFace::Square {
        return Ok(None);
    }
    let (b, alpha) = h.unsaturated()[0];
    let sub = |removed: usize, x: usize, y: usize| {
        d.component_with(
            b,
            Subdiagram::singleton(removed),
            Subdiagram::singleton(x).with(y),
        )
    };
    let v = alpha.to_vec();
    let (kind, lhs) = match shape {
        TwoFace::Pentagon => {
            let q = Quotient::new(d, b, h.inner(b));
            let middle = (0..3)
                .find(|&x| q.diagram.neighbours(x).len() == 2)
                .expect("a path has a middle vertex");
            let i = q.embedding[middle];
            let mut ends: Vec<usize> = v.iter().copied().filter(|&x| x != i).collect();
            ends.sort_unstable();
            let (j, k) = (ends[0], ends[1]);
            (
                RelationKind::Pentagon5,
                vec![
                    phi(b, k, i),
                    phi(b, i, j),
                    phi(sub(j, i, k), i, k),
                    phi(b, j, k),
                    phi(sub(k, i, j), j, i),
                ],
            )
        }
        _ => {
            let (i, j, k) = (v[0], v[1], v[2]);
            (
                RelationKind::Hexagon6,
                vec![
                    phi(b, k, i),
                    phi(sub(i, j, k), k, j),
                    phi(b, i, j),
                    phi(sub(j, i, k), i, k),
                    phi(b, j, k),
                    phi(sub(k, i, j), j, i),
                ],
            )
        }
    };
    Ok(Some(RelationWord {
        kind,
        lhs,
        rhs: Vec::new(),
    }))
}

/// The word `Φ_{F_0 F_{k−1}} ⋯ Φ_{F_2 F_1} Φ_{F_1 F_0}` read around the
/// boundary of a 2-face in the order of [`two_face_cycle`].
pub fn boundary_word(d: &Diagram, h: &NestedSet) -> Result<Word> {
    let mut cycle = two_face_cycle(d, h)?;
    cycle.push(cycle[0].clone());
    sequence_word(d, &cycle)
}

/// Whether `a` is a cyclic rotation of `b` or of `b^{-1}`.
pub fn same_cyclic_word(a: &[Factor], b: &[Factor]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    let inv = invert(b);
    (0..a.len()).any(|r| {
        let rotated = |w: &[Factor]| (0..a.len()).all(|t| a[t] == w[(t + r) % w.len()]);
        rotated(b) || rotated(&inv)
    })
}

/// `(face, word)` for every pentagonal and hexagonal 2-face, in face order.
pub fn face_relations(d: &Diagram) -> Vec<(NestedSet, RelationWord)> {
    if d.len() < 3 {
        return Vec::new();
    }
    faces(d, 2)
        .expect("dimension 2 is in range")
        .into_iter()
        .filter_map(|h| {
            let w = face_relation(d, &h).expect("2-face")?;
            Some((h, w))
        })
        .collect()
}

/// One coherence word per pentagonal or hexagonal 2-face of `A_D`.
pub fn pentagon_relations(d: &Diagram) -> Vec<RelationWord> {
    face_relations(d).into_iter().map(|(_, w)| w).collect()
}

/// For adjacent `α_i, α_j` (`i < j`) with finite `m_ij`, writing
/// `X = Φ(B;i,j) S_i Φ(B;i,j)^{-1}` with `B = {α_i, α_j}`: `X S_j X ⋯ = S_j X S_j ⋯`
/// with `m_ij` factors per side. With `commuting`, non-adjacent pairs add
/// `S_i S_j = S_j S_i`.
pub fn braid_relations(d: &Diagram, commuting: bool) -> Vec<RelationWord> {
    let mut out = Vec::new();
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            if d.adjacent(i, j) {
                let Some(m) = d.label(i, j).finite() else {
                    continue;
                };
                let b = Subdiagram::singleton(i).with(j);
                let x = [phi(b, i, j), s(i), phi(b, j, i)];
                let side = |start_x: bool| {
                    let mut w = Vec::new();
                    for t in 0..m {
                        if (t % 2 == 0) == start_x {
                            w.extend_from_slice(&x);
                        } else {
                            w.push(s(j));
                        }
                    }
                    w
                };
                out.push(RelationWord {
                    kind: RelationKind::Braid,
                    lhs: side(true),
                    rhs: side(false),
                });
            } else if commuting {
                out.push(RelationWord {
                    kind: RelationKind::Braid,
                    lhs: vec![s(i), s(j)],
                    rhs: vec![s(j), s(i)],
                });
            }
        }
    }
    out
}

/// Human readable letter, e.g. `Phi({1,2};1,2)`, `S_1`, `a({1,2};1)`.
pub fn show_letter(d: &Diagram, letter: &Letter) -> String {
    match *letter {
        Letter::Phi(p) => format!(
            "Phi({};{},{})",
            d.show(p.support),
            d.id(p.first),
            d.id(p.second)
        ),
        Letter::S(i) => format!("S_{}", d.id(i)),
        Letter::Twist { support, alpha } => format!("a({};{})", d.show(support), d.id(alpha)),
    }
}

pub fn show_word(d: &Diagram, word: &[Factor]) -> String {
    let parts: Vec<String> = word
        .iter()
        .map(|f| {
            let l = show_letter(d, &f.letter);
            if f.exp == 1 {
                l
            } else {
                format!("{l}^{}", f.exp)
            }
        })
        .collect();
    parts.join(" ")
}

pub fn letter_json(d: &Diagram, letter: &Letter) -> Value {
    match *letter {
        Letter::Phi(p) => json!({"Phi": {
            "B": d.subdiagram_json(p.support),
            "alpha": [d.id_json(p.first), d.id_json(p.second)],
        }}),
        Letter::S(i) => json!({"S": d.id_json(i)}),
        Letter::Twist { support, alpha } => json!({"a": {
            "B": d.subdiagram_json(support),
            "alpha": d.id_json(alpha),
        }}),
    }
}

pub fn word_json(d: &Diagram, word: &[Factor]) -> Value {
    Value::Array(
        word.iter()
            .map(|f| json!({"letter": letter_json(d, &f.letter), "exp": f.exp}))
            .collect(),
    )
}

pub fn relation_json(d: &Diagram, r: &RelationWord) -> Value {
    json!({
        "kind": r.kind.tag(),
        "word": word_json(d, &r.relator()),
        "lhs": word_json(d, &r.lhs),
        "rhs": word_json(d, &r.rhs),
    })
}

/// `{generators: {S, Phi, a}, relations: [{kind, word}]}` with the coherence
/// relations of all 2-faces followed by the braid relations.
pub fn presentation_json(d: &Diagram, commuting: bool) -> Value {
    let subs = d.connected_subdiagrams(d.vertices());
    let gens_s: Vec<Value> = (0..d.len()).map(|i| d.id_json(i)).collect();
    let mut gens_phi = Vec::new();
    let mut gens_a = Vec::new();
    for &b in &subs {
        let v = b.to_vec();
        for (x, &p) in v.iter().enumerate() {
            gens_a.push(json!([d.subdiagram_json(b), d.id_json(p)]));
            for &q in &v[x + 1..] {
                gens_phi.push(json!([d.subdiagram_json(b), d.id_json(p), d.id_json(q)]));
            }
        }
    }
    let relations: Vec<Value> = pentagon_relations(d)
        .iter()
        .chain(braid_relations(d, commuting).iter())
        .map(|r| relation_json(d, r))
        .collect();
    json!({
        "generators": {"S": gens_s, "Phi": gens_phi, "a": gens_a},
        "relations": relations,
    })
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nested::parse_nested_set;

    fn p(n: usize) -> Diagram {
        Diagram::path(n).unwrap()
    }

    fn ns(d: &Diagram, text: &str) -> NestedSet {
        parse_nested_set(d, text).unwrap()
    }

    fn sub(d: &Diagram, text: &str) -> Subdiagram {
        d.parse_subdiagram(text).unwrap()
    }

    #[test]
    fn support_examples() {
        let d = p(3);
        let a = ns(&d, "1 2;1");
        let b = ns(&d, "1 2;2");
        let c = ns(&d, "2 3;3");
        assert_eq!(support(&d, &a, &b).unwrap(), sub(&d, "1 2"));
        assert_eq!(support(&d, &a, &c).unwrap(), d.vertices());
        assert_eq!(support(&d, &a, &a).unwrap(), Subdiagram::EMPTY);
        assert_eq!(support(&d, &NestedSet::top(&d), &a), Err(Error::NotMaximal));
    }

    #[test]
    fn central_support_examples() {
        let d = p(3);
        let a = ns(&d, "1 2;1");
        assert_eq!(
            central_support(&d, &a, &ns(&d, "1 2;2")).unwrap(),
            Subdiagram::EMPTY
        );
        assert_eq!(central_support(&d, &ns(&d, "1;3"), &a).unwrap(), sub(&d, "1"));
        assert_eq!(
            central_support(&d, &a, &ns(&d, "2 3;3")).unwrap(),
            Subdiagram::EMPTY
        );
        assert_eq!(central_support(&d, &a, &a).unwrap(), Subdiagram::EMPTY);
    }

    #[test]
    fn equivalence_examples() {
        let d = p(3);
        let a = ns(&d, "1 2;1");
        let b = ns(&d, "1 2;2");
        assert!(are_equivalent(&d, (&a, &b), (&a, &b)).unwrap());
        assert!(!are_equivalent(&d, (&a, &b), (&b, &a)).unwrap());

        let d = p(5);
        let f1 = ns(&d, "1 2;1;4 5;4");
        let g1 = ns(&d, "1 2;2;4 5;4");
        let f2 = ns(&d, "1 2;1;4 5;5");
        let g2 = ns(&d, "1 2;2;4 5;5");
        assert!(f1.is_maximal(&d) && f2.is_maximal(&d));
        assert!(are_equivalent(&d, (&f1, &g1), (&f2, &g2)).unwrap());
        assert_ne!(f1, f2);
    }

    #[test]
    fn triple_from_pair_examples() {
        let d = p(3);
        let a = ns(&d, "1 2;1");
        let b = ns(&d, "1 2;2");
        let t = triple_from_pair(&d, &a, &b).unwrap();
        assert_eq!((t.support, t.alpha_g, t.alpha_f), (sub(&d, "1 2"), 1, 0));
        let t = triple_from_pair(&d, &a, &ns(&d, "1;3")).unwrap();
        assert_eq!((t.support, t.alpha_g, t.alpha_f), (d.vertices(), 2, 1));
        assert_eq!(
            triple_from_pair(&d, &a, &ns(&d, "2 3;3")),
            Err(Error::NotElementary)
        );
        assert_eq!(triple_from_pair(&d, &a, &a), Err(Error::NotElementary));
    }

    #[test]
    fn pair_from_triple_examples() {
        let d = p(3);
        let (g, f) = pair_from_triple(&d, sub(&d, "1 2"), 1, 0).unwrap();
        assert_eq!(g, ns(&d, "1 2;1"));
        assert_eq!(f, ns(&d, "1 2;2"));
        let (g, f) = pair_from_triple(&d, d.vertices(), 2, 1).unwrap();
        assert_eq!(g, ns(&d, "1 2;1"));
        assert_eq!(f, ns(&d, "3;1"));
        assert!(pair_from_triple(&d, d.vertices(), 1, 1).is_err());
        assert!(pair_from_triple(&d, sub(&d, "1 2"), 0, 2).is_err());
        assert!(pair_from_triple(&d, sub(&d, "1 3"), 0, 2).is_err());
    }

    #[test]
    fn triples_round_trip_on_p3() {
        let d = p(3);
        for b in d.connected_subdiagrams(d.vertices()) {
            for x in b.iter() {
                for y in b.iter().filter(|&y| y != x) {
                    let (g, f) = pair_from_triple(&d, b, x, y).unwrap();
                    let t = triple_from_pair(&d, &g, &f).unwrap();
                    assert_eq!((t.support, t.alpha_g, t.alpha_f), (b, x, y));
                }
            }
        }
    }

    #[test]
    fn good_sequence_examples() {
        let d = p(3);
        let f = ns(&d, "1 2;1");
        let g = ns(&d, "2 3;3");
        let seq = good_elementary_sequence(&d, &f, &g).unwrap();
        assert!(seq.len() >= 3);
        assert_eq!(validate_sequence(&d, &f, &g, &seq), Ok(()));
        assert_eq!(good_elementary_sequence(&d, &f, &f).unwrap(), vec![f.clone()]);

        let d = p(5);
        let f = ns(&d, "1 2;1;4 5;4");
        let g = ns(&d, "1 2;2;4 5;4");
        let seq = good_elementary_sequence(&d, &f, &g).unwrap();
        assert_eq!(seq.len(), 2);
        assert!(support(&d, &seq[0], &seq[1]).unwrap().is_subset(sub(&d, "1 2")));
    }

    #[test]
    fn validator_rejects_bad_sequences() {
        let d = p(3);
        let f = ns(&d, "1 2;1");
        let g = ns(&d, "1 2;2");
        assert!(validate_sequence(&d, &f, &g, std::slice::from_ref(&f)).is_err());
        // Leaving the face of F ∩ G breaks the intersection clause.
        let detour = vec![f.clone(), ns(&d, "1;3"), ns(&d, "2 3;3"), ns(&d, "2 3;2"), ns(&d, "1 2;2")];
        assert!(validate_sequence(&d, &f, &g, &detour).is_err());
    }

    #[test]
    fn monodromy_examples() {
        let d = p(3);
        let f = ns(&d, "1 2;1");
        assert_eq!(monodromy_word(&d, &f, 0).unwrap(), vec![s(0)]);
        let b = sub(&d, "1 2");
        assert_eq!(
            monodromy_word(&d, &f, 1).unwrap(),
            vec![phi(b, 1, 0), s(1), phi(b, 0, 1)]
        );
        let p2 = p(2);
        let w = monodromy_word(&p2, &ns(&p2, "1"), 1).unwrap();
        assert_eq!(w, vec![phi(p2.vertices(), 1, 0), s(1), phi(p2.vertices(), 0, 1)]);
    }

    #[test]
    fn twist_examples() {
        let d = p(3);
        let b = sub(&d, "1 2");
        assert_eq!(
            twist_associator(&d, b, 1, 0).unwrap(),
            vec![
                twist(b, 1, 1),
                twist(sub(&d, "1"), 0, 1),
                phi(b, 1, 0),
                twist(sub(&d, "2"), 1, -1),
                twist(b, 0, -1),
            ]
        );
        let w = twist_associator(&d, d.vertices(), 2, 0).unwrap();
        assert_eq!(w[1], twist(sub(&d, "1 2"), 0, 1));
        assert_eq!(w[3], twist(sub(&d, "2 3"), 2, -1));
        // The identity twist leaves only the associator.
        let bare: Word = w
            .into_iter()
            .filter(|f| !matches!(f.letter, Letter::Twist { .. }))
            .collect();
        assert_eq!(bare, vec![phi(d.vertices(), 2, 0)]);
        assert!(twist_associator(&d, b, 0, 0).is_err());
    }

    #[test]
    fn associator_orientation() {
        let b = Subdiagram::full(2);
        assert_eq!(phi(b, 1, 0), invert(&[phi(b, 0, 1)])[0]);
        assert!(reduce(&[phi(b, 0, 1), phi(b, 1, 0)]).is_empty());
    }

    #[test]
    fn relation_census_small() {
        let r = pentagon_relations(&p(3));
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].kind, RelationKind::Pentagon5);
        assert_eq!(r[0].phi_letters(), 5);
        let r = pentagon_relations(&Diagram::cycle(3).unwrap());
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].kind, RelationKind::Hexagon6);
        assert_eq!(r[0].phi_letters(), 6);
        assert!(pentagon_relations(&p(2)).is_empty());
    }

    #[test]
    fn closed_form_matches_boundary_walk() {
        for d in [p(3), p(4), Diagram::cycle(3).unwrap(), Diagram::star(3).unwrap()] {
            for (h, r) in face_relations(&d) {
                let walk = boundary_word(&d, &h).unwrap();
                assert!(
                    same_cyclic_word(&r.lhs, &walk),
                    "{}: {} vs {}",
                    h.show(&d),
                    show_word(&d, &r.lhs),
                    show_word(&d, &walk)
                );
            }
        }
    }

    #[test]
    fn braid_examples() {
        let d = crate::diagram::parse_diagram("vertices: 1 2\nedges: 1-2:3").unwrap();
        let r = braid_relations(&d, false);
        assert_eq!(r.len(), 1);
        let count_s = |w: &Word| w.iter().filter(|f| matches!(f.letter, Letter::S(_))).count();
        assert_eq!(count_s(&r[0].lhs), 3);
        assert_eq!(count_s(&r[0].rhs), 3);
        assert_eq!(r[0].rhs[0], s(1));
        assert!(braid_relations(&p(2), true).is_empty());
        let d = crate::diagram::parse_diagram("vertices: 1 2 3\nedges: 1-2:3 2-3:3").unwrap();
        assert_eq!(braid_relations(&d, false).len(), 2);
        let r = braid_relations(&d, true);
        assert_eq!(r.len(), 3);
        assert_eq!(r.iter().filter(|x| x.lhs == vec![s(0), s(2)]).count(), 1);
    }

    #[test]
    fn presentation_lists_generators() {
        let d = p(2);
        let v = presentation_json(&d, false);
        assert_eq!(v["generators"]["S"], json!([1, 2]));
        assert_eq!(v["generators"]["Phi"], json!([[[1, 2], 1, 2]]));
        assert_eq!(v["generators"]["a"].as_array().unwrap().len(), 4);
        assert!(v["relations"].as_array().unwrap().is_empty());
    }
}
