//! Exact feasibility of linear systems by Fourier–Motzkin elimination.

use std::collections::HashMap;

use num_traits::{Signed, Zero};

use crate::rational::Q;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    /// `a · x = b`
    Eq,
    /// `a · x ≥ b`
    Ge,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Q>,
    pub relation: Relation,
    pub rhs: Q,
}

impl Constraint {
    pub fn new(coeffs: Vec<Q>, relation: Relation, rhs: Q) -> Self {
        Constraint {
            coeffs,
            relation,
            rhs,
        }
    }

    pub fn holds(&self, x: &[Q]) -> bool {
        let lhs: Q = self.coeffs.iter().zip(x).map(|(a, b)| a * b).sum();
        match self.relation {
            Relation::Eq => lhs == self.rhs,
            Relation::Ge => lhs >= self.rhs,
        }
    }
}

fn axpy(target: &mut Constraint, factor: &Q, source: &Constraint) {
    for (t, s) in target.coeffs.iter_mut().zip(&source.coeffs) {
        if !s.is_zero() {
            *t -= factor * s;
        }
    }
    target.rhs -= factor * &source.rhs;
}

/// Whether some real (equivalently rational) point satisfies every constraint.
pub fn feasible(constraints: &[Constraint]) -> bool {
    let mut eqs: Vec<Constraint> = Vec::new();
    let mut ges: Vec<Constraint> = Vec::new();
    for c in constraints {
        match c.relation {
            Relation::Eq => eqs.push(c.clone()),
            Relation::Ge => ges.push(c.clone()),
        }
    }

    // Equalities: Gaussian elimination, substituting each pivot variable away.
    while let Some(e) = eqs.pop() {
        let Some(v) = e.coeffs.iter().position(|a| !a.is_zero()) else {
            if e.rhs.is_zero() {
                continue;
            }
            return false;
        };
        for other in eqs.iter_mut().chain(ges.iter_mut()) {
            if !other.coeffs[v].is_zero() {
                let f = &other.coeffs[v] / &e.coeffs[v];
                axpy(other, &f, &e);
            }
        }
    }

    let Some(mut ges) = normalise(ges) else {
        return false;
    };
    loop {
        let n = ges.first().map_or(0, |c| c.coeffs.len());
        let mut best: Option<(usize, usize)> = None;
        for v in 0..n {
            let pos = ges.iter().filter(|c| c.coeffs[v].is_positive()).count();
            let neg = ges.iter().filter(|c| c.coeffs[v].is_negative()).count();
            if pos + neg == 0 {
                continue;
            }
            let cost = pos * neg;
            if best.is_none_or(|(_, b)| cost < b) {
                best = Some((v, cost));
            }
        }
        let Some((v, _)) = best else {
            return true;
        };
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for c in ges {
            if c.coeffs[v].is_positive() {
                pos.push(c);
            } else if c.coeffs[v].is_negative() {
                neg.push(c);
            } else {
                rest.push(c);
            }
        }
        for p in &pos {
            for q in &neg {
                let sp = p.coeffs[v].recip();
                let sq = -q.coeffs[v].recip();
                let coeffs = p
                    .coeffs
                    .iter()
                    .zip(&q.coeffs)
                    .map(|(a, b)| a * &sp + b * &sq)
                    .collect();
                rest.push(Constraint::new(
                    coeffs,
                    Relation::Ge,
                    &p.rhs * &sp + &q.rhs * &sq,
                ));
            }
        }
        match normalise(rest) {
            Some(next) => ges = next,
            None => return false,
        }
    }
}

/// Scales each `≥` row so its first nonzero coefficient has absolute value 1,
/// drops trivially true rows and keeps the strongest row per direction.
/// `None` when some row reads `0 ≥ b` with `b > 0`.
fn normalise(rows: Vec<Constraint>) -> Option<Vec<Constraint>> {
    let mut best: HashMap<Vec<Q>, Q> = HashMap::new();
    let mut order: Vec<Vec<Q>> = Vec::new();
    for mut c in rows {
        let Some(lead) = c.coeffs.iter().find(|a| !a.is_zero()).cloned() else {
            if c.rhs.is_positive() {
                return None;
            }
            continue;
        };
        let scale = lead.abs().recip();
        for a in c.coeffs.iter_mut() {
            *a *= &scale;
        }
        c.rhs *= &scale;
        match best.get_mut(&c.coeffs) {
            Some(r) => {
                if c.rhs > *r {
                    *r = c.rhs;
                }
            }
            None => {
                order.push(c.coeffs.clone());
                best.insert(c.coeffs, c.rhs);
            }
        }
    }
    Some(
        order
            .into_iter()
            .map(|coeffs| {
                let rhs = best[&coeffs].clone();
                Constraint::new(coeffs, Relation::Ge, rhs)
            })
            .collect(),
    )
}
