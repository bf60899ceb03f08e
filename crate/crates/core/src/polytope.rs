//! Convex realisation of `A_D` over exact rationals.
//!
//! For a weight function `c` on connected subdiagrams, `P_D^c ⊂ Q^{|D|}` is cut
//! out by `Σ_{α∈D} t_α = c(D)` and `Σ_{α∈B} t_α ≥ c(B)` for every proper
//! connected `B`. Its vertices are indexed by maximal nested sets.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::diagram::{Diagram, Subdiagram};
use crate::error::{Error, Result};
use crate::lp::{feasible, Constraint, Relation};
use crate::nested::{faces, maximal_nested_sets, two_face_cycle, NestedSet};
use crate::rational::{self, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realization {
    diagram: Diagram,
    weights: BTreeMap<Subdiagram, Q>,
}

/// `c(B) = 3^{|B|}` on every connected subdiagram, with `overrides` replacing
/// individual values. Checks positivity and `c(B₁∪B₂) > c(B₁) + c(B₂)` for all
/// incompatible connected `B₁, B₂`.
pub fn make_realization(
    d: &Diagram,
    overrides: Option<&BTreeMap<Subdiagram, Q>>,
) -> Result<Realization> {
    let subs = d.connected_subdiagrams(d.vertices());
    let mut weights: BTreeMap<Subdiagram, Q> = subs
        .iter()
        .map(|&b| (b, Q::from_integer(BigInt::from(3u8).pow(b.len() as u32))))
        .collect();
    if let Some(o) = overrides {
        for (&b, c) in o {
            if !weights.contains_key(&b) {
                return Err(Error::NotConnected(d.show(b)));
            }
            if !c.is_positive() {
                return Err(Error::InvalidArgument(format!(
                    "weight of {} must be positive",
                    d.show(b)
                )));
            }
            weights.insert(b, c.clone());
        }
    }
    for (i, &a) in subs.iter().enumerate() {
        for &b in &subs[i + 1..] {
            if d.compatible(a, b) {
                continue;
            }
            let u = a.union(b);
            let (cu, ca, cb) = (&weights[&u], &weights[&a], &weights[&b]);
            if *cu <= ca + cb {
                return Err(Error::Superadditivity {
                    union: d.show(u),
                    left: d.show(a),
                    right: d.show(b),
                    value: format!("{} vs {}", rational::format(cu), rational::format(&(ca + cb))),
                });
            }
        }
    }
    Ok(Realization {
        diagram: d.clone(),
        weights,
    })
}

impl Realization {
    pub fn diagram(&self) -> &Diagram {
        &self.diagram
    }

    pub fn weight(&self, b: Subdiagram) -> Option<&Q> {
        self.weights.get(&b)
    }

    pub fn weights(&self) -> &BTreeMap<Subdiagram, Q> {
        &self.weights
    }

    fn row(&self, b: Subdiagram) -> Vec<Q> {
        (0..self.diagram.len())
            .map(|v| if b.contains(v) { rational::int(1) } else { Q::zero() })
            .collect()
    }

    /// The defining system: the equation for `D` first, then one inequality per
    /// proper connected subdiagram in ascending order.
    pub fn constraints(&self) -> Vec<(Subdiagram, Constraint)> {
        let top = self.diagram.vertices();
        let mut out = vec![(
            top,
            Constraint::new(self.row(top), Relation::Eq, self.weights[&top].clone()),
        )];
        for (&b, c) in &self.weights {
            if b != top {
                out.push((b, Constraint::new(self.row(b), Relation::Ge, c.clone())));
            }
        }
        out
    }

    /// The vertex of `P_D^c` for the maximal nested set `f`:
    /// `t_{α^B_F} = c(B) − Σ c(C)` over the maximal elements `C ⊊ B` of `f`.
    pub fn vertex_coordinates(&self, f: &NestedSet) -> Result<Vec<Q>> {
        let d = &self.diagram;
        if !f.is_maximal(d) {
            return Err(Error::NotMaximal);
        }
        let mut t = vec![Q::zero(); d.len()];
        for b in f.iter() {
            let mut x = self.weights[&b].clone();
            for c in f.children(b) {
                x -= &self.weights[&c];
            }
            t[f.alpha_vertex(b)] = x;
        }
        Ok(t)
    }

    /// Whether `t` satisfies all defining constraints.
    pub fn contains(&self, t: &[Q]) -> bool {
        self.constraints().iter().all(|(_, c)| c.holds(t))
    }

    /// Connected subdiagrams whose constraint is tight at `t`, ascending.
    pub fn tight_set(&self, t: &[Q]) -> Vec<Subdiagram> {
        self.weights
            .iter()
            .filter(|(&b, c)| {
                let s: Q = b.iter().map(|v| &t[v]).sum();
                s == **c
            })
            .map(|(&b, _)| b)
            .collect()
    }

    /// Exact feasibility of `P_D^c ∩ ⋂ L_{B_i}` where `L_B` is the hyperplane
    /// `Σ_{α∈B} t_α = c(B)`.
    pub fn is_face_nonempty(&self, family: &[Subdiagram]) -> Result<bool> {
        let d = &self.diagram;
        for &b in family {
            d.check_subset(b)?;
            if b.is_empty() || b == d.vertices() {
                return Err(Error::InvalidArgument(format!(
                    "{} is not a proper nonempty subdiagram",
                    d.show(b)
                )));
            }
            if !d.is_connected(b) {
                return Err(Error::NotConnected(d.show(b)));
            }
        }
        let mut system: Vec<Constraint> = self.constraints().into_iter().map(|(_, c)| c).collect();
        for &b in family {
            system.push(Constraint::new(
                self.row(b),
                Relation::Eq,
                self.weights[&b].clone(),
            ));
        }
        let ok = feasible(&system);
        debug_assert_eq!(
            ok,
            family
                .iter()
                .enumerate()
                .all(|(i, &a)| family[i + 1..].iter().all(|&b| d.compatible(a, b)))
        );
        Ok(ok)
    }

    /// `{vertices: [{face, coords}], equations, inequalities}` with rationals
    /// written as `"p/q"`.
    pub fn export_json(&self) -> Value {
        let d = &self.diagram;
        let vertices: Vec<Value> = maximal_nested_sets(d)
            .iter()
            .map(|f| {
                let t = self.vertex_coordinates(f).expect("maximal");
                json!({
                    "face": f.to_json(d),
                    "coords": t.iter().map(rational::format).collect::<Vec<_>>(),
                })
            })
            .collect();
        let mut equations = Vec::new();
        let mut inequalities = Vec::new();
        for (b, c) in self.constraints() {
            let row = json!({"B": d.subdiagram_json(b), "rhs": rational::format(&c.rhs)});
            match c.relation {
                Relation::Eq => equations.push(row),
                Relation::Ge => inequalities.push(row),
            }
        }
        json!({
            "dimension": d.len().saturating_sub(1),
            "vertices": vertices,
            "equations": equations,
            "inequalities": inequalities,
        })
    }

    /// OFF text for affine dimension at most 3 (`|D| ≤ 4`): each vertex is
    /// projected to its first `|D| − 1` coordinates, padded to three; faces
    /// are the 2-faces as vertex cycles oriented outwards.
    pub fn export_off(&self) -> Option<String> {
        let d = &self.diagram;
        let n = d.len();
        if n == 0 || n > 4 {
            return None;
        }
        let verts = maximal_nested_sets(d);
        let points: Vec<[Q; 3]> = verts
            .iter()
            .map(|f| {
                let t = self.vertex_coordinates(f).expect("maximal");
                std::array::from_fn(|i| if i + 1 < n { t[i].clone() } else { Q::zero() })
            })
            .collect();
        let mut polygons: Vec<Vec<usize>> = Vec::new();
        if n >= 3 {
            for h in faces(d, 2).expect("dimension 2 is in range") {
                let cycle: Vec<usize> = two_face_cycle(d, &h)
                    .expect("2-face")
                    .iter()
                    .map(|v| verts.binary_search(v).expect("vertex listed"))
                    .collect();
                polygons.push(cycle);
            }
        }
        let centroid: [Q; 3] = std::array::from_fn(|i| {
            points.iter().map(|p| &p[i]).sum::<Q>() / Q::from_integer(points.len().into())
        });
        for poly in polygons.iter_mut() {
            let (a, b, c) = (&points[poly[0]], &points[poly[1]], &points[poly[2]]);
            let u: [Q; 3] = std::array::from_fn(|i| &b[i] - &a[i]);
            let v: [Q; 3] = std::array::from_fn(|i| &c[i] - &a[i]);
            let normal = [
                &u[1] * &v[2] - &u[2] * &v[1],
                &u[2] * &v[0] - &u[0] * &v[2],
                &u[0] * &v[1] - &u[1] * &v[0],
            ];
            // Planar polytopes face +z; solids face away from the centroid.
            let outward = if n == 3 {
                normal[2].clone()
            } else {
                (0..3).map(|i| &normal[i] * (&a[i] - &centroid[i])).sum()
            };
            if outward.is_negative() {
                poly.reverse();
            }
        }
        let mut out = String::from("OFF\n");
        let _ = writeln!(out, "{} {} 0", points.len(), polygons.len());
        for p in &points {
            let coords: Vec<String> = p.iter().map(off_number).collect();
            let _ = writeln!(out, "{}", coords.join(" "));
        }
        for poly in &polygons {
            let idx: Vec<String> = poly.iter().map(usize::to_string).collect();
            let _ = writeln!(out, "{} {}", poly.len(), idx.join(" "));
        }
        Some(out)
    }
}

fn off_number(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}", q.to_f64().unwrap_or(f64::NAN))
    }
}
