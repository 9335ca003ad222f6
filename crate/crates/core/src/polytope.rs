//! The weight-polytope model: `𝒮_{w,I} = conv(wW_Iλ)` inside `P = conv(Wλ)`.
//!
//! Since `λ` is regular, `v ↦ vλ` is injective on `W`, so subpolytopes are
//! stored by their vertex sets as sorted lists of Weyl element indices.

use std::collections::HashMap;

use num_traits::{Signed as _, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::bitset::ClassSet;
use crate::linalg::{fmt_q, in_cone, q, rank, solve, to_q, Q};
use crate::orbits::{OrbitEngine, OrbitId};
use crate::rootsys::WeylGroup;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolytopeError {
    #[error("λ must have {expected} coordinates, got {got}")]
    Length { expected: usize, got: usize },
    #[error("λ is not regular dominant: every fundamental-weight coordinate must be positive")]
    NotRegular,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subpolytope {
    /// Sorted element indices `v` with `vλ` a vertex.
    pub vertices: Vec<usize>,
    pub dim: usize,
}

#[derive(Clone, Debug)]
pub struct EmbeddingReport {
    pub injective: bool,
    pub collisions: Vec<(OrbitId, OrbitId)>,
    pub equivariant: bool,
}

/// `ρ` in fundamental-weight coordinates.
pub fn rho(rank: usize) -> Vec<Q> {
    vec![q(1); rank]
}

/// `Σ_{J ⊆ Δ} |W| / |W_J|`: the number of nonempty faces of `conv(Wλ)`.
pub fn face_count(group: &WeylGroup) -> u128 {
    let rs = group.root_system();
    let n = rs.rank();
    let w = group.len() as u128;
    (0u32..1 << n)
        .map(|mask| {
            let simple = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            w / rs.closure_of(simple).weyl_order
        })
        .sum()
}

pub struct PolytopeModel<'a> {
    engine: &'a OrbitEngine,
    lambda: Vec<Q>,
    /// `vλ` for every element, fundamental-weight coordinates.
    points: Vec<Vec<Q>>,
    /// Elements of `W_I`, by `I`.
    parabolics: Vec<Vec<usize>>,
}

impl<'a> PolytopeModel<'a> {
    pub fn new(engine: &'a OrbitEngine, lambda: Vec<Q>) -> Result<Self, PolytopeError> {
        let group = engine.group();
        let rs = group.root_system();
        let n = rs.rank();
        if lambda.len() != n {
            return Err(PolytopeError::Length { expected: n, got: lambda.len() });
        }
        if lambda.iter().any(|x| !x.is_positive()) {
            return Err(PolytopeError::NotRegular);
        }
        let simple_weights: Vec<Vec<Q>> = (0..n).map(|i| to_q(&rs.to_weight(rs.root(i)))).collect();
        // Elements come sorted by length, so `s_i w` with `i` the first letter is already known.
        let mut points: Vec<Vec<Q>> = Vec::with_capacity(group.len());
        for w in 0..group.len() {
            let p = match group.element(w).canonical_word().first() {
                None => lambda.clone(),
                Some(&i) => {
                    let i = i as usize;
                    let prev = &points[group.left_mul(i, w)];
                    let c = prev[i];
                    prev.iter().zip(&simple_weights[i]).map(|(x, a)| x - c * a).collect()
                }
            };
            points.push(p);
        }
        let parabolics = ClassSet::all_subsets(engine.num_classes())
            .map(|s| {
                let gens: Vec<usize> =
                    engine.data(s).subsystem.basis.iter().map(|&g| group.reflection(g)).collect();
                let mut elems = vec![group.identity()];
                let mut k = 0;
                while k < elems.len() {
                    for &g in &gens {
                        let x = group.mul(elems[k], g);
                        if !elems.contains(&x) {
                            elems.push(x);
                        }
                    }
                    k += 1;
                }
                elems.sort();
                elems
            })
            .collect();
        Ok(PolytopeModel { engine, lambda, points, parabolics })
    }

    pub fn with_rho(engine: &'a OrbitEngine) -> Self {
        Self::new(engine, rho(engine.root_system().rank())).expect("ρ is regular dominant")
    }

    pub fn lambda(&self) -> &[Q] {
        &self.lambda
    }

    pub fn point(&self, v: usize) -> &[Q] {
        &self.points[v]
    }

    /// Elements of `W_I`.
    pub fn parabolic(&self, set: ClassSet) -> &[usize] {
        &self.parabolics[set.0 as usize]
    }

    fn affine_dim(&self, vertices: &[usize]) -> usize {
        let base = &self.points[vertices[0]];
        let diffs: Vec<Vec<Q>> =
            vertices[1..].iter().map(|&v| self.points[v].iter().zip(base).map(|(a, b)| a - b).collect()).collect();
        if diffs.is_empty() {
            0
        } else {
            rank(&diffs)
        }
    }

    pub fn subpolytope(&self, id: OrbitId) -> Subpolytope {
        let group = self.engine.group();
        let mut vertices: Vec<usize> = self.parabolic(id.set).iter().map(|&u| group.mul(id.w, u)).collect();
        vertices.sort();
        let dim = self.affine_dim(&vertices);
        Subpolytope { vertices, dim }
    }

    /// Vertex `vλ` lies in `wλ + ℚ≥0·w(Φ⁻_I)` exactly for `v ∈ wW_I`.
    pub fn cone_check(&self, id: OrbitId) -> bool {
        let group = self.engine.group();
        let rs = group.root_system();
        let gens: Vec<Vec<Q>> = self
            .engine
            .data(id.set)
            .subsystem
            .phi_plus
            .iter()
            .map(|g| {
                let img = rs.signed_root(group.act_signed(id.w, crate::rootsys::Signed::pos(g)).flip());
                to_q(&rs.to_weight(&img))
            })
            .collect();
        let expected = self.subpolytope(id).vertices;
        let base = &self.points[id.w];
        (0..group.len()).all(|v| {
            let d: Vec<Q> = self.points[v].iter().zip(base).map(|(a, b)| a - b).collect();
            in_cone(&gens, &d) == expected.binary_search(&v).is_ok()
        })
    }

    /// The vertex of `𝒮_{w,I}` that is least in dominance order, if unique.
    pub fn minimal_vertex(&self, id: OrbitId) -> Option<usize> {
        let rs = self.engine.root_system();
        let simple_weights: Vec<Vec<Q>> = (0..rs.rank()).map(|i| to_q(&rs.to_weight(rs.root(i)))).collect();
        let leq = |a: usize, b: usize| {
            let d: Vec<Q> = self.points[b].iter().zip(&self.points[a]).map(|(x, y)| x - y).collect();
            solve(&simple_weights, &d).is_some_and(|c| c.iter().all(|x| !x.is_negative()))
        };
        let verts = self.subpolytope(id).vertices;
        let minimal: Vec<usize> = verts.iter().copied().filter(|&a| verts.iter().all(|&b| leq(a, b))).collect();
        match minimal.as_slice() {
            [m] => Some(*m),
            _ => None,
        }
    }

    /// Vertex-set containment, which implies closure containment.
    pub fn bruhat_hint(&self, a: OrbitId, b: OrbitId) -> bool {
        let sb = self.subpolytope(b).vertices;
        self.subpolytope(a).vertices.iter().all(|v| sb.binary_search(v).is_ok())
    }

    pub fn embedding_check(&self) -> EmbeddingReport {
        let group = self.engine.group();
        let orbits: Vec<OrbitId> = self.engine.enumerate_orbits().into_iter().map(|r| r.id).collect();
        let mut seen: HashMap<Vec<usize>, OrbitId> = HashMap::new();
        let mut collisions = Vec::new();
        for &o in &orbits {
            if let Some(&prev) = seen.get(&self.subpolytope(o).vertices) {
                collisions.push((prev, o));
            } else {
                seen.insert(self.subpolytope(o).vertices, o);
            }
        }
        let equivariant = orbits.iter().all(|&o| {
            let verts = self.subpolytope(o).vertices;
            (0..group.root_system().rank()).all(|i| {
                let mut moved: Vec<usize> = verts.iter().map(|&v| group.left_mul(i, v)).collect();
                moved.sort();
                self.subpolytope(self.engine.simple_action(i, o)).vertices == moved
            })
        });
        EmbeddingReport { injective: collisions.is_empty(), collisions, equivariant }
    }

    /// JSON export of every subpolytope, rationals as `"p/q"`.
    pub fn export_json(&self) -> Value {
        let subs: Vec<Value> = self
            .engine
            .enumerate_orbits()
            .into_iter()
            .map(|r| {
                let s = self.subpolytope(r.id);
                let verts: Vec<Vec<String>> =
                    s.vertices.iter().map(|&v| self.points[v].iter().map(fmt_q).collect()).collect();
                json!({ "orbit": self.engine.format_orbit(r.id), "vertices": verts, "dim": s.dim })
            })
            .collect();
        json!({ "lambda": self.lambda.iter().map(fmt_q).collect::<Vec<_>>(), "subpolytopes": subs })
    }
}

/// True when every coordinate is a positive rational.
pub fn is_regular_dominant(lambda: &[Q]) -> bool {
    lambda.iter().all(|x| !x.is_zero() && x.is_positive())
}
