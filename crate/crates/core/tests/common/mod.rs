#![allow(dead_code)]

use std::collections::HashSet;
use std::sync::Arc;

use borbit_core::catalog::valid_specs;
use borbit_core::linalg::{nullspace, rank, to_q, IntLattice, Q};
use borbit_core::spec::fixtures;
use borbit_core::{build_root_system, ActiveRootSpec, Budget, OrbitEngine, WeylGroup};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const POOL_TYPES: [&str; 5] = ["A1", "A2", "A3", "B2", "G2"];

pub fn engine(s: ActiveRootSpec) -> OrbitEngine {
    OrbitEngine::new(s, &Budget::default()).expect("engine")
}

/// Every candidate over the pool types that validates, with a readable name.
pub fn pool() -> Vec<(String, ActiveRootSpec)> {
    POOL_TYPES
        .iter()
        .flat_map(|label| {
            let rs = Arc::new(build_root_system(label).unwrap());
            valid_specs(&rs)
                .into_iter()
                .map(move |s| (format!("{label} Ψ={:?} classes={:?}", s.psi(), s.classes()), s))
        })
        .collect()
}

/// `n` specs drawn uniformly with replacement from [`pool`].
pub fn sampled(n: usize, seed: u64) -> Vec<(String, ActiveRootSpec)> {
    let p = pool();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| p[rng.gen_range(0..p.len())].clone()).collect()
}

/// Fixtures followed by the whole pool.
pub fn everything() -> Vec<(String, ActiveRootSpec)> {
    let mut v = fixtures();
    v.extend(pool());
    v
}

/// A random regular dominant weight with small positive rational coordinates.
pub fn random_lambda(rank: usize, seed: u64) -> Vec<Q> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..rank).map(|_| Q::new(rng.gen_range(1..20), rng.gen_range(1..7))).collect()
}

/// Number of nonempty faces of `conv(points)`; see [`faces`].
pub fn face_census(points: &[Vec<Q>]) -> usize {
    faces(points).len()
}

/// Nonempty faces of `conv(points)` (as sorted point-index sets) for a
/// full-dimensional point set, by brute-force facet detection: a facet is
/// the set of points on a supporting hyperplane through `dim` affinely
/// independent points, and faces are the intersections of facet sets.
pub fn faces(points: &[Vec<Q>]) -> HashSet<Vec<usize>> {
    let dim = points[0].len();
    let n = points.len();
    let diff = |a: &[Q], b: &[Q]| -> Vec<Q> { a.iter().zip(b).map(|(x, y)| x - y).collect() };
    let mut facets: HashSet<Vec<usize>> = HashSet::new();
    let mut combo: Vec<usize> = (0..dim).collect();
    loop {
        let base = &points[combo[0]];
        let dirs: Vec<Vec<Q>> = combo[1..].iter().map(|&k| diff(&points[k], base)).collect();
        if dirs.is_empty() || rank(&dirs) == dim - 1 {
            // Normal vector: kernel of the direction matrix (as rows).
            let cols: Vec<Vec<Q>> = (0..dim).map(|c| dirs.iter().map(|d| d[c]).collect()).collect();
            let normal = if dirs.is_empty() {
                vec![Q::from_integer(1)]
            } else {
                nullspace(&cols, dirs.len()).remove(0)
            };
            let vals: Vec<Q> = points
                .iter()
                .map(|p| diff(p, base).iter().zip(&normal).map(|(a, b)| a * b).sum())
                .collect();
            let pos = vals.iter().any(|v| v.is_positive());
            let neg = vals.iter().any(|v| v.is_negative());
            if !(pos && neg) {
                facets.insert((0..n).filter(|&k| vals[k].is_zero()).collect());
            }
        }
        // Next combination.
        let mut i = dim;
        loop {
            if i == 0 {
                let mut faces: HashSet<Vec<usize>> = HashSet::new();
                faces.insert((0..n).collect());
                let mut frontier: Vec<Vec<usize>> = vec![(0..n).collect()];
                while let Some(f) = frontier.pop() {
                    for g in &facets {
                        let h: Vec<usize> = f.iter().copied().filter(|x| g.contains(x)).collect();
                        if !h.is_empty() && faces.insert(h.clone()) {
                            frontier.push(h);
                        }
                    }
                }
                return faces;
            }
            i -= 1;
            if combo[i] < n - dim + i {
                combo[i] += 1;
                for j in i + 1..dim {
                    combo[j] = combo[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// `conv(Wρ)` vertices in fundamental-weight coordinates, by closing `{ρ}`
/// under simple reflections.
pub fn weyl_orbit_of_rho(group: &WeylGroup) -> Vec<Vec<Q>> {
    let rs = group.root_system();
    let n = rs.rank();
    let cols: Vec<Vec<Q>> = (0..n).map(|i| to_q(&rs.to_weight(rs.root(i)))).collect();
    let mut seen: Vec<Vec<Q>> = vec![vec![Q::from_integer(1); n]];
    let mut k = 0;
    while k < seen.len() {
        for i in 0..n {
            let p = &seen[k];
            let c = p[i];
            let q: Vec<Q> = p.iter().zip(&cols[i]).map(|(x, a)| x - c * a).collect();
            if !seen.contains(&q) {
                seen.push(q);
            }
        }
        k += 1;
    }
    seen
}

/// Checks `ℕΨ♯_I = ℤΨ_I ∩ ℕΔ` on all `x ∈ ℕΔ` with `x ≤ 2θ_box`
/// coefficientwise, where `θ_box` is the coefficientwise maximum of `Φ⁺`.
pub fn saturation_holds(e: &OrbitEngine, set: borbit_core::ClassSet) -> bool {
    let rs = e.root_system();
    let n = rs.rank();
    let top: Vec<i64> = (0..n).map(|i| 2 * rs.positive_roots().iter().map(|r| r.0[i]).max().unwrap()).collect();
    let spec = e.spec();
    let gens_z: Vec<Vec<i64>> = spec.psi_in(set).iter().map(|&k| spec.psi()[k].0.clone()).collect();
    let lattice = IntLattice::new(n, &gens_z);
    let gens_n: Vec<Vec<i64>> = rs.roots_of(e.data(set).stabilizing).into_iter().map(|r| r.0).collect();
    // Reachability from 0 inside the box.
    let mut reach: HashSet<Vec<i64>> = HashSet::from([vec![0; n]]);
    let mut stack = vec![vec![0i64; n]];
    while let Some(x) = stack.pop() {
        for g in &gens_n {
            let y: Vec<i64> = x.iter().zip(g).map(|(a, b)| a + b).collect();
            if y.iter().zip(&top).all(|(a, t)| a <= t) && reach.insert(y.clone()) {
                stack.push(y);
            }
        }
    }
    let mut all = vec![vec![]];
    for &t in &top {
        all = all.into_iter().flat_map(|v: Vec<i64>| (0..=t).map(move |c| [v.clone(), vec![c]].concat())).collect();
    }
    all.iter().all(|x| lattice.contains(x) == reach.contains(x))
}
