//! Orbit counts and the comparison with `TU′`.

use std::sync::Arc;

use thiserror::Error;

use crate::bitset::ClassSet;
use crate::orbits::{EngineError, OrbitEngine};
use crate::rootsys::Root;
use crate::spec::ActiveRootSpec;

#[derive(Debug, Error)]
pub enum KnopError {
    #[error("input is not of maximal rank (some δ-class has more than one root)")]
    NotMaxRank,
    #[error(transparent)]
    Engine(#[from] EngineError),
}

#[derive(Clone, Debug)]
pub struct BoundReport {
    pub count_h: u128,
    pub count_tu: u128,
    pub satisfied: bool,
    pub reduction_spec: ActiveRootSpec,
    pub count_reduction: u128,
    /// Nontrivial equivalences of the class preorder.
    pub warnings: Vec<String>,
}

impl BoundReport {
    /// `count_h ≤ count_reduction ≤ count_tu`.
    pub fn chain_holds(&self) -> bool {
        self.count_h <= self.count_reduction && self.count_reduction <= self.count_tu
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiSubsystem {
    /// `π(Ψ_I)`, sorted simple roots.
    pub basis: Vec<Root>,
    pub weyl_order: u128,
}

/// `Σ_{I ⊆ 𝒟*} |W| / |W_I|`, checked against the enumeration.
pub fn orbit_count(engine: &OrbitEngine) -> Result<u128, EngineError> {
    let f = engine.formula_count();
    let n = engine.enumerate_orbits().len() as u128;
    if f != n {
        return Err(EngineError::Inconsistent(format!("formula gives {f} orbits, enumeration {n}")));
    }
    Ok(f)
}

/// Reflexive-transitive closure of `i ≼ j` iff some root of class `i` is
/// dominated by some root of class `j`.
pub fn class_preorder(spec: &ActiveRootSpec) -> Vec<Vec<bool>> {
    let m = spec.num_classes();
    let psi = spec.psi();
    let mut le = vec![vec![false; m]; m];
    for (a, ra) in psi.iter().enumerate() {
        for (b, rb) in psi.iter().enumerate() {
            if ra.leq(rb) {
                le[spec.class_of(a)][spec.class_of(b)] = true;
            }
        }
    }
    for k in 0..m {
        for i in 0..m {
            for j in 0..m {
                if le[i][k] && le[k][j] {
                    le[i][j] = true;
                }
            }
        }
    }
    le
}

/// Classes not strictly below any other class, with warnings for classes
/// that are equivalent without being equal.
pub fn maximal_classes(spec: &ActiveRootSpec) -> (Vec<usize>, Vec<String>) {
    let le = class_preorder(spec);
    let m = spec.num_classes();
    let maximal = (0..m).filter(|&i| (0..m).all(|j| !le[i][j] || le[j][i])).collect();
    let mut warnings = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            if le[i][j] && le[j][i] {
                warnings.push(format!("classes {i} and {j} are equivalent under the class preorder"));
            }
        }
    }
    (maximal, warnings)
}

/// `Ψ′ = ⋃ F(β_k)` over one representative per maximal class.
///
/// Representatives are tried in lexicographic order (each class's roots
/// sorted lexicographically) and the first choice for which `δ` restricted
/// to `Ψ′` is a bijection onto `𝒟*` is taken. A choice can miss a class
/// when a maximal class holds several roots, only some of which dominate
/// the roots of a smaller class.
pub fn max_rank_reduction(spec: &ActiveRootSpec) -> (ActiveRootSpec, Vec<String>) {
    let (maximal, mut warnings) = maximal_classes(spec);
    let mut choices: Vec<Vec<usize>> = vec![Vec::new()];
    for &d in &maximal {
        let mut members = spec.classes()[d].clone();
        members.sort_by(|&a, &b| spec.psi()[a].cmp(&spec.psi()[b]));
        choices = choices
            .into_iter()
            .flat_map(|c| members.iter().map(move |&k| [c.clone(), vec![k]].concat()))
            .collect();
    }
    let bijective = |r: &ActiveRootSpec| r.num_classes() == spec.num_classes() && r.is_max_rank();
    for reps in &choices {
        let r = max_rank_reduction_with(spec, reps);
        if bijective(&r) {
            return (r, warnings);
        }
    }
    warnings.push("no choice of representatives restricts δ to a bijection".to_string());
    (max_rank_reduction_with(spec, &choices[0]), warnings)
}

/// The reduction for explicit representatives (indices into `Ψ`).
pub fn max_rank_reduction_with(spec: &ActiveRootSpec, reps: &[usize]) -> ActiveRootSpec {
    let mut keep: Vec<usize> = reps.iter().flat_map(|&k| spec.family_indices(k)).collect();
    keep.sort();
    keep.dedup();
    let psi: Vec<Root> = keep.iter().map(|&k| spec.psi()[k].clone()).collect();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for d in 0..spec.num_classes() {
        let block: Vec<usize> = (0..keep.len()).filter(|&j| spec.class_of(keep[j]) == d).collect();
        if !block.is_empty() {
            classes.push(block);
        }
    }
    ActiveRootSpec::new(spec.root_system().clone(), psi, classes, None)
}

pub fn knop_check(engine: &OrbitEngine) -> Result<BoundReport, EngineError> {
    let spec = engine.spec();
    let count_h = orbit_count(engine)?;
    let tu = OrbitEngine::with_group(Arc::new(ActiveRootSpec::tu_prime(spec.root_system().clone())), engine.group().clone())?;
    let count_tu = orbit_count(&tu)?;
    let (reduction_spec, warnings) = max_rank_reduction(spec);
    let red = OrbitEngine::with_group(Arc::new(reduction_spec.clone()), engine.group().clone())?;
    let count_reduction = orbit_count(&red)?;
    Ok(BoundReport { count_h, count_tu, satisfied: count_h <= count_tu, reduction_spec, count_reduction, warnings })
}

/// The standard subsystem generated by `π(Ψ_I)` for a maximal-rank spec.
pub fn pi_subsystem(spec: &ActiveRootSpec, set: ClassSet) -> Result<PiSubsystem, KnopError> {
    if !spec.is_max_rank() {
        return Err(KnopError::NotMaxRank);
    }
    let rs = spec.root_system();
    let mut idx: Vec<usize> = spec
        .psi_in(set)
        .into_iter()
        .map(|k| spec.pi_index(k).map_err(|e| EngineError::Inconsistent(e.to_string())))
        .collect::<Result<_, _>>()?;
    idx.sort();
    idx.dedup();
    let weyl_order = rs.closure_of(idx.iter().copied().collect()).weyl_order;
    Ok(PiSubsystem { basis: idx.iter().map(|&i| rs.root(i).clone()).collect(), weyl_order })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{build_root_system, Budget};
    use crate::spec::{fixtures, h_spec, tu_prime};

    fn engine(s: ActiveRootSpec) -> OrbitEngine {
        OrbitEngine::new(s, &Budget::default()).unwrap()
    }

    #[test]
    fn counts() {
        assert_eq!(orbit_count(&engine(tu_prime("A2").unwrap())).unwrap(), 13);
        assert_eq!(orbit_count(&engine(tu_prime("B2").unwrap())).unwrap(), 17);
        assert_eq!(orbit_count(&engine(h_spec())).unwrap(), 13);
    }

    #[test]
    fn knop_examples() {
        let r = knop_check(&engine(h_spec())).unwrap();
        assert_eq!((r.count_h, r.count_tu, r.satisfied), (13, 13, true));
        assert_eq!(r.reduction_spec.psi(), h_spec().psi());
        let r = knop_check(&engine(tu_prime("B2").unwrap())).unwrap();
        assert_eq!((r.count_h, r.count_tu, r.count_reduction), (17, 17, 17));
        let rs = std::sync::Arc::new(build_root_system("A2").unwrap());
        let r = knop_check(&engine(ActiveRootSpec::new(rs, vec![], vec![], None))).unwrap();
        assert_eq!((r.count_h, r.count_tu, r.satisfied), (6, 13, true));
    }

    #[test]
    fn reduction_of_h_spec_is_unchanged() {
        let (red, warnings) = max_rank_reduction(&h_spec());
        assert_eq!(red.psi(), h_spec().psi());
        assert!(warnings.is_empty());
        let (maximal, _) = maximal_classes(&h_spec());
        assert_eq!(maximal, vec![1]);
    }

    #[test]
    fn pi_subsystem_examples() {
        let h = h_spec();
        let p = pi_subsystem(&h, ClassSet(3)).unwrap();
        assert_eq!(p.basis, vec![Root(vec![1, 0]), Root(vec![0, 1])]);
        assert_eq!(p.weyl_order, 6);
        let p = pi_subsystem(&h, ClassSet(2)).unwrap();
        assert_eq!((p.basis, p.weyl_order), (vec![Root(vec![1, 0])], 2));
        let rs = std::sync::Arc::new(build_root_system("A2").unwrap());
        let merged = ActiveRootSpec::new(rs, vec![Root(vec![1, 0]), Root(vec![0, 1])], vec![vec![0, 1]], None);
        assert!(matches!(pi_subsystem(&merged, ClassSet(1)), Err(KnopError::NotMaxRank)));
    }

    #[test]
    fn fixtures_chain_and_pi_orders() {
        for (name, s) in fixtures() {
            let e = engine(s.clone());
            let r = knop_check(&e).unwrap();
            assert!(r.satisfied && r.chain_holds(), "{name}");
            assert!(r.reduction_spec.validate().ok && r.reduction_spec.is_max_rank(), "{name}");
            if s.is_max_rank() {
                for set in ClassSet::all_subsets(s.num_classes()) {
                    let p = pi_subsystem(&s, set).unwrap();
                    assert!(p.weyl_order <= e.data(set).subsystem.weyl_order, "{name}");
                    if name.starts_with("TU'") {
                        assert_eq!(p.weyl_order, e.data(set).subsystem.weyl_order);
                    }
                }
            }
        }
    }

    #[test]
    fn representative_must_cover_every_class() {
        let rs = std::sync::Arc::new(build_root_system("A3").unwrap());
        let psi = vec![Root(vec![1, 0, 0]), Root(vec![0, 0, 1]), Root(vec![1, 1, 0])];
        let s = ActiveRootSpec::new(rs, psi, vec![vec![0], vec![1, 2]], None);
        assert!(s.validate().ok);
        // The lexicographically least root α3 of the maximal class would drop class 0.
        assert_eq!(max_rank_reduction_with(&s, &[1]).num_classes(), 1);
        let (red, warnings) = max_rank_reduction(&s);
        assert!(warnings.is_empty());
        assert_eq!(red.psi(), &[Root(vec![1, 0, 0]), Root(vec![1, 1, 0])]);
        let r = knop_check(&engine(s)).unwrap();
        assert_eq!((r.count_h, r.count_reduction, r.count_tu), (41, 52, 75));
    }
}
