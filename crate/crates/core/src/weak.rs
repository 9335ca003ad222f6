//! Weakly active roots `Ψ♯`, the δ-extension, and the per-subset data
//! `Ψ♯(I)`, `Ψ♯_I`, `Φ_I`, `Δ_I`, `W_I`.
//!
//! Every quantity with two known characterizations is computed both ways
//! and compared; a disagreement is reported as [`WeakError::Inconsistent`],
//! which for a spec that passed validation means the data is not realizable.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::bitset::{ClassSet, RootSet};
use crate::linalg::Q;
use crate::rootsys::{Root, RootSystem};
use crate::spec::ActiveRootSpec;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeakError {
    #[error("inconsistent active-root data: {0}")]
    Inconsistent(String),
}

fn bail<T>(msg: impl Into<String>) -> Result<T, WeakError> {
    Err(WeakError::Inconsistent(msg.into()))
}

/// `Φ_I` with its basis and Weyl group order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsystemI {
    pub set: ClassSet,
    pub phi_plus: RootSet,
    /// `Δ_I` as positive-root indices.
    pub basis: Vec<usize>,
    pub weyl_order: u128,
    pub parabolic: bool,
    pub rank: usize,
}

/// Everything the orbit engine needs about a subset `I ⊆ 𝒟*`.
#[derive(Clone, Debug)]
pub struct SubsetData {
    pub set: ClassSet,
    /// `Ψ♯(I)`.
    pub activated: RootSet,
    /// `Ψ♯_I`.
    pub stabilizing: RootSet,
    pub subsystem: SubsystemI,
}

/// Effect of `U_α` on the T-orbit `𝒰_I`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TorbitAction {
    Stable,
    Raises(ClassSet),
    Lowers(ClassSet),
}

/// Membership in `ℕS` for a fixed finite `S ⊂ ℕΔ∖0`, memoized.
struct NatSpan<'a> {
    gens: Vec<&'a Root>,
    memo: HashMap<Vec<i64>, bool>,
}

impl<'a> NatSpan<'a> {
    fn new(gens: Vec<&'a Root>) -> Self {
        NatSpan { gens, memo: HashMap::new() }
    }

    fn contains(&mut self, x: &Root) -> bool {
        if x.is_zero() {
            return true;
        }
        if !x.is_nonneg() {
            return false;
        }
        if let Some(&b) = self.memo.get(&x.0) {
            return b;
        }
        let mut found = false;
        for i in 0..self.gens.len() {
            let g = self.gens[i];
            if g.leq(x) && self.contains(&x.sub(g)) {
                found = true;
                break;
            }
        }
        self.memo.insert(x.0.clone(), found);
        found
    }
}

/// All nonzero vectors `x` with `0 ≤ x ≤ top` coefficientwise.
fn box_below(top: &Root) -> Vec<Root> {
    let mut out = vec![Root(vec![0; top.0.len()])];
    for (i, &t) in top.0.iter().enumerate() {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=t).map(move |c| {
                    let mut w = v.clone();
                    w.0[i] = c;
                    w
                })
            })
            .collect();
    }
    out.retain(|v| !v.is_zero());
    out
}

pub struct WeakRootTable {
    spec: Arc<ActiveRootSpec>,
    psi_set: RootSet,
    sharp: RootSet,
    delta_ext: Vec<Option<usize>>,
    eval: Vec<Option<Vec<Q>>>,
    cache: RwLock<HashMap<ClassSet, Arc<SubsetData>>>,
}

impl std::fmt::Debug for WeakRootTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("WeakRootTable").field("sharp", &self.sharp).field("delta_ext", &self.delta_ext).finish()
    }
}

/// Builds the table for a validated spec.
pub fn weakly_active(spec: Arc<ActiveRootSpec>) -> Result<WeakRootTable, WeakError> {
    WeakRootTable::new(spec)
}

impl WeakRootTable {
    pub fn new(spec: Arc<ActiveRootSpec>) -> Result<Self, WeakError> {
        let rs = spec.root_system().clone();
        let np = rs.num_positive();
        let psi_set: RootSet = spec.psi().iter().map(|r| rs.index_of(&r.0).expect("validated")).collect();

        // Downward saturation: subtract positive roots while staying positive.
        let mut sharp = psi_set;
        let mut stack: Vec<usize> = psi_set.iter().collect();
        while let Some(k) = stack.pop() {
            for p in 0..np {
                if let Some(j) = rs.index_of(&rs.root(k).sub(rs.root(p)).0) {
                    if !sharp.contains(j) {
                        sharp.insert(j);
                        stack.push(j);
                    }
                }
            }
        }
        // Cross-check: α ∈ Ψ♯ iff α ≤ β for some active β, since ℕΦ⁺ = ℕΔ.
        let dominance: RootSet =
            (0..np).filter(|&a| spec.psi().iter().any(|b| rs.root(a).leq(b))).collect();
        if dominance != sharp {
            return bail("saturation and dominance descriptions of weakly active roots differ");
        }

        let eval: Vec<Option<Vec<Q>>> = (0..np).map(|a| spec.eval_all(rs.root(a)).ok()).collect();

        let mut span = NatSpan::new(spec.psi().iter().collect());
        let pis: Vec<Option<usize>> = (0..spec.psi().len()).map(|k| spec.pi_index(k).ok()).collect();
        let mut delta_ext = vec![None; np];
        for a in sharp.iter() {
            let alpha = rs.root(a);
            // Ψ(α) = (α + ℕΨ) ∩ Ψ.
            let members: Vec<usize> = (0..spec.psi().len())
                .filter(|&k| alpha.leq(&spec.psi()[k]) && span.contains(&spec.psi()[k].sub(alpha)))
                .collect();
            let classes: Vec<usize> = members.iter().map(|&k| spec.class_of(k)).collect();
            let Some(&d) = classes.first() else {
                return bail(format!("Ψ({alpha}) is empty for a weakly active root"));
            };
            if classes.iter().any(|&c| c != d) {
                return bail(format!("δ is not constant on Ψ({alpha})"));
            }
            // β ∈ Ψ(α) for α < β iff π(β) ∈ supp(α).
            for k in 0..spec.psi().len() {
                let beta = &spec.psi()[k];
                if alpha.less(beta) {
                    let by_pi = pis[k].is_some_and(|p| alpha.0[p] != 0);
                    if by_pi != members.contains(&k) {
                        return bail(format!("π-criterion for {beta} ∈ Ψ({alpha}) disagrees"));
                    }
                }
            }
            // The pairing is −1 exactly at δ(α).
            match &eval[a] {
                Some(v) if v[d] == -Q::one() && v.iter().filter(|x| **x == -Q::one()).count() == 1 => {}
                _ => return bail(format!("pairings of {alpha} do not single out δ(α)")),
            }
            delta_ext[a] = Some(d);
        }

        Ok(WeakRootTable { spec, psi_set, sharp, delta_ext, eval, cache: RwLock::new(HashMap::new()) })
    }

    pub fn spec(&self) -> &Arc<ActiveRootSpec> {
        &self.spec
    }

    fn rs(&self) -> &RootSystem {
        self.spec.root_system()
    }

    pub fn psi_set(&self) -> RootSet {
        self.psi_set
    }

    /// `Ψ♯` as root indices.
    pub fn sharp(&self) -> RootSet {
        self.sharp
    }

    pub fn sharp_roots(&self) -> Vec<Root> {
        self.rs().roots_of(self.sharp)
    }

    /// `δ(α)` for a weakly active root index.
    pub fn delta_ext(&self, a: usize) -> Option<usize> {
        self.delta_ext[a]
    }

    pub fn delta_ext_root(&self, alpha: &Root) -> Option<usize> {
        self.rs().index_of(&alpha.0).and_then(|a| self.delta_ext[a])
    }

    /// δ-image of a set of weakly active roots.
    pub fn delta_image(&self, set: RootSet) -> ClassSet {
        set.iter().map(|a| self.delta_ext[a].expect("weakly active")).collect()
    }

    /// Pairings `⟨w₀ρ(D), α⟩` of a positive root with every class, if `α ∈ ℚΨ`.
    pub fn eval(&self, a: usize) -> Option<&[Q]> {
        self.eval[a].as_deref()
    }

    /// Per-subset data, computed once and cached.
    pub fn subset(&self, set: ClassSet) -> Result<Arc<SubsetData>, WeakError> {
        if let Some(d) = self.cache.read().expect("cache lock").get(&set) {
            return Ok(d.clone());
        }
        let data = Arc::new(self.compute_subset(set)?);
        // Concurrent writers store identical values, so either one may win.
        let mut w = self.cache.write().expect("cache lock");
        Ok(w.entry(set).or_insert(data).clone())
    }

    pub fn activated(&self, set: ClassSet) -> Result<RootSet, WeakError> {
        Ok(self.subset(set)?.activated)
    }

    pub fn stabilizing(&self, set: ClassSet) -> Result<RootSet, WeakError> {
        Ok(self.subset(set)?.stabilizing)
    }

    pub fn phi_i(&self, set: ClassSet) -> Result<SubsystemI, WeakError> {
        Ok(self.subset(set)?.subsystem.clone())
    }

    /// Difference set `{α − β : α ∈ Ψ_J, β ∈ ℕΨ_I, β < α}` where `J` is
    /// either all of `𝒟*` (activated) or `I` (stabilizing).
    fn difference_set(&self, set: ClassSet, only_in_set: bool) -> Result<RootSet, WeakError> {
        let spec = &self.spec;
        let rs = self.rs();
        let gens: Vec<&Root> = spec.psi_in(set).into_iter().map(|k| &spec.psi()[k]).collect();
        let mut span = NatSpan::new(gens);
        let mut out = RootSet::EMPTY;
        for (k, alpha) in spec.psi().iter().enumerate() {
            if only_in_set && !set.contains(spec.class_of(k)) {
                continue;
            }
            for x in box_below(alpha) {
                if span.contains(&alpha.sub(&x)) {
                    match rs.index_of(&x.0) {
                        Some(i) => out.insert(i),
                        None => return bail(format!("{alpha} − {} = {x} is not a positive root", alpha.sub(&x))),
                    }
                }
            }
        }
        Ok(out)
    }

    fn compute_subset(&self, set: ClassSet) -> Result<SubsetData, WeakError> {
        let spec = &self.spec;
        let rs = self.rs();
        let outside: Vec<usize> = (0..spec.num_classes()).filter(|&d| !set.contains(d)).collect();

        let activated = self.difference_set(set, false)?;
        let by_eval: RootSet = self
            .sharp
            .iter()
            .filter(|&a| {
                let v = self.eval[a].as_ref().expect("weakly active roots lie in ℚΨ");
                outside.iter().all(|&d| v[d] <= Q::zero())
            })
            .collect();
        if activated != by_eval {
            return bail(format!("Ψ♯(I) for I = {set:?}: difference set and pairing inequalities differ"));
        }

        let stabilizing = self.difference_set(set, true)?;
        let by_delta: RootSet = activated.iter().filter(|&a| set.contains(self.delta_ext[a].unwrap())).collect();
        let by_zero: RootSet = self
            .sharp
            .iter()
            .filter(|&a| {
                let v = self.eval[a].as_ref().unwrap();
                outside.iter().all(|&d| v[d].is_zero())
            })
            .collect();
        if stabilizing != by_delta || stabilizing != by_zero {
            return bail(format!("Ψ♯_I for I = {set:?}: the three descriptions differ"));
        }

        let psi_i: RootSet = spec.psi_in(set).into_iter().map(|k| rs.index_of(&spec.psi()[k].0).unwrap()).collect();
        let c = rs.closure_of(psi_i);
        let subsystem = SubsystemI {
            set,
            phi_plus: c.positive,
            basis: c.basis,
            weyl_order: c.weyl_order,
            parabolic: c.parabolic,
            rank: c.rank,
        };
        if subsystem.phi_plus.intersection(self.sharp) != stabilizing {
            return bail(format!("Φ⁺_I ∩ Ψ♯ ≠ Ψ♯_I for I = {set:?}"));
        }
        if !subsystem.basis.iter().all(|&b| stabilizing.contains(b)) {
            return bail(format!("Δ_I ⊄ Ψ♯_I for I = {set:?}"));
        }
        if !subsystem.parabolic {
            return bail(format!("Φ_I is not parabolic for I = {set:?}"));
        }
        if let Some(tc) = spec.torus_corank() {
            let n = set.len();
            if subsystem.rank < n || subsystem.rank > tc as usize + n {
                return bail(format!("rank of Φ_I outside [|I|, torus_corank + |I|] for I = {set:?}"));
            }
        }
        Ok(SubsetData { set, activated, stabilizing, subsystem })
    }

    /// `{β♯_I : β ∈ Ψ_I}`, `β♯_I = β − Σ a_{β,γ} γ` over the maximal
    /// elements of `F(β) ∩ Ψ_I ∖ {β}`.
    pub fn delta_basis_formula(&self, set: ClassSet) -> Vec<Root> {
        let spec = &self.spec;
        let psi_i = spec.psi_in(set);
        let mut out: Vec<Root> = psi_i
            .iter()
            .map(|&k| {
                let among: Vec<usize> =
                    spec.family_indices(k).into_iter().filter(|j| *j != k && psi_i.contains(j)).collect();
                spec.subtract_maximal(&spec.psi()[k], &among)
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// How `U_α` moves the T-orbit `𝒰_I`.
    pub fn torbit_root_action(&self, alpha: &Root, set: ClassSet) -> Result<TorbitAction, WeakError> {
        let Some(a) = self.rs().index_of(&alpha.0) else {
            return bail(format!("{alpha} is not a positive root"));
        };
        let data = self.subset(set)?;
        Ok(if !data.activated.contains(a) {
            TorbitAction::Stable
        } else if data.stabilizing.contains(a) {
            TorbitAction::Lowers(set.without(self.delta_ext[a].unwrap()))
        } else {
            TorbitAction::Raises(set.with(self.delta_ext[a].unwrap()))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::{fixtures, h_spec, tu_prime};

    fn r(v: &[i64]) -> Root {
        Root(v.to_vec())
    }

    fn table(s: ActiveRootSpec) -> WeakRootTable {
        WeakRootTable::new(Arc::new(s)).unwrap()
    }

    fn roots(t: &WeakRootTable, s: RootSet) -> Vec<Root> {
        t.spec().root_system().roots_of(s)
    }

    const D0: ClassSet = ClassSet(1);
    const D1: ClassSet = ClassSet(2);
    const ALL: ClassSet = ClassSet(3);

    #[test]
    fn sharp_examples() {
        let t = table(tu_prime("A2").unwrap());
        assert_eq!(t.sharp_roots(), vec![r(&[1, 0]), r(&[0, 1])]);
        let h = table(h_spec());
        assert_eq!(h.sharp_roots(), vec![r(&[1, 0]), r(&[0, 1]), r(&[1, 1])]);
        assert_eq!(h.delta_ext_root(&r(&[1, 0])), Some(1));
        assert_eq!(h.delta_ext_root(&r(&[0, 1])), Some(0));
        let rs = Arc::new(crate::rootsys::build_root_system("A2").unwrap());
        let e = table(ActiveRootSpec::new(rs, vec![], vec![], None));
        assert!(e.sharp().is_empty());
    }

    #[test]
    fn activated_and_stabilizing_examples() {
        let h = table(h_spec());
        assert_eq!(roots(&h, h.activated(ClassSet::EMPTY).unwrap()), vec![r(&[0, 1]), r(&[1, 1])]);
        assert_eq!(roots(&h, h.activated(D0).unwrap()), vec![r(&[1, 0]), r(&[0, 1]), r(&[1, 1])]);
        assert_eq!(roots(&h, h.activated(D1).unwrap()), vec![r(&[0, 1]), r(&[1, 1])]);
        assert!(h.stabilizing(ClassSet::EMPTY).unwrap().is_empty());
        assert_eq!(roots(&h, h.stabilizing(D0).unwrap()), vec![r(&[0, 1])]);
        assert_eq!(roots(&h, h.stabilizing(ALL).unwrap()), vec![r(&[1, 0]), r(&[0, 1]), r(&[1, 1])]);
    }

    #[test]
    fn phi_i_examples() {
        let h = table(h_spec());
        let p = h.phi_i(D0).unwrap();
        assert_eq!(roots(&h, p.phi_plus), vec![r(&[0, 1])]);
        assert_eq!(p.weyl_order, 2);
        let p = h.phi_i(ALL).unwrap();
        assert_eq!(p.basis, vec![0, 1]);
        assert_eq!(p.weyl_order, 6);
        let p = h.phi_i(ClassSet::EMPTY).unwrap();
        assert!(p.phi_plus.is_empty() && p.weyl_order == 1);
    }

    #[test]
    fn delta_basis_examples() {
        let h = table(h_spec());
        assert_eq!(h.delta_basis_formula(ALL), vec![r(&[0, 1]), r(&[1, 0])]);
        assert_eq!(h.delta_basis_formula(D1), vec![r(&[1, 1])]);
        let t = table(tu_prime("A2").unwrap());
        assert_eq!(t.delta_basis_formula(D0), vec![r(&[1, 0])]);
    }

    #[test]
    fn torbit_examples() {
        let h = table(h_spec());
        assert_eq!(h.torbit_root_action(&r(&[1, 0]), ClassSet::EMPTY).unwrap(), TorbitAction::Stable);
        assert_eq!(h.torbit_root_action(&r(&[1, 0]), D0).unwrap(), TorbitAction::Raises(ALL));
        assert_eq!(h.torbit_root_action(&r(&[1, 1]), D1).unwrap(), TorbitAction::Lowers(ClassSet::EMPTY));
    }

    #[test]
    fn fixture_invariants() {
        for (name, s) in fixtures() {
            let t = table(s);
            let spec = t.spec().clone();
            let rs = spec.root_system().clone();
            let n = spec.num_classes();
            for set in ClassSet::all_subsets(n) {
                let d = t.subset(set).unwrap();
                // Monotonicity.
                for other in ClassSet::all_subsets(n).filter(|o| set.is_subset(*o)) {
                    let e = t.subset(other).unwrap();
                    assert!(d.activated.is_subset(e.activated), "{name}");
                    assert!(d.subsystem.phi_plus.is_subset(e.subsystem.phi_plus), "{name}");
                }
                // Recovery of I from Φ_I.
                assert_eq!(t.delta_image(d.subsystem.phi_plus.intersection(t.sharp())), set, "{name}");
                // Ψ♯_I = ℕΨ♯_I ∩ Ψ♯.
                let gens = rs.roots_of(d.stabilizing);
                let mut span = NatSpan::new(gens.iter().collect());
                let closure: RootSet = t.sharp().iter().filter(|&a| span.contains(rs.root(a))).collect();
                assert_eq!(closure, d.stabilizing, "{name}");
            }
        }
    }
}
