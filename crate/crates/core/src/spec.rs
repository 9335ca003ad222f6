//! Active-root data `(Ψ, δ)`: parsing, families, `π`, the active-root
//! table, valuation pairings and necessary-condition validation.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::ClassSet;
use crate::linalg::{independent_subset, nullspace, solve, to_q, IntLattice, Q};
use crate::rootsys::{Budget, Root, RootSystem, RootSystemError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpecError {
    #[error("malformed spec: {0}")]
    Parse(String),
    #[error(transparent)]
    RootSystem(#[from] RootSystemError),
    #[error("{0} is not an active root")]
    NotActive(Root),
    #[error("{0} is not in the rational span of the active roots")]
    NotInSpan(Root),
    #[error("no class with label {0}")]
    BadClass(usize),
    #[error("π({0}) is not a simple root (got {1})")]
    Pi(Root, Root),
    #[error("active root {0} matches no row of the active-root table")]
    NoTableRow(Root),
}

/// On-disk form of a spec.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub root_system: String,
    pub active_roots: Vec<Vec<i64>>,
    pub classes: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub torus_corank: Option<u32>,
}

/// The combinatorial data of `H`: active roots `Ψ` and their partition
/// into δ-fibers, one block per divisor class.
#[derive(Clone, Debug)]
pub struct ActiveRootSpec {
    rs: Arc<RootSystem>,
    psi: Vec<Root>,
    classes: Vec<Vec<usize>>,
    torus_corank: Option<u32>,
    class_of: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: &'static str,
    pub message: String,
    pub roots: Vec<Root>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    fn from(violations: Vec<Violation>) -> Self {
        ValidationReport { ok: violations.is_empty(), violations }
    }

    pub fn has(&self, axiom: &str) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok {
            return writeln!(f, "ok");
        }
        for v in &self.violations {
            write!(f, "{}: {}", v.axiom, v.message)?;
            if !v.roots.is_empty() {
                let rs: Vec<String> = v.roots.iter().map(|r| r.to_string()).collect();
                write!(f, " [{}]", rs.join(" "))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Largest `a ∈ ℕ` with `aγ < β` (strict dominance).
pub fn max_multiple_below(beta: &Root, gamma: &Root) -> i64 {
    let mut a = i64::MAX;
    for (b, g) in beta.0.iter().zip(&gamma.0) {
        if *g > 0 {
            a = a.min(b.div_euclid(*g));
        }
    }
    if a == i64::MAX || a < 0 {
        return 0;
    }
    if gamma.scale(a) == *beta {
        a - 1
    } else {
        a
    }
}

fn violation(axiom: &'static str, message: impl Into<String>, roots: Vec<Root>) -> Violation {
    Violation { axiom, message: message.into(), roots }
}

impl ActiveRootSpec {
    /// Assembles a spec without validating it; see [`ActiveRootSpec::validate`].
    pub fn new(rs: Arc<RootSystem>, psi: Vec<Root>, classes: Vec<Vec<usize>>, torus_corank: Option<u32>) -> Self {
        let mut class_of = vec![usize::MAX; psi.len()];
        for (d, block) in classes.iter().enumerate() {
            for &k in block {
                if k < class_of.len() {
                    class_of[k] = d;
                }
            }
        }
        ActiveRootSpec { rs, psi, classes, torus_corank, class_of }
    }

    pub fn from_file(file: &SpecFile, budget: &Budget) -> Result<Self, SpecError> {
        let rs = Arc::new(RootSystem::new(&file.root_system, budget)?);
        let psi = file.active_roots.iter().map(|v| Root(v.clone())).collect();
        Ok(Self::new(rs, psi, file.classes.clone(), file.torus_corank))
    }

    pub fn from_json(text: &str, budget: &Budget) -> Result<Self, SpecError> {
        let file: SpecFile = serde_json::from_str(text).map_err(|e| SpecError::Parse(e.to_string()))?;
        Self::from_file(&file, budget)
    }

    pub fn to_file(&self) -> SpecFile {
        SpecFile {
            root_system: self.rs.label().to_string(),
            active_roots: self.psi.iter().map(|r| r.0.clone()).collect(),
            classes: self.classes.clone(),
            torus_corank: self.torus_corank,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("serializable")
    }

    /// `Ψ = Δ` with singleton classes: the subgroup `TU′`.
    pub fn tu_prime(rs: Arc<RootSystem>) -> Self {
        let n = rs.rank();
        let psi = rs.simple_roots().to_vec();
        Self::new(rs, psi, (0..n).map(|i| vec![i]).collect(), Some(0))
    }

    pub fn root_system(&self) -> &Arc<RootSystem> {
        &self.rs
    }

    pub fn psi(&self) -> &[Root] {
        &self.psi
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn all_classes(&self) -> ClassSet {
        ClassSet::full(self.classes.len())
    }

    pub fn torus_corank(&self) -> Option<u32> {
        self.torus_corank
    }

    /// Class label `δ(β)` of the active root with index `k`.
    pub fn class_of(&self, k: usize) -> usize {
        self.class_of[k]
    }

    pub fn psi_index(&self, beta: &Root) -> Option<usize> {
        self.psi.iter().position(|r| r == beta)
    }

    /// `δ(β)` for `β ∈ Ψ`.
    pub fn delta(&self, beta: &Root) -> Result<usize, SpecError> {
        self.psi_index(beta).map(|k| self.class_of[k]).ok_or_else(|| SpecError::NotActive(beta.clone()))
    }

    /// Indices of `Ψ_I = δ⁻¹(I)`.
    pub fn psi_in(&self, set: ClassSet) -> Vec<usize> {
        (0..self.psi.len()).filter(|&k| set.contains(self.class_of[k])).collect()
    }

    /// All classes singletons, i.e. `T ⊆ H`.
    pub fn is_max_rank(&self) -> bool {
        self.classes.iter().all(|c| c.len() == 1)
    }

    /// `F(β) = {β′ ∈ Ψ : β′ ≤ β}` as indices.
    pub fn family_indices(&self, k: usize) -> Vec<usize> {
        (0..self.psi.len()).filter(|&j| self.psi[j].leq(&self.psi[k])).collect()
    }

    pub fn family(&self, beta: &Root) -> Result<Vec<Root>, SpecError> {
        let k = self.psi_index(beta).ok_or_else(|| SpecError::NotActive(beta.clone()))?;
        Ok(self.family_indices(k).into_iter().map(|j| self.psi[j].clone()).collect())
    }

    /// `β − Σ a_{β,γ} γ` over the maximal elements γ of `among` (indices into Ψ).
    pub fn subtract_maximal(&self, beta: &Root, among: &[usize]) -> Root {
        let maximal = among.iter().filter(|&&g| !among.iter().any(|&h| self.psi[g].less(&self.psi[h])));
        maximal.fold(beta.clone(), |acc, &g| acc.sub(&self.psi[g].scale(max_multiple_below(beta, &self.psi[g]))))
    }

    /// Simple-root index of `π(β)` for `β = Ψ[k]`.
    pub fn pi_index(&self, k: usize) -> Result<usize, SpecError> {
        let beta = &self.psi[k];
        let rest: Vec<usize> = self.family_indices(k).into_iter().filter(|&j| j != k).collect();
        let p = self.subtract_maximal(beta, &rest);
        p.simple_index().ok_or_else(|| SpecError::Pi(beta.clone(), p))
    }

    pub fn pi(&self, beta: &Root) -> Result<Root, SpecError> {
        let k = self.psi_index(beta).ok_or_else(|| SpecError::NotActive(beta.clone()))?;
        Ok(Root::simple(self.rs.rank(), self.pi_index(k)?))
    }

    /// Row (1–6) of the active-root table matching `β`.
    pub fn classify_table1(&self, beta: &Root) -> Result<u8, SpecError> {
        if self.psi_index(beta).is_none() {
            return Err(SpecError::NotActive(beta.clone()));
        }
        table1_type(&self.rs, beta).ok_or_else(|| SpecError::NoTableRow(beta.clone()))
    }

    fn psi_columns(&self) -> Vec<Vec<Q>> {
        self.psi.iter().map(|r| to_q(&r.0)).collect()
    }

    /// `⟨w₀ρ(D), x⟩`: the linear extension of `β ↦ −[δ(β) = D]` to `ℚΨ`.
    pub fn eval_pairing(&self, class: usize, x: &Root) -> Result<Q, SpecError> {
        if class >= self.classes.len() {
            return Err(SpecError::BadClass(class));
        }
        Ok(self.eval_all(x)?[class])
    }

    /// Pairings with every class at once.
    pub fn eval_all(&self, x: &Root) -> Result<Vec<Q>, SpecError> {
        let cols = self.psi_columns();
        let basis = independent_subset(&cols);
        let sub: Vec<Vec<Q>> = basis.iter().map(|&k| cols[k].clone()).collect();
        let c = solve(&sub, &to_q(&x.0)).ok_or_else(|| SpecError::NotInSpan(x.clone()))?;
        let mut out = vec![Q::zero(); self.classes.len()];
        for (j, &k) in basis.iter().enumerate() {
            out[self.class_of[k]] -= c[j];
        }
        Ok(out)
    }

    /// `−w₀(Σ)` with `Σ` the union of the supports of the active roots.
    pub fn spherical_roots(&self) -> Vec<Root> {
        let n = self.rs.rank();
        let mut sigma: Vec<usize> = self.psi.iter().flat_map(|r| r.support()).collect();
        sigma.sort();
        sigma.dedup();
        let inv = opposition_involution(&self.rs);
        let mut out: Vec<usize> = sigma.into_iter().map(|i| inv[i]).collect();
        out.sort();
        out.into_iter().map(|i| Root::simple(n, i)).collect()
    }

    /// Necessary conditions for `(Ψ, δ)` to come from a strongly solvable
    /// spherical subgroup.
    ///
    /// A1–A8 are the structural and classification axioms; A9 and A10 are
    /// the toric-root conditions on weakly active roots and the
    /// characterization of `Ψ` inside `ℤΨ ∩ Φ⁺` by the valuation pairings;
    /// A11 is closure of the unipotent radical under brackets with root
    /// vectors it contains.
    pub fn validate(&self) -> ValidationReport {
        let a1 = self.check_structure();
        if !a1.is_empty() {
            return ValidationReport::from(a1);
        }
        let mut out = Vec::new();
        let n = self.psi.len();
        let pis: Vec<Option<usize>> = (0..n).map(|k| self.pi_index(k).ok()).collect();
        let families: Vec<Vec<usize>> = (0..n).map(|k| self.family_indices(k)).collect();

        // A2
        for k in 0..n {
            let beta = &self.psi[k];
            if table1_type(&self.rs, beta).is_none() {
                out.push(violation("A2", "not in the active-root table", vec![beta.clone()]));
            }
            match pis[k] {
                None => out.push(violation("A2", "π is not a simple root", vec![beta.clone()])),
                Some(p) if beta.0[p] != 1 => {
                    out.push(violation("A2", "coefficient of π(β) in β is not 1", vec![beta.clone()]))
                }
                _ => {}
            }
        }

        // A3
        for k in 0..n {
            let beta = &self.psi[k];
            let supp: HashSet<usize> = beta.support().into_iter().collect();
            let images: Vec<Option<usize>> = families[k].iter().map(|&j| pis[j]).collect();
            let set: HashSet<usize> = images.iter().flatten().copied().collect();
            if images.iter().any(|p| p.is_none()) || set.len() != images.len() || set != supp {
                out.push(violation(
                    "A3",
                    format!("π does not biject F(β) ({} roots) onto supp(β) ({} nodes)", images.len(), supp.len()),
                    vec![beta.clone()],
                ));
            }
        }

        // A4
        for k in 0..n {
            let fam = &families[k];
            let cols: Vec<Vec<Q>> = fam.iter().map(|&j| to_q(&self.psi[j].0)).collect();
            if crate::linalg::rank(&cols) != cols.len() {
                out.push(violation("A4", "family is linearly dependent", vec![self.psi[k].clone()]));
            }
            let classes: HashSet<usize> = fam.iter().map(|&j| self.class_of[j]).collect();
            if classes.len() != fam.len() {
                out.push(violation("A4", "δ is not injective on the family", vec![self.psi[k].clone()]));
            }
        }

        // A5
        for a in 0..n {
            for b in a + 1..n {
                if pis[a].is_some() && pis[a] == pis[b] && self.class_of[a] != self.class_of[b] {
                    out.push(violation(
                        "A5",
                        "same π but different classes",
                        vec![self.psi[a].clone(), self.psi[b].clone()],
                    ));
                }
            }
        }

        // A6
        let cols = self.psi_columns();
        let mut a6_ok = true;
        for rel in nullspace(&cols, self.rs.rank()) {
            for block in &self.classes {
                let s: Q = block.iter().map(|&k| rel[k]).sum();
                if !s.is_zero() {
                    a6_ok = false;
                }
            }
        }
        if !a6_ok {
            out.push(violation("A6", "a linear relation among Ψ does not respect the classes", Vec::new()));
        }

        // A7
        for k in 0..n {
            for &j in &families[k] {
                if j != k && !self.rs.is_root(&self.psi[k].sub(&self.psi[j])) {
                    out.push(violation(
                        "A7",
                        "difference with a family member is not a root",
                        vec![self.psi[k].clone(), self.psi[j].clone()],
                    ));
                }
            }
        }

        // A8
        for k in 0..n {
            let Some(p) = pis[k] else { continue };
            let supp = self.psi[k].support();
            let supports: HashSet<Vec<usize>> = families[k].iter().map(|&j| self.psi[j].support()).collect();
            for mask in 1u32..(1 << supp.len()) {
                let a: Vec<usize> = (0..supp.len()).filter(|b| mask >> b & 1 == 1).map(|b| supp[b]).collect();
                let rest: Vec<usize> = supp.iter().copied().filter(|i| !a.contains(i)).collect();
                if a.contains(&p) || !self.rs.is_connected(&a) || !self.rs.is_connected(&rest) {
                    continue;
                }
                if !supports.contains(&a) {
                    out.push(violation(
                        "A8",
                        format!("connected, co-connected {:?} avoiding π(β) is not the support of a family member", a.iter().map(|i| i + 1).collect::<Vec<_>>()),
                        vec![self.psi[k].clone()],
                    ));
                }
            }
        }

        if a6_ok {
            out.extend(self.check_toric_roots());
            out.extend(self.check_characterization());
        }
        out.extend(self.check_bracket_closure());
        ValidationReport::from(out)
    }

    fn check_structure(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let rank = self.rs.rank();
        let mut seen = HashSet::new();
        for r in &self.psi {
            if r.0.len() != rank {
                out.push(violation("A1", format!("vector has length {}, expected {rank}", r.0.len()), vec![r.clone()]));
            } else if self.rs.index_of(&r.0).is_none() {
                out.push(violation("A1", "not a positive root", vec![r.clone()]));
            }
            if !seen.insert(r.clone()) {
                out.push(violation("A1", "duplicate active root", vec![r.clone()]));
            }
        }
        let mut count = vec![0usize; self.psi.len()];
        for block in &self.classes {
            if block.is_empty() {
                out.push(violation("A1", "empty class", Vec::new()));
            }
            for &k in block {
                if k >= self.psi.len() {
                    out.push(violation("A1", format!("class refers to missing index {k}"), Vec::new()));
                } else {
                    count[k] += 1;
                }
            }
        }
        for (k, c) in count.iter().enumerate() {
            if *c != 1 {
                out.push(violation("A1", format!("index {k} appears in {c} classes"), vec![self.psi[k].clone()]));
            }
        }
        if self.classes.len() > ClassSet::CAPACITY - 1 {
            out.push(violation("A1", "more than 31 classes", Vec::new()));
        }
        out
    }

    /// Roots below some active root (dominance order).
    fn below_psi(&self) -> Vec<Root> {
        self.rs.positive_roots().iter().filter(|a| self.psi.iter().any(|b| a.leq(b))).cloned().collect()
    }

    // A9: every weakly active root is a toric root: the pairing is −1 at
    // exactly one class and ≥ 0 at all others.
    fn check_toric_roots(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for a in self.below_psi() {
            match self.eval_all(&a) {
                Err(_) => out.push(violation("A9", "weakly active root outside ℚΨ", vec![a.clone()])),
                Ok(vals) => {
                    let minus = vals.iter().filter(|v| **v == -Q::one()).count();
                    let neg = vals.iter().filter(|v| **v < Q::zero()).count();
                    if minus != 1 || neg != 1 {
                        out.push(violation("A9", "weakly active root is not a toric root", vec![a.clone()]));
                    }
                }
            }
        }
        out
    }

    // A11: if β ≠ β′ share a class then Lie(H) contains a combination of
    // e_β and e_β′ with both coefficients nonzero; bracketing with e_γ for
    // an inactive γ stays in Lie(H), so β + γ ∈ Ψ forces β′ + γ ∈ Ψ.
    fn check_bracket_closure(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let inactive: Vec<&Root> = self.rs.positive_roots().iter().filter(|g| !self.psi.contains(g)).collect();
        for block in &self.classes {
            for &a in block {
                for &b in block {
                    if a == b {
                        continue;
                    }
                    for g in &inactive {
                        let sa = self.psi[a].add(g);
                        if self.psi.contains(&sa) && !self.psi.contains(&self.psi[b].add(g)) {
                            out.push(violation(
                                "A11",
                                "adding an inactive root to one member of a class gives an active root but not for another member",
                                vec![self.psi[a].clone(), self.psi[b].clone(), (*g).clone()],
                            ));
                        }
                    }
                }
            }
        }
        out
    }

    // A10: a positive root of ℤΨ is active iff its pairings are −1 at one
    // class and 0 elsewhere.
    fn check_characterization(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let lattice = IntLattice::new(self.rs.rank(), &self.psi.iter().map(|r| r.0.clone()).collect::<Vec<_>>());
        for a in self.rs.positive_roots() {
            if !lattice.contains(&a.0) || self.psi.contains(a) {
                continue;
            }
            let Ok(vals) = self.eval_all(a) else { continue };
            let minus = vals.iter().filter(|v| **v == -Q::one()).count();
            let zero = vals.iter().filter(|v| v.is_zero()).count();
            if minus == 1 && zero == vals.len() - 1 {
                out.push(violation("A10", "root with the pairings of an active root is not active", vec![a.clone()]));
            }
        }
        out
    }
}

/// Image of each simple root under `−w₀`, as simple-root indices.
pub fn opposition_involution(rs: &RootSystem) -> Vec<usize> {
    let mut inv: Vec<usize> = (0..rs.rank()).collect();
    for c in rs.components() {
        let o = c.offset;
        let n = c.rank;
        match c.letter {
            'A' => (0..n).for_each(|i| inv[o + i] = o + n - 1 - i),
            'D' if n % 2 == 1 => {
                inv[o + n - 2] = o + n - 1;
                inv[o + n - 1] = o + n - 2;
            }
            'E' if n == 6 => {
                for (a, b) in [(0, 5), (2, 4)] {
                    inv[o + a] = o + b;
                    inv[o + b] = o + a;
                }
            }
            _ => {}
        }
    }
    inv
}

/// Row of the active-root table for a positive root, if any.
///
/// Rows 2–4 are recognized by the labeling-free pattern "coefficient 1 on
/// long simple roots, 2 on short ones" on a doubly laced support of type
/// B_n (rank ≥ 2), C_n (rank ≥ 3) or F4 respectively.
pub fn table1_type(rs: &RootSystem, beta: &Root) -> Option<u8> {
    let supp = beta.support();
    if supp.is_empty() || !rs.is_connected(&supp) || !beta.is_nonneg() {
        return None;
    }
    if supp.iter().all(|&i| beta.0[i] == 1) {
        return Some(1);
    }
    let simple: Vec<Root> = supp.iter().map(|&i| Root::simple(rs.rank(), i)).collect();
    let types = rs.cartan_type_of(&simple);
    let (letter, n) = types[0];
    let long = |i: usize| rs.is_long(&Root::simple(rs.rank(), i));
    if letter == 'G' {
        let short = *supp.iter().find(|&&i| !long(i))?;
        let lng = *supp.iter().find(|&&i| long(i))?;
        return match (beta.0[short], beta.0[lng]) {
            (2, 1) => Some(5),
            (3, 1) => Some(6),
            _ => None,
        };
    }
    let pattern = supp.iter().all(|&i| beta.0[i] == if long(i) { 1 } else { 2 });
    match (letter, pattern) {
        ('B', true) => Some(2),
        ('C', true) if n >= 3 => Some(3),
        ('F', true) => Some(4),
        _ => None,
    }
}

/// The A2 spec with `Ψ = {α2, α1+α2}` in two singleton classes.
pub fn h_spec() -> ActiveRootSpec {
    let rs = Arc::new(crate::rootsys::build_root_system("A2").expect("A2"));
    ActiveRootSpec::new(rs, vec![Root(vec![0, 1]), Root(vec![1, 1])], vec![vec![0], vec![1]], Some(0))
}

/// `TU′` for a type label with the default budget.
pub fn tu_prime(label: &str) -> Result<ActiveRootSpec, SpecError> {
    let rs = crate::rootsys::build_root_system(label)?;
    Ok(ActiveRootSpec::tu_prime(Arc::new(rs)))
}

/// Named fixtures used across the test suites and the CLI docs.
pub fn fixtures() -> Vec<(String, ActiveRootSpec)> {
    let mut out: Vec<(String, ActiveRootSpec)> = ["A1", "A2", "B2", "A3", "G2"]
        .iter()
        .map(|l| (format!("TU'({l})"), tu_prime(l).expect("fixture")))
        .collect();
    out.push(("h-spec(A2)".to_string(), h_spec()));
    let a2 = Arc::new(crate::rootsys::build_root_system("A2").expect("A2"));
    out.push(("empty(A2)".to_string(), ActiveRootSpec::new(a2, Vec::new(), Vec::new(), None)));
    out
}
