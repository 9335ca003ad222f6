//! The B-orbit engine: orbits `𝒪_{w,I}` named by reduced pairs, their
//! representative intervals, enumeration, the W- and monoid actions,
//! stabilizers, `P_α`-decompositions and the weak order.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::bitset::{ClassSet, RootSet};
use crate::rootsys::{parse_word, Budget, Root, RootSystem, RootSystemError, Signed, WeylGroup};
use crate::spec::{ActiveRootSpec, ValidationReport};
use crate::weak::{SubsetData, WeakError, WeakRootTable};

/// Largest number of δ-classes the engine accepts (it tabulates all `2^|𝒟*|` subsets).
pub const MAX_CLASSES: usize = 16;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("spec failed validation:\n{0}")]
    Invalid(ValidationReport),
    #[error(transparent)]
    RootSystem(#[from] RootSystemError),
    #[error(transparent)]
    Weak(#[from] WeakError),
    #[error("engine cross-check failed: {0}")]
    Inconsistent(String),
    #[error("bad orbit name `{0}`: {1}")]
    BadOrbit(String, String),
}

impl EngineError {
    pub fn is_budget(&self) -> bool {
        matches!(self, EngineError::RootSystem(RootSystemError::Budget { .. }))
    }
}

/// A reduced pair `(w, I)`: `Φ⁺_I ⊆ Φ⁺(w)`. `w` is an index into the
/// canonical element order of the Weyl group. Ordered by `I`, then `w`.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct OrbitId {
    pub set: ClassSet,
    pub w: usize,
}

/// An extended pair `(w, I)`: `Ψ♯(I) ∖ Ψ♯_I ⊆ Φ⁺(w)`.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ExtendedPair {
    pub set: ClassSet,
    pub w: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitRecord {
    pub id: OrbitId,
    pub extended: ExtendedPair,
    /// `(m, M)`: `(w, J)` names this orbit iff `m ⊆ J ⊆ M`.
    pub interval: (ClassSet, ClassSet),
    pub rank_offset: usize,
    /// `l(w) − |𝒟* ∖ M|`.
    pub dim_offset: i64,
    pub closed: bool,
    pub stabilizer_order: u128,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stabilizer {
    pub order: u128,
    /// The roots `w(Δ_I)`.
    pub generators: Vec<Root>,
    /// Reflections in those roots, as group element indices.
    pub reflections: Vec<usize>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum PAlphaCase {
    U,
    T1,
    T2,
    TNeg,
}

impl std::fmt::Display for PAlphaCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PAlphaCase::U => "U",
            PAlphaCase::T1 => "T1",
            PAlphaCase::T2 => "T2",
            PAlphaCase::TNeg => "T-neg",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PAlphaDecomposition {
    pub case: PAlphaCase,
    /// Reduced pairs of the orbits in `P_α 𝒪`, without repetition.
    pub constituents: Vec<OrbitId>,
}

/// Orbits as nodes, `m(s_α)` moves as labelled edges.
#[derive(Clone, Debug)]
pub struct WeakOrderGraph {
    pub nodes: Vec<OrbitId>,
    /// `(from, to, simple index)` with node indices into `nodes`.
    pub edges: Vec<(usize, usize, usize)>,
}

pub struct OrbitEngine {
    spec: Arc<ActiveRootSpec>,
    group: Arc<WeylGroup>,
    weak: WeakRootTable,
    subsets: Vec<Arc<SubsetData>>,
}

impl std::fmt::Debug for OrbitEngine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OrbitEngine")
            .field("root_system", &self.spec.root_system().label())
            .field("classes", &self.spec.num_classes())
            .finish()
    }
}

impl OrbitEngine {
    /// Validates the input, builds the Weyl group and tabulates every subset of `𝒟*`.
    pub fn new(spec: ActiveRootSpec, budget: &Budget) -> Result<Self, EngineError> {
        let group = WeylGroup::new(spec.root_system().clone(), budget)?;
        Self::with_group(Arc::new(spec), Arc::new(group))
    }

    /// As [`OrbitEngine::new`] with a prebuilt group for the same root system.
    pub fn with_group(spec: Arc<ActiveRootSpec>, group: Arc<WeylGroup>) -> Result<Self, EngineError> {
        assert_eq!(spec.root_system().label(), group.root_system().label(), "group of a different root system");
        let report = spec.validate();
        if !report.ok {
            return Err(EngineError::Invalid(report));
        }
        let m = spec.num_classes();
        if m > MAX_CLASSES {
            return Err(RootSystemError::Budget { what: "number of classes", actual: m as u128, limit: MAX_CLASSES as u128 }
                .into());
        }
        let weak = WeakRootTable::new(spec.clone())?;
        let subsets = ClassSet::all_subsets(m)
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|s| weak.subset(s))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(OrbitEngine { spec, group, weak, subsets })
    }

    pub fn spec(&self) -> &Arc<ActiveRootSpec> {
        &self.spec
    }

    pub fn group(&self) -> &Arc<WeylGroup> {
        &self.group
    }

    pub fn weak(&self) -> &WeakRootTable {
        &self.weak
    }

    pub fn root_system(&self) -> &RootSystem {
        self.spec.root_system()
    }

    pub fn num_classes(&self) -> usize {
        self.spec.num_classes()
    }

    pub fn all_classes(&self) -> ClassSet {
        self.spec.all_classes()
    }

    pub fn data(&self, set: ClassSet) -> &SubsetData {
        &self.subsets[set.0 as usize]
    }

    fn inv(&self, w: usize) -> RootSet {
        self.group.inversion_set(w)
    }

    /// `−w⁻¹(α_i)`.
    fn beta(&self, i: usize, w: usize) -> Signed {
        self.group.act_signed(self.group.inverse(w), Signed::pos(i)).flip()
    }

    fn delta(&self, root: usize) -> usize {
        self.weak.delta_ext(root).expect("weakly active root")
    }

    /// `I(w) = δ(Ψ♯(I) ∖ Φ⁺(w))`.
    pub fn shift_set(&self, w: usize, set: ClassSet) -> ClassSet {
        self.weak.delta_image(self.data(set).activated.difference(self.inv(w)))
    }

    pub fn is_reduced(&self, w: usize, set: ClassSet) -> bool {
        self.data(set).subsystem.phi_plus.is_subset(self.inv(w))
    }

    pub fn is_extended(&self, w: usize, set: ClassSet) -> bool {
        let d = self.data(set);
        d.activated.difference(d.stabilizing).is_subset(self.inv(w))
    }

    pub fn reduce_pair(&self, w: usize, set: ClassSet) -> OrbitId {
        OrbitId { w, set: set.difference(self.shift_set(w, set)) }
    }

    pub fn extend_pair(&self, w: usize, set: ClassSet) -> ExtendedPair {
        ExtendedPair { w, set: set.union(self.shift_set(w, set)) }
    }

    pub fn extend(&self, id: OrbitId) -> ExtendedPair {
        self.extend_pair(id.w, id.set)
    }

    pub fn reduce(&self, ep: ExtendedPair) -> OrbitId {
        self.reduce_pair(ep.w, ep.set)
    }

    pub fn interval(&self, id: OrbitId) -> (ClassSet, ClassSet) {
        let m = self.reduce_pair(id.w, id.set).set;
        (m, self.extend_pair(id.w, id.set).set)
    }

    pub fn dim_offset(&self, id: OrbitId) -> i64 {
        let big_m = self.extend(id).set;
        self.group.length(id.w) as i64 - (self.num_classes() - big_m.len()) as i64
    }

    /// `dim B/H`, when the torus corank is known. Each δ-class contributes
    /// one dimension to the open T-orbit of `B/H`.
    pub fn base_dim(&self) -> Option<u64> {
        self.spec.torus_corank().map(|tc| tc as u64 + self.num_classes() as u64)
    }

    pub fn absolute_dim(&self, id: OrbitId) -> Option<i64> {
        self.base_dim().map(|d| d as i64 + self.dim_offset(id))
    }

    pub fn absolute_rank(&self, id: OrbitId) -> Option<u64> {
        self.spec.torus_corank().map(|tc| tc as u64 + id.set.len() as u64)
    }

    pub fn is_closed(&self, id: OrbitId) -> bool {
        if !id.set.is_empty() {
            return false;
        }
        let inv = self.inv(id.w);
        if !inv.is_subset(self.weak.psi_set()) {
            return false;
        }
        let image = self.weak.delta_image(inv);
        if image.len() != inv.len() {
            return false;
        }
        let psi_image: RootSet = self.weak.psi_set().iter().filter(|&r| image.contains(self.delta(r))).collect();
        psi_image == inv
    }

    pub fn record(&self, id: OrbitId) -> OrbitRecord {
        let extended = self.extend(id);
        let m = self.reduce_pair(id.w, id.set).set;
        OrbitRecord {
            id,
            extended,
            interval: (m, extended.set),
            rank_offset: m.len(),
            dim_offset: self.dim_offset(id),
            closed: self.is_closed(id),
            stabilizer_order: self.data(m).subsystem.weyl_order,
        }
    }

    /// Every orbit, ordered by `I` then by `w`.
    pub fn enumerate_orbits(&self) -> Vec<OrbitRecord> {
        let sets: Vec<ClassSet> = ClassSet::all_subsets(self.num_classes()).collect();
        sets.into_par_iter()
            .map(|set| {
                (0..self.group.len())
                    .filter(|&w| self.is_reduced(w, set))
                    .map(|w| self.record(OrbitId { w, set }))
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    }

    /// `Σ_{I ⊆ 𝒟*} |W| / |W_I|`.
    pub fn formula_count(&self) -> u128 {
        let w = self.group.len() as u128;
        self.subsets.iter().map(|d| w / d.subsystem.weyl_order).sum()
    }

    /// Number of distinct reduced forms of all pairs in `W × 2^{𝒟*}`.
    pub fn brute_count(&self) -> usize {
        let sets: Vec<ClassSet> = ClassSet::all_subsets(self.num_classes()).collect();
        let seen: HashSet<OrbitId> = sets
            .par_iter()
            .flat_map_iter(|&set| (0..self.group.len()).map(move |w| self.reduce_pair(w, set)))
            .collect();
        seen.len()
    }

    /// The element of `u W_I` inverting every root of `Φ⁺_I`.
    pub fn canonical_rep(&self, u: usize, set: ClassSet) -> usize {
        let basis = &self.data(set).subsystem.basis;
        let mut u = u;
        while let Some(&g) = basis.iter().find(|&&g| !self.inv(u).contains(g)) {
            u = self.group.mul(u, self.group.reflection(g));
        }
        u
    }

    /// `s_i · 𝒪_{w,I}`.
    pub fn simple_action(&self, i: usize, id: OrbitId) -> OrbitId {
        let b = self.beta(i, id.w);
        if !b.negative && self.data(id.set).stabilizing.contains(b.index as usize) {
            id
        } else {
            OrbitId { w: self.group.left_mul(i, id.w), set: id.set }
        }
    }

    /// `v · 𝒪_{w,I}` for a word `v = s_{i1} ⋯ s_{ik}` (0-based), applied letter by letter.
    pub fn word_action(&self, word: &[usize], id: OrbitId) -> OrbitId {
        word.iter().rev().fold(id, |acc, &i| self.simple_action(i, acc))
    }

    /// `v · 𝒪_{w,I}`, computed letter by letter and by coset canonicalization.
    pub fn weyl_action(&self, v: usize, id: OrbitId) -> Result<OrbitId, EngineError> {
        let word: Vec<usize> = self.group.element(v).canonical_word().iter().map(|&i| i as usize).collect();
        let by_letters = self.word_action(&word, id);
        let by_coset = OrbitId { w: self.canonical_rep(self.group.mul(v, id.w), id.set), set: id.set };
        if by_letters != by_coset || !self.is_reduced(by_coset.w, by_coset.set) {
            return Err(EngineError::Inconsistent(format!(
                "W-action of {} on {}: letters give {}, coset gives {}",
                self.group.element(v).word_string(),
                self.format_orbit(id),
                self.format_orbit(by_letters),
                self.format_orbit(by_coset)
            )));
        }
        Ok(by_coset)
    }

    /// `m(s_i) · 𝒪` on an extended pair.
    pub fn monoid_simple(&self, i: usize, ep: ExtendedPair) -> ExtendedPair {
        let b = self.beta(i, ep.w);
        if b.negative {
            return self.extend_pair(self.group.left_mul(i, ep.w), ep.set);
        }
        let d = self.data(ep.set);
        let r = b.index as usize;
        if d.activated.contains(r) && !d.stabilizing.contains(r) {
            self.extend_pair(ep.w, ep.set.with(self.delta(r)))
        } else {
            ep
        }
    }

    pub fn monoid_word(&self, word: &[usize], ep: ExtendedPair) -> ExtendedPair {
        word.iter().rev().fold(ep, |acc, &i| self.monoid_simple(i, acc))
    }

    /// `m(v) · 𝒪` along the canonical reduced word of `v`.
    pub fn monoid_action(&self, v: usize, ep: ExtendedPair) -> ExtendedPair {
        let word: Vec<usize> = self.group.element(v).canonical_word().iter().map(|&i| i as usize).collect();
        self.monoid_word(&word, ep)
    }

    /// Weak-order minimality: `w⁻¹(Δ⁻) ∩ Φ⁺ ⊆ Ψ♯(I) ∖ Ψ♯_I`.
    pub fn is_weak_minimal(&self, ep: ExtendedPair) -> bool {
        let d = self.data(ep.set);
        let raising = d.activated.difference(d.stabilizing);
        (0..self.root_system().rank()).all(|i| {
            let b = self.beta(i, ep.w);
            b.negative || raising.contains(b.index as usize)
        })
    }

    pub fn stabilizer(&self, id: OrbitId) -> Stabilizer {
        let sub = &self.data(id.set).subsystem;
        let rs = self.root_system();
        let mut generators = Vec::new();
        let mut reflections = Vec::new();
        for &g in &sub.basis {
            let img = self.group.act_signed(id.w, Signed::pos(g));
            generators.push(rs.signed_root(img));
            reflections.push(self.group.reflection(img.index as usize));
        }
        Stabilizer { order: sub.weyl_order, generators, reflections }
    }

    /// Orbits grouped by their (W-invariant) reduced `I`.
    pub fn w_orbit_decomposition(&self) -> Vec<(ClassSet, Vec<OrbitId>)> {
        let mut out: Vec<(ClassSet, Vec<OrbitId>)> =
            ClassSet::all_subsets(self.num_classes()).map(|s| (s, Vec::new())).collect();
        for r in self.enumerate_orbits() {
            out[r.id.set.0 as usize].1.push(r.id);
        }
        out
    }

    /// The orbits making up `P_α 𝒪` for the simple root `α_i`.
    pub fn palpha_decompose(&self, i: usize, id: OrbitId) -> PAlphaDecomposition {
        let id = self.reduce_pair(id.w, id.set);
        let (w, m) = (id.w, id.set);
        let v = self.group.left_mul(i, w);
        let b = self.beta(i, w);
        let r = b.index as usize;
        let dm = self.data(m);
        let (case, pairs) = if !b.negative {
            let big_m = self.extend(id).set;
            if dm.stabilizing.contains(r) {
                (PAlphaCase::T1, vec![(w, m), (v, m), (w, m.without(self.delta(r)))])
            } else if dm.activated.contains(r) && !self.data(big_m).stabilizing.contains(r) {
                (PAlphaCase::T2, vec![(v, m), (w, m), (w, m.with(self.delta(r)))])
            } else {
                (PAlphaCase::U, vec![(w, m), (v, m)])
            }
        } else {
            let m_prime = self.extend_pair(v, m).set;
            if dm.activated.contains(r) && !self.data(m_prime).stabilizing.contains(r) {
                (PAlphaCase::TNeg, vec![(w, m), (v, m), (v, m.with(self.delta(r)))])
            } else {
                (PAlphaCase::U, vec![(w, m), (v, m)])
            }
        };
        let mut constituents: Vec<OrbitId> = Vec::new();
        for (x, s) in pairs {
            let o = self.reduce_pair(x, s);
            if !constituents.contains(&o) {
                constituents.push(o);
            }
        }
        PAlphaDecomposition { case, constituents }
    }

    /// Sufficient test for `closure(𝒪_a) ⊆ closure(𝒪_b)`: `v ∈ wW_I` and `J ⊆ M_{w,I}`.
    pub fn closure_leq_sufficient(&self, a: OrbitId, b: OrbitId) -> bool {
        self.canonical_rep(a.w, b.set) == b.w && a.set.is_subset(self.extend(b).set)
    }

    pub fn weak_order_graph(&self) -> WeakOrderGraph {
        let nodes: Vec<OrbitId> = self.enumerate_orbits().into_iter().map(|r| r.id).collect();
        let index: std::collections::HashMap<OrbitId, usize> = nodes.iter().enumerate().map(|(k, &o)| (o, k)).collect();
        let mut edges = Vec::new();
        for (k, &o) in nodes.iter().enumerate() {
            let ep = self.extend(o);
            for i in 0..self.root_system().rank() {
                let next = self.monoid_simple(i, ep);
                if next != ep {
                    edges.push((k, index[&self.reduce(next)], i));
                }
            }
        }
        WeakOrderGraph { nodes, edges }
    }

    pub fn weak_order_dot(&self, graph: &WeakOrderGraph) -> String {
        let mut s = String::from("digraph weak_order {\n");
        for o in &graph.nodes {
            let _ = writeln!(s, "  \"{}\";", self.format_orbit(*o));
        }
        for &(a, b, i) in &graph.edges {
            let _ = writeln!(
                s,
                "  \"{}\" -> \"{}\" [label=\"{}\"];",
                self.format_orbit(graph.nodes[a]),
                self.format_orbit(graph.nodes[b]),
                i + 1
            );
        }
        s.push_str("}\n");
        s
    }

    /// `w=<word>;I=<labels>`.
    pub fn format_orbit(&self, id: OrbitId) -> String {
        format_pair(&self.group, id.w, id.set)
    }

    pub fn format_extended(&self, ep: ExtendedPair) -> String {
        format_pair(&self.group, ep.w, ep.set)
    }

    /// Parses an orbit name; any pair is accepted and reduced.
    pub fn parse_orbit(&self, s: &str) -> Result<OrbitId, EngineError> {
        let (w, set) = parse_pair(&self.group, self.num_classes(), s)?;
        Ok(self.reduce_pair(w, set))
    }
}

pub fn format_class_set(set: ClassSet) -> String {
    if set.is_empty() {
        "-".to_string()
    } else {
        set.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
    }
}

pub fn format_pair(group: &WeylGroup, w: usize, set: ClassSet) -> String {
    format!("w={};I={}", group.element(w).word_string(), format_class_set(set))
}

pub fn parse_pair(group: &WeylGroup, num_classes: usize, s: &str) -> Result<(usize, ClassSet), EngineError> {
    let bad = |why: &str| EngineError::BadOrbit(s.to_string(), why.to_string());
    let (wpart, ipart) = s.trim().split_once(';').ok_or_else(|| bad("expected `w=...;I=...`"))?;
    let word = wpart.trim().strip_prefix("w=").ok_or_else(|| bad("missing `w=`"))?;
    let labels = ipart.trim().strip_prefix("I=").ok_or_else(|| bad("missing `I=`"))?;
    let word = parse_word(word, group.root_system().rank()).map_err(|e| bad(&e.to_string()))?;
    let w = group.from_word(&word).map_err(|e| bad(&e.to_string()))?;
    let mut set = ClassSet::EMPTY;
    if labels.trim() != "-" {
        for t in labels.split(',') {
            let d: usize = t.trim().parse().map_err(|_| bad("class labels must be integers"))?;
            if d >= num_classes {
                return Err(bad("class label out of range"));
            }
            set.insert(d);
        }
    }
    Ok((w, set))
}
