//! Exhaustive enumeration of candidate `(Ψ, δ)` data on small root systems.

use std::sync::Arc;

use crate::rootsys::RootSystem;
use crate::spec::ActiveRootSpec;

/// All set partitions of `items`, blocks in order of first element.
pub fn set_partitions(items: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let Some((&first, rest)) = items.split_first() else {
        return vec![Vec::new()];
    };
    let mut out = Vec::new();
    for p in set_partitions(rest) {
        for k in 0..p.len() {
            let mut q = p.clone();
            q[k].insert(0, first);
            q.sort();
            out.push(q);
        }
        let mut q = p;
        q.insert(0, vec![first]);
        q.sort();
        out.push(q);
    }
    out
}

/// Every pair (subset of `Φ⁺`, partition of it), unvalidated. Grows like a
/// Bell number in `|Φ⁺|`, so only meant for tiny root systems.
pub fn candidate_specs(rs: &Arc<RootSystem>) -> Vec<ActiveRootSpec> {
    let np = rs.num_positive();
    assert!(np <= 12, "candidate enumeration is exponential in the number of positive roots");
    let mut out = Vec::new();
    for mask in 0u32..(1 << np) {
        let psi: Vec<_> = (0..np).filter(|&i| mask >> i & 1 == 1).map(|i| rs.root(i).clone()).collect();
        let idx: Vec<usize> = (0..psi.len()).collect();
        for classes in set_partitions(&idx) {
            out.push(ActiveRootSpec::new(rs.clone(), psi.clone(), classes, None));
        }
    }
    out
}

/// The candidates that pass validation.
pub fn valid_specs(rs: &Arc<RootSystem>) -> Vec<ActiveRootSpec> {
    candidate_specs(rs).into_iter().filter(|s| s.validate().ok).collect()
}
