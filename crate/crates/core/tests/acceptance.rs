//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. All checks are exact (tolerance 0); only runtimes have limits.

mod common;

use std::collections::{BTreeSet, HashSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use borbit_core::linalg::{rank, to_q, Q};
use borbit_core::polytope::rho;
use borbit_core::spec::{fixtures, h_spec, tu_prime};
use borbit_core::*;
use common::*;

const COUNT_BUDGET: Duration = Duration::from_secs(1);
const ORACLE_BUDGET: Duration = Duration::from_secs(30);
const POLYTOPE_BUDGET: Duration = Duration::from_secs(5);
const RANDOM_SPECS: usize = 120;
const SEED: u64 = 0x5eed;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------------------------------------------------------------------------
// Independent oracles (nothing below consults the engine's subset data).

/// `Φ⁺_I = ℚΨ_I ∩ Φ⁺` by rank tests.
fn phi_plus_i(s: &ActiveRootSpec, set: ClassSet) -> Vec<Root> {
    let gens: Vec<Vec<Q>> = s.psi_in(set).iter().map(|&k| to_q(&s.psi()[k].0)).collect();
    let r = rank(&gens);
    s.root_system()
        .positive_roots()
        .iter()
        .filter(|a| {
            let mut g = gens.clone();
            g.push(to_q(&a.0));
            rank(&g) == r
        })
        .cloned()
        .collect()
}

/// Indecomposable elements of a positive system.
fn indecomposable(pos: &[Root]) -> Vec<Root> {
    let set: HashSet<&Root> = pos.iter().collect();
    let mut out: Vec<Root> = pos
        .iter()
        .filter(|a| !pos.iter().any(|b| b != *a && a.sub(b).is_positive() && set.contains(&a.sub(b))))
        .cloned()
        .collect();
    out.sort();
    out
}

/// The Weyl group element acting as the reflection in `gamma`.
fn reflection(g: &WeylGroup, gamma: &Root) -> usize {
    let rs = g.root_system();
    let want: Vec<Root> = rs.simple_roots().iter().map(|a| rs.reflect(a, gamma)).collect();
    (0..g.len())
        .find(|&v| rs.simple_roots().iter().zip(&want).all(|(a, b)| g.element(v).act(rs, a).unwrap() == *b))
        .expect("reflection lies in W")
}

fn generated(g: &WeylGroup, gens: &[usize]) -> BTreeSet<usize> {
    let mut seen = BTreeSet::from([g.identity()]);
    let mut stack = vec![g.identity()];
    while let Some(x) = stack.pop() {
        for &s in gens {
            let y = g.mul(x, s);
            if seen.insert(y) {
                stack.push(y);
            }
        }
    }
    seen
}

/// `|W_I|` as the order of the group generated by reflections in `Φ⁺_I`.
fn w_i_order(g: &WeylGroup, pos: &[Root]) -> usize {
    let gens: Vec<usize> = pos.iter().map(|r| reflection(g, r)).collect();
    generated(g, &gens).len()
}

struct Oracle {
    formula: u128,
    reduced_pairs: u128,
}

/// `Σ_I |W|/|W_I|` and the number of pairs with `Φ⁺_I ⊆ Φ⁺(w)`.
fn oracle_counts(s: &ActiveRootSpec, g: &WeylGroup) -> Oracle {
    let rs = g.root_system();
    let mut formula = 0u128;
    let mut reduced_pairs = 0u128;
    for set in ClassSet::all_subsets(s.num_classes()) {
        let pos = phi_plus_i(s, set);
        formula += g.len() as u128 / w_i_order(g, &pos) as u128;
        let need = rs.root_set(pos.iter());
        reduced_pairs += (0..g.len()).filter(|&w| need.is_subset(g.inversion_set(w))).count() as u128;
    }
    Oracle { formula, reduced_pairs }
}

/// `{α − β : α ∈ Ψ (∈ Ψ_I if `inside`), β ∈ ℕΨ_I, β < α}` by enumerating
/// `ℕΨ_I` below each `α`.
fn difference_set(s: &ActiveRootSpec, set: ClassSet, inside: bool) -> BTreeSet<Root> {
    let gens: Vec<&Root> = s.psi_in(set).into_iter().map(|k| &s.psi()[k]).collect();
    let mut out = BTreeSet::new();
    for (k, alpha) in s.psi().iter().enumerate() {
        if inside && !set.contains(s.class_of(k)) {
            continue;
        }
        let zero = Root(vec![0; alpha.0.len()]);
        let mut seen = HashSet::from([zero.clone()]);
        let mut stack = vec![zero];
        while let Some(beta) = stack.pop() {
            let x = alpha.sub(&beta);
            if s.root_system().is_root(&x) && x.is_positive() {
                out.insert(x);
            }
            for g in &gens {
                let b = beta.add(g);
                if alpha.sub(&b).is_nonneg() && !alpha.sub(&b).is_zero() && seen.insert(b.clone()) {
                    stack.push(b);
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------

fn c1_counts() -> Outcome {
    let cases: Vec<(&str, ActiveRootSpec, u128)> = vec![
        ("TU'(A1)", tu_prime("A1").unwrap(), 3),
        ("TU'(A2)", tu_prime("A2").unwrap(), 13),
        ("TU'(B2)", tu_prime("B2").unwrap(), 17),
        ("TU'(A3)", tu_prime("A3").unwrap(), 75),
        ("h-spec(A2)", h_spec(), 13),
    ];
    let mut slowest = Duration::ZERO;
    for (name, s, want) in cases {
        let t = Instant::now();
        let e = engine(s.clone());
        let o = oracle_counts(&s, e.group());
        let got = [e.formula_count(), e.brute_count() as u128, o.formula, o.reduced_pairs];
        ensure(got.iter().all(|&c| c == want), || format!("{name}: expected {want}, got {got:?}"))?;
        if name.starts_with("TU'") {
            let faces = face_census(&weyl_orbit_of_rho(e.group())) as u128;
            ensure(faces == want, || format!("{name}: face census {faces}, expected {want}"))?;
        }
        let dt = t.elapsed();
        ensure(dt < COUNT_BUDGET, || format!("{name}: {dt:?} over budget"))?;
        slowest = slowest.max(dt);
    }
    Ok(format!("5 specs exact, slowest {slowest:.2?}"))
}

fn c2_oracle_equivalence() -> Outcome {
    let t = Instant::now();
    let mut specs = fixtures();
    let n_fix = specs.len();
    specs.extend(sampled(RANDOM_SPECS, SEED));
    for (name, s) in &specs {
        let e = engine(s.clone());
        let mut distinct = HashSet::new();
        for w in 0..e.group().len() {
            for set in ClassSet::all_subsets(e.num_classes()) {
                distinct.insert(e.reduce_pair(w, set));
            }
        }
        let o = oracle_counts(s, e.group());
        let f = e.formula_count();
        ensure(distinct.len() as u128 == f && o.formula == f && o.reduced_pairs == f, || {
            format!("{name}: distinct {} formula {f} oracle {}/{}", distinct.len(), o.formula, o.reduced_pairs)
        })?;
    }
    let dt = t.elapsed();
    ensure(dt < ORACLE_BUDGET, || format!("{dt:?} over budget"))?;
    Ok(format!("{n_fix} fixtures + {RANDOM_SPECS} random specs in {dt:.2?}"))
}

fn c3_w_orbits() -> Outcome {
    let mut checked = 0;
    for (name, s) in fixtures() {
        let e = engine(s.clone());
        let g = e.group();
        let rs = g.root_system();
        let blocks = e.w_orbit_decomposition();
        ensure(blocks.len() == 1 << e.num_classes(), || format!("{name}: {} W-orbits", blocks.len()))?;
        for (set, ids) in blocks {
            let pos = phi_plus_i(&s, set);
            let wi = w_i_order(g, &pos);
            ensure(ids.len() * wi == g.len(), || format!("{name}: block {set:?} has {} orbits", ids.len()))?;
            let basis = indecomposable(&pos);
            for id in ids {
                let stab: BTreeSet<usize> =
                    (0..g.len()).filter(|&v| e.weyl_action(v, id).unwrap() == id).collect();
                let w = g.element(id.w);
                let gens: Vec<usize> = basis.iter().map(|b| reflection(g, &w.act(rs, b).unwrap())).collect();
                ensure(stab.len() == wi && stab == generated(g, &gens), || {
                    format!("{name}: stabilizer of {} is not wW_Iw⁻¹", e.format_orbit(id))
                })?;
                ensure(e.stabilizer(id).order == wi as u128, || format!("{name}: stabilizer order"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} stabilizers equal wW_Iw⁻¹"))
}

fn c4_actions() -> Outcome {
    let mut words = 0usize;
    for (name, s) in fixtures() {
        let e = engine(s);
        let g = e.group().clone();
        let top = ExtendedPair { w: g.longest(), set: e.all_classes() };
        let w0_words = g.reduced_words(g.longest());
        for r in e.enumerate_orbits() {
            if g.root_system().label() == "A2" {
                for v in 0..g.len() {
                    let results: HashSet<OrbitId> =
                        g.reduced_words(v).iter().map(|word| e.word_action(word, r.id)).collect();
                    words += g.reduced_words(v).len();
                    ensure(results.len() == 1, || format!("{name}: reduced words of v={v} disagree"))?;
                }
            }
            for i in 0..g.root_system().rank() {
                let once = e.monoid_simple(i, r.extended);
                ensure(e.monoid_simple(i, once) == once, || format!("{name}: m(s{})² ≠ m(s{})", i + 1, i + 1))?;
            }
            ensure(w0_words.iter().all(|w| e.monoid_word(w, r.extended) == top), || {
                format!("{name}: {} does not saturate to (w₀, 𝒟*)", e.format_orbit(r.id))
            })?;
        }
    }
    Ok(format!("{words} reduced-word evaluations on A2 agree; idempotence and saturation on all fixtures"))
}

fn c5_weakly_active() -> Outcome {
    let mut subsets = 0;
    for (name, s) in fixtures() {
        let e = engine(s.clone());
        let rs = e.root_system();
        let weak = e.weak();
        for set in ClassSet::all_subsets(s.num_classes()) {
            let outside: Vec<usize> = (0..s.num_classes()).filter(|&d| !set.contains(d)).collect();
            let act_diff = difference_set(&s, set, false);
            let stab_diff = difference_set(&s, set, true);
            let act_eval: BTreeSet<Root> = weak
                .sharp()
                .iter()
                .filter(|&a| outside.iter().all(|&d| weak.eval(a).unwrap()[d] <= Q::from_integer(0)))
                .map(|a| rs.root(a).clone())
                .collect();
            let stab_eval: BTreeSet<Root> = weak
                .sharp()
                .iter()
                .filter(|&a| outside.iter().all(|&d| weak.eval(a).unwrap()[d] == Q::from_integer(0)))
                .map(|a| rs.root(a).clone())
                .collect();
            let stab_delta: BTreeSet<Root> =
                act_diff.iter().filter(|a| set.contains(weak.delta_ext_root(a).unwrap())).cloned().collect();
            let engine_act: BTreeSet<Root> = rs.roots_of(e.data(set).activated).into_iter().collect();
            let engine_stab: BTreeSet<Root> = rs.roots_of(e.data(set).stabilizing).into_iter().collect();
            ensure(act_diff == act_eval && act_diff == engine_act, || format!("{name}: Ψ♯(I) differs for {set:?}"))?;
            ensure(stab_diff == stab_eval && stab_diff == stab_delta && stab_diff == engine_stab, || {
                format!("{name}: Ψ♯_I differs for {set:?}")
            })?;
            ensure(saturation_holds(&e, set), || format!("{name}: saturation fails for {set:?}"))?;
            let basis = indecomposable(&phi_plus_i(&s, set));
            ensure(weak.delta_basis_formula(set) == basis, || format!("{name}: Δ_I formula fails for {set:?}"))?;
            subsets += 1;
        }
    }
    Ok(format!("{subsets} (fixture, I) pairs"))
}

fn c6_polytope() -> Outcome {
    let t = Instant::now();
    let mut orbits = 0;
    for (seed, (name, s)) in fixtures().into_iter().enumerate() {
        let e = engine(s.clone());
        let n = e.root_system().rank();
        for lambda in [rho(n), random_lambda(n, SEED + seed as u64)] {
            let p = PolytopeModel::new(&e, lambda.clone()).map_err(|x| format!("{name}: {x}"))?;
            let rep = p.embedding_check();
            ensure(rep.injective && rep.equivariant, || format!("{name}: embedding {rep:?} at λ={lambda:?}"))?;
            for r in e.enumerate_orbits() {
                let rk = {
                    let pos = phi_plus_i(&s, r.id.set);
                    rank(&pos.iter().map(|a| to_q(&a.0)).collect::<Vec<_>>())
                };
                ensure(p.subpolytope(r.id).dim == rk, || format!("{name}: dim of {}", e.format_orbit(r.id)))?;
                ensure(p.cone_check(r.id), || format!("{name}: cone check fails at {}", e.format_orbit(r.id)))?;
                orbits += 1;
            }
        }
    }
    // TU′(A2): the subpolytope image is the face lattice of the hexagon.
    let e = engine(tu_prime("A2").unwrap());
    let p = PolytopeModel::with_rho(&e);
    let key = |pts: Vec<Vec<Q>>| -> BTreeSet<Vec<Q>> { pts.into_iter().collect() };
    let image: HashSet<BTreeSet<Vec<Q>>> = e
        .enumerate_orbits()
        .iter()
        .map(|r| key(p.subpolytope(r.id).vertices.iter().map(|&v| p.point(v).to_vec()).collect()))
        .collect();
    let hex = weyl_orbit_of_rho(e.group());
    let faces: HashSet<BTreeSet<Vec<Q>>> =
        faces(&hex).into_iter().map(|f| key(f.iter().map(|&k| hex[k].clone()).collect())).collect();
    ensure(image.len() == 13 && image == faces, || format!("TU'(A2): {} subpolytopes vs {} faces", image.len(), faces.len()))?;
    let dt = t.elapsed();
    ensure(dt < POLYTOPE_BUDGET, || format!("{dt:?} over budget"))?;
    Ok(format!("{orbits} (orbit, λ) checks, hexagon image = 13 faces, {dt:.2?}"))
}

fn c7_closed_orbits() -> Outcome {
    let e = engine(h_spec());
    let closed: BTreeSet<String> =
        e.enumerate_orbits().iter().filter(|r| r.closed).map(|r| e.format_orbit(r.id)).collect();
    let want: BTreeSet<String> = ["w=e;I=-", "w=2;I=-", "w=1,2;I=-"].iter().map(|s| s.to_string()).collect();
    ensure(closed == want, || format!("h-spec closed orbits {closed:?}"))?;
    for (name, s) in fixtures() {
        let e = engine(s);
        for r in e.enumerate_orbits().iter().filter(|r| r.closed) {
            ensure((r.dim_offset, r.rank_offset) == (0, 0), || format!("{name}: {}", e.format_orbit(r.id)))?;
        }
    }
    Ok("h-spec closed = {(e,∅), (s2,∅), (s1s2,∅)}; offsets 0".to_string())
}

fn c8_knop() -> Outcome {
    let mut specs = fixtures();
    specs.extend(sampled(RANDOM_SPECS, SEED));
    for (name, s) in &specs {
        let r = knop_check(&engine(s.clone())).map_err(|x| format!("{name}: {x}"))?;
        ensure(r.satisfied && r.chain_holds(), || {
            format!("{name}: {} ≤ {} ≤ {} fails", r.count_h, r.count_reduction, r.count_tu)
        })?;
    }
    Ok(format!("chain holds on {} specs", specs.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("orbit counts", c1_counts),
        ("oracle equivalence", c2_oracle_equivalence),
        ("W-orbit structure", c3_w_orbits),
        ("action well-definedness", c4_actions),
        ("weakly active roots", c5_weakly_active),
        ("polytope model", c6_polytope),
        ("closed-orbit census", c7_closed_orbits),
        ("Knop bound", c8_knop),
    ];
    let mut failed = 0;
    for (k, (label, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {}: PASS {label}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {label}: {why}", k + 1);
            }
        }
    }
    println!("acceptance: {}/{} passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
