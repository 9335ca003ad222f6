//! Root systems, Weyl groups, Demazure products and closed subsystems.
//!
//! Conventions: roots are integer coefficient vectors over the simple roots,
//! `cartan[i][j] = ⟨α_j, α_i∨⟩`, and simple roots are numbered as in Bourbaki
//! (B_n: α_n short; C_n: α_n long; F4: α1, α2 long; G2: α1 short).

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::RootSet;
use crate::linalg::{rank_int, IntLattice};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootSystemError {
    #[error("unknown Cartan type token `{0}`")]
    UnknownType(String),
    #[error("{0}")]
    InvalidRank(String),
    #[error("{what} {actual} exceeds the budget of {limit}")]
    Budget { what: &'static str, actual: u128, limit: u128 },
    #[error("{0} is not a root")]
    NotARoot(Root),
    #[error("bad simple-root index {0}")]
    BadIndex(usize),
}

/// Size limits for enumeration.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_positive_roots: usize,
    pub max_weyl: u128,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_positive_roots: 40, max_weyl: 51840 }
    }
}

/// A root (or any vector of the root lattice) in simple-root coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Root(pub Vec<i64>);

impl Root {
    pub fn simple(rank: usize, i: usize) -> Root {
        let mut v = vec![0; rank];
        v[i] = 1;
        Root(v)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// All coefficients ≥ 0 and not zero.
    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|&c| c >= 0) && !self.is_zero()
    }

    pub fn is_nonneg(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i] != 0).collect()
    }

    pub fn neg(&self) -> Root {
        Root(self.0.iter().map(|c| -c).collect())
    }

    pub fn add(&self, o: &Root) -> Root {
        Root(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &Root) -> Root {
        Root(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> Root {
        Root(self.0.iter().map(|c| k * c).collect())
    }

    /// Dominance order: `self ≤ other` iff `other − self ∈ ℕΔ`.
    pub fn leq(&self, other: &Root) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Strict dominance.
    pub fn less(&self, other: &Root) -> bool {
        self.leq(other) && self != other
    }

    /// Whether the index `i` is the only nonzero coordinate and equals 1.
    pub fn simple_index(&self) -> Option<usize> {
        let s = self.support();
        (s.len() == 1 && self.0[s[0]] == 1).then(|| s[0])
    }
}

impl fmt::Debug for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// Image of a positive root under a Weyl element: `±positive_roots[index]`.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Signed {
    pub index: u16,
    pub negative: bool,
}

impl Signed {
    pub fn pos(index: usize) -> Signed {
        Signed { index: index as u16, negative: false }
    }

    pub fn flip(self) -> Signed {
        Signed { negative: !self.negative, ..self }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub letter: char,
    pub rank: usize,
    pub offset: usize,
}

/// Order of the Weyl group of an irreducible type.
pub fn weyl_order_of_type(letter: char, n: usize) -> u128 {
    let fact = |k: usize| (1..=k as u128).product::<u128>();
    match letter {
        'A' => fact(n + 1),
        'B' | 'C' => (1u128 << n) * fact(n),
        'D' => (1u128 << (n - 1)) * fact(n),
        'E' => match n {
            6 => 51840,
            7 => 2903040,
            _ => 696729600,
        },
        'F' => 1152,
        'G' => 12,
        _ => unreachable!(),
    }
}

fn positive_root_count(letter: char, n: usize) -> usize {
    match letter {
        'A' => n * (n + 1) / 2,
        'B' | 'C' => n * n,
        'D' => n * (n - 1),
        'E' => match n {
            6 => 36,
            7 => 63,
            _ => 120,
        },
        'F' => 24,
        'G' => 6,
        _ => unreachable!(),
    }
}

fn parse_label(label: &str) -> Result<Vec<(char, usize)>, RootSystemError> {
    let mut out = Vec::new();
    for tok in label.trim().split('x') {
        let mut chars = tok.chars();
        let letter = chars.next().ok_or_else(|| RootSystemError::UnknownType(tok.to_string()))?;
        let digits = chars.as_str();
        if !"ABCDEFG".contains(letter) || digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(RootSystemError::UnknownType(tok.to_string()));
        }
        let n: usize = digits.parse().map_err(|_| RootSystemError::UnknownType(tok.to_string()))?;
        let ok = match letter {
            'A' => n >= 1,
            'B' | 'C' => n >= 2,
            'D' => n >= 4,
            'E' => (6..=8).contains(&n),
            'F' => n == 4,
            'G' => n == 2,
            _ => false,
        };
        if !ok {
            return Err(RootSystemError::InvalidRank(format!("no irreducible type {letter}{n}")));
        }
        out.push((letter, n));
    }
    Ok(out)
}

/// Cartan matrix of an irreducible type, Bourbaki numbering.
fn irreducible_cartan(letter: char, n: usize) -> Vec<Vec<i64>> {
    let mut a = vec![vec![0i64; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut link = |i: usize, j: usize, aij: i64, aji: i64| {
        a[i][j] = aij;
        a[j][i] = aji;
    };
    match letter {
        'A' => (0..n - 1).for_each(|i| link(i, i + 1, -1, -1)),
        'B' => {
            (0..n - 2).for_each(|i| link(i, i + 1, -1, -1));
            link(n - 2, n - 1, -1, -2);
        }
        'C' => {
            (0..n - 2).for_each(|i| link(i, i + 1, -1, -1));
            link(n - 2, n - 1, -2, -1);
        }
        'D' => {
            (0..n - 2).for_each(|i| link(i, i + 1, -1, -1));
            link(n - 3, n - 1, -1, -1);
        }
        'E' => {
            link(0, 2, -1, -1);
            link(1, 3, -1, -1);
            (2..n - 1).for_each(|i| link(i, i + 1, -1, -1));
        }
        'F' => {
            link(0, 1, -1, -1);
            link(1, 2, -1, -2);
            link(2, 3, -1, -1);
        }
        'G' => link(0, 1, -3, -1),
        _ => unreachable!(),
    }
    a
}

/// Symmetrizer `d` with `d_i a_ij = d_j a_ji`, normalized so that the
/// shortest root in each component has `d = 1`.
fn symmetrizer(cartan: &[Vec<i64>]) -> Vec<i64> {
    let n = cartan.len();
    // Work with rationals as (num, den) scaled later; lengths ratios are 1, 2, 3.
    let mut d: Vec<Option<(i64, i64)>> = vec![None; n];
    for start in 0..n {
        if d[start].is_some() {
            continue;
        }
        d[start] = Some((1, 1));
        let mut comp = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            let (p, q) = d[i].unwrap();
            for j in 0..n {
                if j != i && cartan[i][j] != 0 && d[j].is_none() {
                    // d_j = d_i a_ij / a_ji
                    let (np, nq) = (p * cartan[i][j], q * cartan[j][i]);
                    let g = num_integer::gcd(np, nq);
                    d[j] = Some((np / g, nq / g));
                    comp.push(j);
                    queue.push_back(j);
                }
            }
        }
        // Rescale the component to integers with minimum 1.
        let lcm = comp.iter().fold(1i64, |acc, &i| num_integer::lcm(acc, d[i].unwrap().1));
        let vals: Vec<i64> = comp.iter().map(|&i| d[i].unwrap().0 * lcm / d[i].unwrap().1).collect();
        let g = vals.iter().fold(0i64, |acc, &v| num_integer::gcd(acc, v));
        for (k, &i) in comp.iter().enumerate() {
            d[i] = Some((vals[k] / g, 1));
        }
    }
    d.into_iter().map(|x| x.unwrap().0).collect()
}

/// A finite crystallographic root system given by a Cartan type label.
#[derive(Clone, Debug)]
pub struct RootSystem {
    label: String,
    components: Vec<Component>,
    cartan: Vec<Vec<i64>>,
    sym: Vec<i64>,
    positive: Vec<Root>,
    lookup: HashMap<Vec<i64>, usize>,
    simple_perms: Vec<Vec<Signed>>,
}

/// Builds a root system with the default budget.
pub fn build_root_system(label: &str) -> Result<RootSystem, RootSystemError> {
    RootSystem::new(label, &Budget::default())
}

impl RootSystem {
    pub fn new(label: &str, budget: &Budget) -> Result<RootSystem, RootSystemError> {
        let types = parse_label(label)?;
        let rank: usize = types.iter().map(|t| t.1).sum();
        let expected: usize = types.iter().map(|&(l, n)| positive_root_count(l, n)).sum();
        if expected > budget.max_positive_roots {
            return Err(RootSystemError::Budget {
                what: "number of positive roots",
                actual: expected as u128,
                limit: budget.max_positive_roots as u128,
            });
        }
        if rank > 64 {
            return Err(RootSystemError::InvalidRank("rank too large".into()));
        }
        let mut cartan = vec![vec![0i64; rank]; rank];
        let mut components = Vec::new();
        let mut offset = 0;
        for &(letter, n) in &types {
            let a = irreducible_cartan(letter, n);
            for i in 0..n {
                for j in 0..n {
                    cartan[offset + i][offset + j] = a[i][j];
                }
            }
            components.push(Component { letter, rank: n, offset });
            offset += n;
        }
        let sym = symmetrizer(&cartan);
        let positive = generate_positive_roots(&cartan);
        debug_assert_eq!(positive.len(), expected);
        let lookup = positive.iter().enumerate().map(|(i, r)| (r.0.clone(), i)).collect();
        let label = types.iter().map(|(l, n)| format!("{l}{n}")).collect::<Vec<_>>().join("x");
        let mut rs = RootSystem { label, components, cartan, sym, positive, lookup, simple_perms: Vec::new() };
        rs.simple_perms = (0..rank)
            .map(|i| {
                (0..rs.positive.len())
                    .map(|k| rs.signed(&rs.simple_reflect(&rs.positive[k], i)).expect("closed under reflections"))
                    .collect()
            })
            .collect();
        Ok(rs)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive
    }

    pub fn num_positive(&self) -> usize {
        self.positive.len()
    }

    pub fn simple_roots(&self) -> &[Root] {
        &self.positive[..self.rank()]
    }

    pub fn root(&self, i: usize) -> &Root {
        &self.positive[i]
    }

    pub fn signed_root(&self, s: Signed) -> Root {
        let r = &self.positive[s.index as usize];
        if s.negative {
            r.neg()
        } else {
            r.clone()
        }
    }

    pub fn index_of(&self, coeffs: &[i64]) -> Option<usize> {
        self.lookup.get(coeffs).copied()
    }

    pub fn is_root(&self, r: &Root) -> bool {
        self.signed(r).is_some()
    }

    /// Locates `±β` among the positive roots.
    pub fn signed(&self, r: &Root) -> Option<Signed> {
        if r.0.len() != self.rank() {
            return None;
        }
        if let Some(&i) = self.lookup.get(&r.0) {
            return Some(Signed::pos(i));
        }
        self.lookup.get(&r.neg().0).map(|&i| Signed { index: i as u16, negative: true })
    }

    /// Index set of roots as a bitset; panics on non-positive-roots.
    pub fn root_set<'a>(&self, roots: impl IntoIterator<Item = &'a Root>) -> RootSet {
        roots.into_iter().map(|r| self.index_of(&r.0).expect("positive root")).collect()
    }

    pub fn roots_of(&self, set: RootSet) -> Vec<Root> {
        set.iter().map(|i| self.positive[i].clone()).collect()
    }

    /// `⟨β, α_i∨⟩`.
    pub fn pairing_simple(&self, beta: &Root, i: usize) -> i64 {
        beta.0.iter().zip(&self.cartan[i]).map(|(b, a)| b * a).sum()
    }

    /// Symmetrized invariant form, short roots of each component have `(α, α) = 2`.
    pub fn form(&self, x: &Root, y: &Root) -> i64 {
        let mut s = 0;
        for i in 0..self.rank() {
            if x.0[i] == 0 {
                continue;
            }
            for j in 0..self.rank() {
                s += x.0[i] * y.0[j] * self.sym[i] * self.cartan[i][j];
            }
        }
        s
    }

    /// `⟨β, γ∨⟩ = 2(β, γ)/(γ, γ)` for a root `γ`.
    pub fn pairing(&self, beta: &Root, gamma: &Root) -> i64 {
        let num = 2 * self.form(beta, gamma);
        let den = self.form(gamma, gamma);
        debug_assert_eq!(num % den, 0);
        num / den
    }

    pub fn simple_reflect(&self, beta: &Root, i: usize) -> Root {
        let c = self.pairing_simple(beta, i);
        let mut v = beta.0.clone();
        v[i] -= c;
        Root(v)
    }

    /// Reflection in an arbitrary root `γ`.
    pub fn reflect(&self, beta: &Root, gamma: &Root) -> Root {
        beta.sub(&gamma.scale(self.pairing(beta, gamma)))
    }

    /// Root length squared relative to the shortest root of its component (1, 2 or 3).
    pub fn length_class(&self, r: &Root) -> i64 {
        self.form(r, r) / 2
    }

    pub fn is_long(&self, r: &Root) -> bool {
        let comp = self.component_of(r);
        let max = (comp.offset..comp.offset + comp.rank).map(|i| self.sym[i]).max().unwrap();
        max > 1 && self.length_class(r) == max
    }

    fn component_of(&self, r: &Root) -> Component {
        let i = r.support()[0];
        *self.components.iter().find(|c| i >= c.offset && i < c.offset + c.rank).unwrap()
    }

    pub fn symmetrizer(&self) -> &[i64] {
        &self.sym
    }

    /// Whether a set of simple-root indices is connected in the Dynkin diagram.
    pub fn is_connected(&self, nodes: &[usize]) -> bool {
        if nodes.is_empty() {
            return false;
        }
        let set: HashSet<usize> = nodes.iter().copied().collect();
        let mut seen = HashSet::from([nodes[0]]);
        let mut stack = vec![nodes[0]];
        while let Some(i) = stack.pop() {
            for &j in nodes {
                if self.cartan[i][j] != 0 && set.contains(&j) && seen.insert(j) {
                    stack.push(j);
                }
            }
        }
        seen.len() == set.len()
    }

    /// The expected order of the Weyl group.
    pub fn weyl_order(&self) -> u128 {
        self.components.iter().map(|c| weyl_order_of_type(c.letter, c.rank)).product()
    }

    pub fn simple_perm(&self, i: usize) -> &[Signed] {
        &self.simple_perms[i]
    }

    /// `ρ` in simple-root coordinates times two, i.e. the sum of positive roots.
    pub fn two_rho(&self) -> Root {
        self.positive.iter().fold(Root(vec![0; self.rank()]), |acc, r| acc.add(r))
    }

    /// Converts a root-lattice vector to fundamental-weight coordinates.
    pub fn to_weight(&self, r: &Root) -> Vec<i64> {
        (0..self.rank()).map(|i| self.pairing_simple(r, i)).collect()
    }

    /// `ℤS ∩ Φ` with its basis, Weyl-group order and a parabolicity flag.
    pub fn subsystem_closure(&self, s: &[Root]) -> Result<ClosedSubsystem, RootSystemError> {
        let mut set = RootSet::EMPTY;
        for r in s {
            let i = self.index_of(&r.0).ok_or_else(|| RootSystemError::NotARoot(r.clone()))?;
            set.insert(i);
        }
        Ok(self.closure_of(set))
    }

    pub fn closure_of(&self, s: RootSet) -> ClosedSubsystem {
        let gens: Vec<Vec<i64>> = s.iter().map(|i| self.positive[i].0.clone()).collect();
        let lattice = IntLattice::new(self.rank(), &gens);
        let rk = rank_int(&gens);
        let mut positive = RootSet::EMPTY;
        let mut rational = RootSet::EMPTY;
        for (i, r) in self.positive.iter().enumerate() {
            if lattice.contains(&r.0) {
                positive.insert(i);
            }
            let mut ext = gens.clone();
            ext.push(r.0.clone());
            if rank_int(&ext) == rk {
                rational.insert(i);
            }
        }
        let basis = indecomposables(self, positive);
        let weyl_order = reflection_orbit_size(self, &basis.iter().map(|&i| self.positive[i].clone()).collect::<Vec<_>>());
        ClosedSubsystem { positive, basis, weyl_order, parabolic: positive == rational, rank: rk }
    }

    /// Cartan type of the root system with the given simple system, as a
    /// sorted list of irreducible components (B2 and C2 both report `B2`).
    pub fn cartan_type_of(&self, simple: &[Root]) -> Vec<(char, usize)> {
        let n = simple.len();
        let a: Vec<Vec<i64>> =
            (0..n).map(|i| (0..n).map(|j| if i == j { 2 } else { self.pairing(&simple[j], &simple[i]) }).collect()).collect();
        let lens: Vec<i64> = simple.iter().map(|r| self.length_class(r)).collect();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut k = 0;
            while k < comp.len() {
                let i = comp[k];
                for j in 0..n {
                    if !seen[j] && a[i][j] != 0 {
                        seen[j] = true;
                        comp.push(j);
                    }
                }
                k += 1;
            }
            out.push(identify_connected(&a, &lens, &comp));
        }
        out.sort();
        out
    }
}

fn identify_connected(a: &[Vec<i64>], lens: &[i64], comp: &[usize]) -> (char, usize) {
    let n = comp.len();
    if n == 1 {
        return ('A', 1);
    }
    let bond = |i: usize, j: usize| a[i][j] * a[j][i];
    let mut max_bond = 0;
    for &i in comp {
        for &j in comp {
            if i != j {
                max_bond = max_bond.max(bond(i, j));
            }
        }
    }
    if max_bond == 3 {
        return ('G', 2);
    }
    if max_bond == 2 {
        let max_len = comp.iter().map(|&i| lens[i]).max().unwrap();
        let long = comp.iter().filter(|&&i| lens[i] == max_len).count();
        let short = n - long;
        return if n == 2 {
            ('B', 2)
        } else if n == 4 && long == 2 {
            ('F', 4)
        } else if short == 1 {
            ('B', n)
        } else {
            ('C', n)
        };
    }
    let degree = |i: usize| comp.iter().filter(|&&j| j != i && a[i][j] != 0).count();
    let Some(&branch) = comp.iter().find(|&&i| degree(i) == 3) else {
        return ('A', n);
    };
    // Arm lengths from the branch node.
    let mut arms: Vec<usize> = comp
        .iter()
        .filter(|&&j| j != branch && a[branch][j] != 0)
        .map(|&start| {
            let (mut prev, mut cur, mut len) = (branch, start, 1);
            loop {
                let next = comp.iter().find(|&&k| k != prev && k != cur && a[cur][k] != 0);
                match next {
                    Some(&k) => {
                        prev = cur;
                        cur = k;
                        len += 1;
                    }
                    None => break len,
                }
            }
        })
        .collect();
    arms.sort();
    match (arms[0], arms[1]) {
        (1, 1) => ('D', n),
        _ => ('E', n),
    }
}

/// Positive roots via root strings, sorted by height then by decreasing
/// coefficient vector (so that `α_1, …, α_n` come first in order).
fn generate_positive_roots(cartan: &[Vec<i64>]) -> Vec<Root> {
    let n = cartan.len();
    let pair = |b: &[i64], i: usize| -> i64 { b.iter().zip(&cartan[i]).map(|(x, a)| x * a).sum() };
    let mut all: HashSet<Vec<i64>> = HashSet::new();
    let mut layer: Vec<Vec<i64>> = (0..n).map(|i| Root::simple(n, i).0).collect();
    let mut out = Vec::new();
    while !layer.is_empty() {
        layer.sort_by(|a, b| b.cmp(a));
        layer.dedup();
        for r in &layer {
            all.insert(r.clone());
        }
        let mut next = Vec::new();
        for b in &layer {
            for i in 0..n {
                if b.iter().enumerate().all(|(j, &c)| c == (j == i) as i64) {
                    continue;
                }
                // p = how far the i-string goes down from b.
                let mut p = 0;
                let mut down = b.clone();
                loop {
                    down[i] -= 1;
                    if all.contains(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                let q = p - pair(b, i);
                if q > 0 {
                    let mut up = b.clone();
                    up[i] += 1;
                    next.push(up);
                }
            }
        }
        out.extend(layer.drain(..).map(Root));
        layer = next;
    }
    out
}

fn indecomposables(rs: &RootSystem, set: RootSet) -> Vec<usize> {
    let members: Vec<usize> = set.iter().collect();
    members
        .iter()
        .copied()
        .filter(|&k| {
            let r = &rs.positive[k];
            !members.iter().any(|&a| {
                let diff = r.sub(&rs.positive[a]);
                diff.is_positive() && rs.index_of(&diff.0).is_some_and(|b| set.contains(b))
            })
        })
        .collect()
}

/// Size of the orbit of the regular vector 2ρ under the group generated by
/// reflections in `gens`, i.e. the order of that reflection group.
fn reflection_orbit_size(rs: &RootSystem, gens: &[Root]) -> u128 {
    let start = rs.two_rho();
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = rs.reflect(&x, g);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen.len() as u128
}

/// `Φ_S = ℤS ∩ Φ` together with derived data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedSubsystem {
    /// `Φ⁺_S` as positive-root indices.
    pub positive: RootSet,
    /// Indices of the indecomposable elements of `Φ⁺_S`.
    pub basis: Vec<usize>,
    pub weyl_order: u128,
    /// Whether `Φ_S = ℚS ∩ Φ`.
    pub parabolic: bool,
    pub rank: usize,
}

/// A Weyl group element stored by its action on positive roots.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct WeylElement {
    perm: Vec<Signed>,
    length: usize,
    word: Vec<u8>,
}

impl WeylElement {
    pub fn root_perm(&self) -> &[Signed] {
        &self.perm
    }

    pub fn length(&self) -> usize {
        self.length
    }

    /// Lexicographically least reduced word, 0-based simple indices,
    /// read left to right as a product `s_{i1} s_{i2} ⋯`.
    pub fn canonical_word(&self) -> &[u8] {
        &self.word
    }

    /// Word with 1-based indices, `e` for the identity.
    pub fn word_string(&self) -> String {
        word_string(&self.word)
    }

    pub fn act_signed(&self, s: Signed) -> Signed {
        let t = self.perm[s.index as usize];
        if s.negative {
            t.flip()
        } else {
            t
        }
    }

    /// `w(β)` for `β ∈ ±Φ⁺`.
    pub fn act(&self, rs: &RootSystem, beta: &Root) -> Result<Root, RootSystemError> {
        let s = rs.signed(beta).ok_or_else(|| RootSystemError::NotARoot(beta.clone()))?;
        Ok(rs.signed_root(self.act_signed(s)))
    }

    /// `{α ∈ Φ⁺ : w(α) < 0}`.
    pub fn inversion_set(&self) -> RootSet {
        self.perm.iter().enumerate().filter(|(_, s)| s.negative).map(|(k, _)| k).collect()
    }
}

pub fn word_string(word: &[u8]) -> String {
    if word.is_empty() {
        "e".to_string()
    } else {
        word.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",")
    }
}

/// Parses `e` or a comma-separated list of 1-based simple indices.
pub fn parse_word(s: &str, rank: usize) -> Result<Vec<usize>, RootSystemError> {
    let s = s.trim();
    if s == "e" || s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            let i: usize = t.trim().parse().map_err(|_| RootSystemError::BadIndex(0))?;
            if i == 0 || i > rank {
                Err(RootSystemError::BadIndex(i))
            } else {
                Ok(i - 1)
            }
        })
        .collect()
}

fn compose(a: &[Signed], b: &[Signed]) -> Vec<Signed> {
    b.iter()
        .map(|&s| {
            let t = a[s.index as usize];
            if s.negative {
                t.flip()
            } else {
                t
            }
        })
        .collect()
}

/// The full Weyl group with multiplication tables, indexed in canonical
/// order (by length, then canonical word).
#[derive(Debug)]
pub struct WeylGroup {
    rs: Arc<RootSystem>,
    elements: Vec<WeylElement>,
    lookup: HashMap<Vec<Signed>, usize>,
    left: Vec<u32>,
    right: Vec<u32>,
    inverse: Vec<u32>,
    inversions: Vec<RootSet>,
    reflections: Vec<u32>,
}

/// All elements of `W` in canonical order.
pub fn enumerate_weyl(rs: &RootSystem) -> Result<Vec<WeylElement>, RootSystemError> {
    Ok(WeylGroup::new(Arc::new(rs.clone()), &Budget::default())?.elements)
}

impl WeylGroup {
    pub fn new(rs: Arc<RootSystem>, budget: &Budget) -> Result<WeylGroup, RootSystemError> {
        let order = rs.weyl_order();
        if order > budget.max_weyl {
            return Err(RootSystemError::Budget { what: "Weyl group order", actual: order, limit: budget.max_weyl });
        }
        let n = rs.rank();
        let np = rs.num_positive();
        let id: Vec<Signed> = (0..np).map(Signed::pos).collect();
        let mut elements = vec![WeylElement { perm: id.clone(), length: 0, word: Vec::new() }];
        let mut lookup: HashMap<Vec<Signed>, usize> = HashMap::from([(id, 0)]);
        let mut layer_start = 0;
        loop {
            let layer_end = elements.len();
            let mut next: Vec<Vec<Signed>> = Vec::new();
            let mut seen: HashSet<Vec<Signed>> = HashSet::new();
            for w in layer_start..layer_end {
                for i in 0..n {
                    // Left multiplication s_i w is longer iff w⁻¹(α_i) > 0 iff the
                    // image of α_i under s_i ∘ w has one more inversion.
                    let p = compose(rs.simple_perm(i), &elements[w].perm);
                    let len = p.iter().filter(|s| s.negative).count();
                    if len > elements[w].length && !seen.contains(&p) {
                        seen.insert(p.clone());
                        next.push(p);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            let length = elements[layer_start].length + 1;
            let mut layer: Vec<WeylElement> = next
                .into_iter()
                .map(|p| {
                    // Smallest left descent i, then the word of s_i x (already known).
                    let (i, rest) = (0..n)
                        .find_map(|i| {
                            let q = compose(rs.simple_perm(i), &p);
                            lookup.get(&q).map(|&k| (i, k))
                        })
                        .expect("previous layer contains a shorter element");
                    let mut word = vec![i as u8];
                    word.extend_from_slice(&elements[rest].word);
                    WeylElement { perm: p, length, word }
                })
                .collect();
            layer.sort_by(|a, b| a.word.cmp(&b.word));
            layer_start = elements.len();
            for e in layer {
                lookup.insert(e.perm.clone(), elements.len());
                elements.push(e);
            }
        }
        debug_assert_eq!(elements.len() as u128, order);
        let size = elements.len();
        let mut left = vec![0u32; size * n];
        let mut right = vec![0u32; size * n];
        let mut inverse = vec![0u32; size];
        let mut inversions = Vec::with_capacity(size);
        for (w, e) in elements.iter().enumerate() {
            for i in 0..n {
                left[w * n + i] = lookup[&compose(rs.simple_perm(i), &e.perm)] as u32;
                right[w * n + i] = lookup[&compose(&e.perm, rs.simple_perm(i))] as u32;
            }
            let mut inv = vec![Signed::pos(0); np];
            for (k, s) in e.perm.iter().enumerate() {
                inv[s.index as usize] = Signed { index: k as u16, negative: s.negative };
            }
            inverse[w] = lookup[&inv] as u32;
            inversions.push(e.inversion_set());
        }
        let reflections = (0..np)
            .map(|r| {
                let gamma = rs.root(r).clone();
                let p: Vec<Signed> =
                    (0..np).map(|k| rs.signed(&rs.reflect(rs.root(k), &gamma)).expect("root")).collect();
                lookup[&p] as u32
            })
            .collect();
        Ok(WeylGroup { rs, elements, lookup, left, right, inverse, inversions, reflections })
    }

    pub fn root_system(&self) -> &Arc<RootSystem> {
        &self.rs
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn element(&self, w: usize) -> &WeylElement {
        &self.elements[w]
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn longest(&self) -> usize {
        self.elements.len() - 1
    }

    pub fn length(&self, w: usize) -> usize {
        self.elements[w].length
    }

    pub fn index_of(&self, e: &WeylElement) -> Option<usize> {
        self.lookup.get(&e.perm).copied()
    }

    /// `s_i w`.
    pub fn left_mul(&self, i: usize, w: usize) -> usize {
        self.left[w * self.rs.rank() + i] as usize
    }

    /// `w s_i`.
    pub fn right_mul(&self, w: usize, i: usize) -> usize {
        self.right[w * self.rs.rank() + i] as usize
    }

    pub fn inverse(&self, w: usize) -> usize {
        self.inverse[w] as usize
    }

    pub fn inversion_set(&self, w: usize) -> RootSet {
        self.inversions[w]
    }

    /// `v w`.
    pub fn mul(&self, v: usize, w: usize) -> usize {
        self.elements[w].word.iter().fold(v, |acc, &i| self.right_mul(acc, i as usize))
    }

    /// Product of a word `s_{i1} ⋯ s_{ik}` (0-based indices).
    pub fn from_word(&self, word: &[usize]) -> Result<usize, RootSystemError> {
        let n = self.rs.rank();
        word.iter().try_fold(0, |acc, &i| if i < n { Ok(self.right_mul(acc, i)) } else { Err(RootSystemError::BadIndex(i + 1)) })
    }

    /// Reflection in the positive root with index `r`.
    pub fn reflection(&self, r: usize) -> usize {
        self.reflections[r] as usize
    }

    pub fn act_signed(&self, w: usize, s: Signed) -> Signed {
        self.elements[w].act_signed(s)
    }

    pub fn act(&self, w: usize, beta: &Root) -> Result<Root, RootSystemError> {
        self.elements[w].act(&self.rs, beta)
    }

    /// `l(s_i w) < l(w)`.
    pub fn is_left_descent(&self, w: usize, i: usize) -> bool {
        self.length(self.left_mul(i, w)) < self.length(w)
    }

    /// Demazure product `v ∗ w`: fold a reduced word of `v` into `w` from the right.
    pub fn demazure(&self, v: usize, w: usize) -> usize {
        self.demazure_word(&self.elements[v].word.iter().map(|&i| i as usize).collect::<Vec<_>>(), w)
    }

    /// Demazure product of the word `s_{i1} ⋯ s_{ik}` with `w`.
    pub fn demazure_word(&self, word: &[usize], w: usize) -> usize {
        word.iter().rev().fold(w, |acc, &i| {
            let s = self.left_mul(i, acc);
            if self.length(s) > self.length(acc) {
                s
            } else {
                acc
            }
        })
    }

    /// Every reduced word of `w` (0-based), sorted.
    pub fn reduced_words(&self, w: usize) -> Vec<Vec<usize>> {
        if w == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for i in 0..self.rs.rank() {
            if self.is_left_descent(w, i) {
                for mut tail in self.reduced_words(self.left_mul(i, w)) {
                    tail.insert(0, i);
                    out.push(tail);
                }
            }
        }
        out.sort();
        out
    }

    pub fn parse_element(&self, s: &str) -> Result<usize, RootSystemError> {
        self.from_word(&parse_word(s, self.rs.rank())?)
    }
}

/// Demazure product `v ∗ w`.
pub fn demazure_product(group: &WeylGroup, v: usize, w: usize) -> usize {
    group.demazure(v, w)
}
