//! Exact linear algebra over ℚ and ℤ on tiny dense matrices.
//!
//! Everything here works on vectors of length ≤ rank (≤ 8 or so) and a
//! few dozen generators, so plain Gaussian elimination is plenty.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

/// Exact rational scalar.
pub type Q = Ratio<i128>;

pub fn q(n: i64) -> Q {
    Q::from_integer(n as i128)
}

pub fn to_q(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| q(x)).collect()
}

/// Formats a rational as `p/q` in lowest terms with `q > 0`.
pub fn fmt_q(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `p/q` or a bare integer.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, d)) => {
            let p: i128 = p.trim().parse().ok()?;
            let d: i128 = d.trim().parse().ok()?;
            if d == 0 {
                None
            } else {
                Some(Q::new(p, d))
            }
        }
        None => s.parse::<i128>().ok().map(Q::from_integer),
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
fn rref(m: &mut [Vec<Q>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x *= inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col];
                for c in 0..m[r].len() {
                    let t = m[row][c] * f;
                    m[r][c] -= t;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Rank of a family of vectors.
pub fn rank(vectors: &[Vec<Q>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let mut m = vectors.to_vec();
    let n = m[0].len();
    rref(&mut m, n).len()
}

pub fn rank_int(vectors: &[Vec<i64>]) -> usize {
    rank(&vectors.iter().map(|v| to_q(v)).collect::<Vec<_>>())
}

/// Column matrix (dim × n) from a list of column vectors.
fn columns_to_rows(columns: &[Vec<Q>], dim: usize) -> Vec<Vec<Q>> {
    (0..dim)
        .map(|i| columns.iter().map(|c| c[i]).collect())
        .collect()
}

/// Some solution `c` of `Σ c_j columns[j] = target`, free variables set to zero.
pub fn solve(columns: &[Vec<Q>], target: &[Q]) -> Option<Vec<Q>> {
    let dim = target.len();
    let n = columns.len();
    let mut m = columns_to_rows(columns, dim);
    for (i, row) in m.iter_mut().enumerate() {
        row.push(target[i]);
    }
    let pivots = rref(&mut m, n + 1);
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut x = vec![Q::zero(); n];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = m[r][n];
    }
    Some(x)
}

/// Basis of `{c : Σ c_j columns[j] = 0}`.
pub fn nullspace(columns: &[Vec<Q>], dim: usize) -> Vec<Vec<Q>> {
    let n = columns.len();
    let mut m = columns_to_rows(columns, dim);
    let pivots = rref(&mut m, n);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); n];
            v[f] = Q::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][f];
            }
            v
        })
        .collect()
}

/// Indices of a maximal linearly independent subfamily, chosen greedily.
pub fn independent_subset(vectors: &[Vec<Q>]) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut acc: Vec<Vec<Q>> = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        acc.push(v.clone());
        if rank(&acc) == acc.len() {
            chosen.push(i);
        } else {
            acc.pop();
        }
    }
    chosen
}

/// Is `target` a nonnegative rational combination of `gens`?
///
/// Carathéodory: if so, it is a nonnegative combination of a linearly
/// independent subfamily, so we try every independent subfamily and solve
/// exactly.
pub fn in_cone(gens: &[Vec<Q>], target: &[Q]) -> bool {
    if target.iter().all(|x| x.is_zero()) {
        return true;
    }
    if solve(gens, target).is_none() {
        return false;
    }
    let r = rank(gens);
    let mut subset = Vec::new();
    cone_search(gens, target, 0, r, &mut subset)
}

fn cone_search(gens: &[Vec<Q>], target: &[Q], start: usize, max: usize, subset: &mut Vec<usize>) -> bool {
    if !subset.is_empty() {
        let cols: Vec<Vec<Q>> = subset.iter().map(|&i| gens[i].clone()).collect();
        if rank(&cols) < cols.len() {
            return false;
        }
        if let Some(c) = solve(&cols, target) {
            if c.iter().all(|x| !x.is_negative()) {
                return true;
            }
        }
    }
    if subset.len() == max {
        return false;
    }
    for i in start..gens.len() {
        subset.push(i);
        let found = cone_search(gens, target, i + 1, max, subset);
        subset.pop();
        if found {
            return true;
        }
    }
    false
}

/// A sublattice of ℤⁿ stored as an integer row echelon basis.
#[derive(Clone, Debug)]
pub struct IntLattice {
    dim: usize,
    basis: Vec<Vec<i64>>,
    pivots: Vec<usize>,
}

impl IntLattice {
    pub fn new(dim: usize, generators: &[Vec<i64>]) -> Self {
        let mut rows: Vec<Vec<i64>> = generators.iter().filter(|g| g.iter().any(|&x| x != 0)).cloned().collect();
        let mut basis = Vec::new();
        let mut pivots = Vec::new();
        for col in 0..dim {
            // Euclid on column `col` across the remaining rows.
            loop {
                let nz: Vec<usize> = (0..rows.len()).filter(|&r| rows[r][col] != 0).collect();
                if nz.len() <= 1 {
                    break;
                }
                let p = *nz.iter().min_by_key(|&&r| rows[r][col].abs()).unwrap();
                for &r in &nz {
                    if r != p {
                        let f = Integer::div_floor(&rows[r][col], &rows[p][col]);
                        for c in 0..dim {
                            rows[r][c] -= f * rows[p][c];
                        }
                    }
                }
            }
            if let Some(p) = (0..rows.len()).find(|&r| rows[r][col] != 0) {
                let mut row = rows.swap_remove(p);
                if row[col] < 0 {
                    row.iter_mut().for_each(|x| *x = -*x);
                }
                basis.push(row);
                pivots.push(col);
            }
            rows.retain(|r| r.iter().any(|&x| x != 0));
        }
        IntLattice { dim, basis, pivots }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        assert_eq!(v.len(), self.dim);
        let mut v = v.to_vec();
        for (row, &col) in self.basis.iter().zip(&self.pivots) {
            if v[col] % row[col] != 0 {
                return false;
            }
            let f = v[col] / row[col];
            for c in 0..self.dim {
                v[c] -= f * row[c];
            }
        }
        v.iter().all(|&x| x == 0)
    }
}
