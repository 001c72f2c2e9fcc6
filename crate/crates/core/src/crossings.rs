//! Pairwise crossing numbers and crossing counts.
//!
//! For free vertices `u`, `v`, `c[u][v]` is the number of crossings between
//! edges of `u` and edges of `v` when `u` is placed left of `v`. An edge pair
//! `(a, u)`, `(b, v)` crosses exactly when `a > b`; edges sharing an
//! A-endpoint never cross.

use crate::model::{Instance, Ordering};
use crate::{Error, Result};

/// Directed crossing numbers of one pair plus the number of shared endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairCount {
    pub uv: u64,
    pub vu: u64,
    pub shared: u64,
}

/// Merges two sorted neighbor lists. For every `a` in `nu` the number of
/// strictly smaller entries of `nv` is accumulated as the merge pointer passes.
pub(crate) fn merge_count(nu: &[usize], nv: &[usize]) -> PairCount {
    let mut uv = 0u64;
    let mut shared = 0u64;
    let mut j = 0usize;
    for &a in nu {
        while j < nv.len() && nv[j] < a {
            j += 1;
        }
        uv += j as u64;
        if j < nv.len() && nv[j] == a {
            shared += 1;
        }
    }
    let vu = (nu.len() * nv.len()) as u64 - uv - shared;
    PairCount { uv, vu, shared }
}

/// Returns `(c_uv, c_vu)` for two distinct free vertices.
pub fn pair_crossings(instance: &Instance, u: usize, v: usize) -> Result<(u64, u64)> {
    if u == v {
        return Err(Error::SameVertex(u));
    }
    let pc = merge_count(instance.neighbors(u), instance.neighbors(v));
    Ok((pc.uv, pc.vu))
}

/// Dense `n1 x n1` table of crossing numbers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossingMatrix {
    n1: usize,
    c: Vec<u64>,
}

impl CrossingMatrix {
    /// Builds a matrix from explicit rows. Diagonal entries must be zero.
    pub fn from_rows(rows: &[Vec<u64>]) -> Result<Self> {
        let n1 = rows.len();
        let mut c = Vec::with_capacity(n1 * n1);
        for (u, row) in rows.iter().enumerate() {
            if row.len() != n1 {
                return Err(Error::DimensionMismatch {
                    expected: n1,
                    found: row.len(),
                });
            }
            if row[u] != 0 {
                return Err(Error::NonZeroDiagonal(u));
            }
            c.extend_from_slice(row);
        }
        Ok(Self { n1, c })
    }

    pub fn zeros(n1: usize) -> Self {
        Self {
            n1,
            c: vec![0; n1 * n1],
        }
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> u64 {
        self.c[u * self.n1 + v]
    }

    #[inline]
    pub(crate) fn set(&mut self, u: usize, v: usize, value: u64) {
        self.c[u * self.n1 + v] = value;
    }

    /// Matrix restricted to `members`, re-indexed in the given order.
    pub fn submatrix(&self, members: &[usize]) -> CrossingMatrix {
        let k = members.len();
        let mut c = Vec::with_capacity(k * k);
        for &u in members {
            for &v in members {
                c.push(self.get(u, v));
            }
        }
        CrossingMatrix { n1: k, c }
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.c
            .chunks(self.n1.max(1))
            .take(self.n1)
            .map(<[u64]>::to_vec)
            .collect()
    }
}

pub fn crossing_matrix(instance: &Instance) -> CrossingMatrix {
    let n1 = instance.n1();
    let mut matrix = CrossingMatrix::zeros(n1);
    for u in 0..n1 {
        for v in (u + 1)..n1 {
            let pc = merge_count(instance.neighbors(u), instance.neighbors(v));
            matrix.set(u, v, pc.uv);
            matrix.set(v, u, pc.vu);
        }
    }
    matrix
}

/// Binary-indexed counter over A-positions `1..=n`.
struct Fenwick {
    tree: Vec<u64>,
}

impl Fenwick {
    fn new(n: usize) -> Self {
        Self {
            tree: vec![0; n + 1],
        }
    }

    fn add(&mut self, mut i: usize) {
        while i < self.tree.len() {
            self.tree[i] += 1;
            i += i & i.wrapping_neg();
        }
    }

    /// Count of inserted positions `<= i`.
    fn prefix(&self, mut i: usize) -> u64 {
        let mut s = 0;
        while i > 0 {
            s += self.tree[i];
            i &= i - 1;
        }
        s
    }
}

/// Total crossings of `ordering` in `O(m log n0)` by inversion counting.
pub fn count_crossings(instance: &Instance, ordering: &Ordering) -> Result<u64> {
    let ordering = Ordering::for_size(ordering.as_slice().to_vec(), instance.n1())?;
    let mut fw = Fenwick::new(instance.n0());
    let mut inserted = 0u64;
    let mut total = 0u64;
    for b in ordering.iter() {
        let nbrs = instance.neighbors(b);
        for &a in nbrs {
            total += inserted - fw.prefix(a);
        }
        for &a in nbrs {
            fw.add(a);
        }
        inserted += nbrs.len() as u64;
    }
    Ok(total)
}

/// Sum of `c[u][v]` over all pairs with `u` left of `v`.
pub fn order_cost(matrix: &CrossingMatrix, ordering: &Ordering) -> Result<u64> {
    if ordering.len() != matrix.n1() {
        return Err(Error::DimensionMismatch {
            expected: matrix.n1(),
            found: ordering.len(),
        });
    }
    Ok(order_cost_unchecked(matrix, ordering.as_slice()))
}

pub(crate) fn order_cost_unchecked(matrix: &CrossingMatrix, perm: &[usize]) -> u64 {
    let mut total = 0;
    for (i, &u) in perm.iter().enumerate() {
        for &v in &perm[i + 1..] {
            total += matrix.get(u, v);
        }
    }
    total
}

/// `sum over u < v of min(c_uv, c_vu)`; no ordering costs less.
pub fn pair_lower_bound(matrix: &CrossingMatrix) -> u64 {
    let n1 = matrix.n1();
    let mut lb = 0;
    for u in 0..n1 {
        for v in (u + 1)..n1 {
            lb += matrix.get(u, v).min(matrix.get(v, u));
        }
    }
    lb
}
