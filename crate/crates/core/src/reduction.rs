//! Data reduction over a partial orientation of free-vertex pairs.
//!
//! Every rule here either keeps all optimal orderings (zero pairs, dominance,
//! the bound rule) or keeps at least one optimal ordering that is also
//! compatible with the other rules (isolated vertices first, instance split).

use crate::crossings::{pair_lower_bound, CrossingMatrix};
use crate::model::{Instance, Ordering};
use crate::{Error, Result};

/// Orientation of a queried pair `(u, v)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairStatus {
    Free,
    UBeforeV,
    VBeforeU,
}

/// Partial orientation of all free-vertex pairs.
///
/// Tracks `fixed_cost` (sum of `c` in the fixed direction over fixed pairs)
/// and `residual_lb` (sum of `min(c_uv, c_vu)` over free pairs), so that
/// [`FixState::lower_bound`] bounds every ordering consistent with the fixes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixState {
    n1: usize,
    // rel[u * n1 + v] = 1: u before v, -1: v before u, 0: free
    rel: Vec<i8>,
    fixed_cost: u64,
    residual_lb: u64,
    fixed_pairs: usize,
}

impl FixState {
    pub fn new(matrix: &CrossingMatrix) -> Self {
        let n1 = matrix.n1();
        Self {
            n1,
            rel: vec![0; n1 * n1],
            fixed_cost: 0,
            residual_lb: pair_lower_bound(matrix),
            fixed_pairs: 0,
        }
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn fixed_cost(&self) -> u64 {
        self.fixed_cost
    }

    pub fn residual_lb(&self) -> u64 {
        self.residual_lb
    }

    /// `fixed_cost + residual_lb`.
    pub fn lower_bound(&self) -> u64 {
        self.fixed_cost + self.residual_lb
    }

    pub fn fixed_pairs(&self) -> usize {
        self.fixed_pairs
    }

    pub fn all_fixed(&self) -> bool {
        self.fixed_pairs == self.n1 * self.n1.saturating_sub(1) / 2
    }

    pub fn status(&self, u: usize, v: usize) -> PairStatus {
        match self.rel[u * self.n1 + v] {
            1 => PairStatus::UBeforeV,
            -1 => PairStatus::VBeforeU,
            _ => PairStatus::Free,
        }
    }

    /// `Some(true)` if `u` is fixed before `v`, `Some(false)` if after.
    #[inline]
    pub fn before(&self, u: usize, v: usize) -> Option<bool> {
        match self.rel[u * self.n1 + v] {
            1 => Some(true),
            -1 => Some(false),
            _ => None,
        }
    }

    #[inline]
    pub fn is_free(&self, u: usize, v: usize) -> bool {
        self.rel[u * self.n1 + v] == 0
    }

    /// Fixes `u` before `v`. Returns whether the pair was free.
    pub fn fix(&mut self, u: usize, v: usize, matrix: &CrossingMatrix) -> Result<bool> {
        match self.rel[u * self.n1 + v] {
            1 => Ok(false),
            -1 => Err(Error::FixConflict {
                before: u,
                after: v,
            }),
            _ => {
                self.set(u, v, matrix);
                Ok(true)
            }
        }
    }

    fn set(&mut self, u: usize, v: usize, matrix: &CrossingMatrix) {
        let n = self.n1;
        self.rel[u * n + v] = 1;
        self.rel[v * n + u] = -1;
        let (cuv, cvu) = (matrix.get(u, v), matrix.get(v, u));
        self.fixed_cost += cuv;
        self.residual_lb -= cuv.min(cvu);
        self.fixed_pairs += 1;
    }

    /// Fixes `u` before `v` together with every pair implied through already
    /// fixed predecessors of `u` and successors of `v`. Keeps a transitively
    /// closed state closed.
    pub fn fix_and_close(&mut self, u: usize, v: usize, matrix: &CrossingMatrix) -> Result<usize> {
        match self.before(u, v) {
            Some(true) => return Ok(0),
            Some(false) => {
                return Err(Error::FixConflict {
                    before: u,
                    after: v,
                })
            }
            None => {}
        }
        let mut left = vec![u];
        left.extend((0..self.n1).filter(|&a| self.before(a, u) == Some(true)));
        let mut right = vec![v];
        right.extend((0..self.n1).filter(|&b| self.before(v, b) == Some(true)));
        for &a in &left {
            for &b in &right {
                if a == b || self.before(a, b) == Some(false) {
                    return Err(Error::FixConflict {
                        before: a,
                        after: b,
                    });
                }
            }
        }
        let mut added = 0;
        for &a in &left {
            for &b in &right {
                if self.is_free(a, b) {
                    self.set(a, b, matrix);
                    added += 1;
                }
            }
        }
        Ok(added)
    }

    /// Propagates `u < v` and `v < w` to `u < w` until nothing changes.
    /// A directed cycle among the fixes is reported as [`Error::CyclicFixes`]
    /// with its smallest vertex first.
    pub fn transitive_close(&mut self, matrix: &CrossingMatrix) -> Result<usize> {
        let n = self.n1;
        let mut added = 0;
        for k in 0..n {
            let preds: Vec<usize> = (0..n).filter(|&i| self.rel[i * n + k] == 1).collect();
            let succs: Vec<usize> = (0..n).filter(|&j| self.rel[k * n + j] == 1).collect();
            for &i in &preds {
                for &j in &succs {
                    match self.rel[i * n + j] {
                        1 => {}
                        0 if i != j => {
                            self.set(i, j, matrix);
                            added += 1;
                        }
                        _ => {
                            let (a, b, c) = rotate_min(i, k, j);
                            return Err(Error::CyclicFixes(a, b, c));
                        }
                    }
                }
            }
        }
        Ok(added)
    }

    /// Whether `perm` respects every fixed pair.
    pub fn is_consistent(&self, perm: &[usize]) -> bool {
        if perm.len() != self.n1 {
            return false;
        }
        for (i, &u) in perm.iter().enumerate() {
            for &v in &perm[i + 1..] {
                if self.before(u, v) == Some(false) {
                    return false;
                }
            }
        }
        true
    }

    /// Restriction to `members`, re-indexed in the given order. `matrix` must
    /// be the matching submatrix.
    pub fn project(&self, members: &[usize], matrix: &CrossingMatrix) -> FixState {
        let mut sub = FixState::new(matrix);
        for (i, &u) in members.iter().enumerate() {
            for (j, &v) in members.iter().enumerate() {
                if i < j && !self.is_free(u, v) {
                    if self.before(u, v) == Some(true) {
                        sub.set(i, j, matrix);
                    } else {
                        sub.set(j, i, matrix);
                    }
                }
            }
        }
        sub
    }
}

fn rotate_min(a: usize, b: usize, c: usize) -> (usize, usize, usize) {
    if a <= b && a <= c {
        (a, b, c)
    } else if b <= a && b <= c {
        (b, c, a)
    } else {
        (c, a, b)
    }
}

/// Instance without its degree-zero free vertices.
#[derive(Debug, Clone)]
pub struct IsolatedSplit {
    pub core: Instance,
    /// `core_members[i]` is the original index of core vertex `i`.
    pub core_members: Vec<usize>,
    /// Degree-zero vertices in ascending order.
    pub isolated: Vec<usize>,
}

impl IsolatedSplit {
    /// Isolated vertices first, then the core ordering mapped back.
    pub fn assemble(&self, core_order: &Ordering) -> Ordering {
        let mut perm = self.isolated.clone();
        perm.extend(core_order.iter().map(|i| self.core_members[i]));
        Ordering::new(perm).expect("isolated and core vertices partition the layer")
    }
}

pub fn extract_isolated(instance: &Instance) -> IsolatedSplit {
    let (isolated, core_members): (Vec<usize>, Vec<usize>) =
        (0..instance.n1()).partition(|&b| instance.degree(b) == 0);
    IsolatedSplit {
        core: instance.induced(&core_members),
        core_members,
        isolated,
    }
}

/// One independent block of the free layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Part {
    /// Original indices, ascending.
    pub members: Vec<usize>,
    pub instance: Instance,
}

/// Left-to-right decomposition of the free layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitResult {
    pub isolated: Vec<usize>,
    pub parts: Vec<Part>,
    /// A-position `q` separating part `i` from part `i + 1`.
    pub cuts: Vec<usize>,
}

impl SplitResult {
    pub fn n1(&self) -> usize {
        self.isolated.len() + self.parts.iter().map(|p| p.members.len()).sum::<usize>()
    }

    /// Concatenates isolated vertices and the parts' orderings.
    pub fn assemble(&self, part_orders: &[Ordering]) -> Result<Ordering> {
        if part_orders.len() != self.parts.len() {
            return Err(Error::DimensionMismatch {
                expected: self.parts.len(),
                found: part_orders.len(),
            });
        }
        let mut perm = self.isolated.clone();
        for (part, order) in self.parts.iter().zip(part_orders) {
            if order.len() != part.members.len() {
                return Err(Error::DimensionMismatch {
                    expected: part.members.len(),
                    found: order.len(),
                });
            }
            perm.extend(order.iter().map(|i| part.members[i]));
        }
        Ordering::new(perm)
    }
}

/// Splits the free layer at every A-position `q` such that each vertex has
/// all neighbors `<= q` or all neighbors `>= q`, with both sides nonempty.
/// Degree-zero vertices are set aside in [`SplitResult::isolated`].
pub fn split_instance(instance: &Instance) -> SplitResult {
    let iso = extract_isolated(instance);
    let mut by_right = iso.core_members.clone();
    // (l_v, r_v) = (leftmost, rightmost) neighbor
    let interval = |b: usize| {
        let n = instance.neighbors(b);
        (n[0], n[n.len() - 1])
    };
    by_right.sort_by_key(|&b| (interval(b).1, b));

    let k = by_right.len();
    let mut suffix_min_l = vec![usize::MAX; k + 1];
    for i in (0..k).rev() {
        suffix_min_l[i] = suffix_min_l[i + 1].min(interval(by_right[i]).0);
    }

    let mut parts = Vec::new();
    let mut cuts = Vec::new();
    let mut start = 0;
    for i in 0..k {
        let r = interval(by_right[i]).1;
        let at_cut = i + 1 < k && r < interval(by_right[i + 1]).1 && suffix_min_l[i + 1] >= r;
        if at_cut || i + 1 == k {
            let mut members = by_right[start..=i].to_vec();
            members.sort_unstable();
            parts.push(Part {
                instance: instance.induced(&members),
                members,
            });
            if at_cut {
                cuts.push(r);
            }
            start = i + 1;
        }
    }
    SplitResult {
        isolated: iso.isolated,
        parts,
        cuts,
    }
}

/// Fixes `u` before `v` whenever `c_uv = 0 < c_vu`.
pub fn fix_zero_pairs(matrix: &CrossingMatrix, state: &mut FixState) -> Result<usize> {
    let n = matrix.n1();
    let mut count = 0;
    for u in 0..n {
        for v in (u + 1)..n {
            if !state.is_free(u, v) {
                continue;
            }
            let (cuv, cvu) = (matrix.get(u, v), matrix.get(v, u));
            if cuv == 0 && cvu > 0 {
                state.fix(u, v, matrix)?;
                count += 1;
            } else if cvu == 0 && cuv > 0 {
                state.fix(v, u, matrix)?;
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Whether a probe edge from between `u` and `v` into any gap of the fixed
/// layer crosses at most as many edges with `u` left as with `v` left. For
/// equal degrees this is prefix-count domination, which reduces to comparing
/// the sorted neighbor lists elementwise.
pub(crate) fn dominates(nu: &[usize], nv: &[usize]) -> bool {
    nu.len() == nv.len() && nu.iter().zip(nv).all(|(a, b)| a <= b)
}

/// Fixes `u` before `v` for equal-degree pairs with `c_uv < c_vu` where `u`
/// dominates `v`.
pub fn dominance_fix(
    instance: &Instance,
    matrix: &CrossingMatrix,
    state: &mut FixState,
) -> Result<usize> {
    let n = matrix.n1();
    let mut count = 0;
    for u in 0..n {
        for v in (u + 1)..n {
            if !state.is_free(u, v) || instance.degree(u) != instance.degree(v) {
                continue;
            }
            let (cuv, cvu) = (matrix.get(u, v), matrix.get(v, u));
            let (nu, nv) = (instance.neighbors(u), instance.neighbors(v));
            if cuv < cvu && dominates(nu, nv) {
                state.fix(u, v, matrix)?;
                count += 1;
            } else if cvu < cuv && dominates(nv, nu) {
                state.fix(v, u, matrix)?;
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Fixes the cheap direction of every free pair whose expensive direction
/// alone would push the lower bound above `ub`.
///
/// Placing `u` before `v` costs at least `lb + c_uv - min(c_uv, c_vu)`. The
/// pair is fixed `v` before `u` when that exceeds `ub`, so every ordering of
/// cost at most `ub` survives. Fixing a cheap direction leaves `lb`
/// unchanged, so one pass uses a single gap.
pub fn bound_fix(matrix: &CrossingMatrix, state: &mut FixState, ub: u64) -> Result<usize> {
    let lb = state.lower_bound();
    if lb > ub {
        return Err(Error::BoundAboveIncumbent { lb, ub });
    }
    let gap = ub - lb;
    let n = matrix.n1();
    let mut count = 0;
    for u in 0..n {
        for v in (u + 1)..n {
            if !state.is_free(u, v) {
                continue;
            }
            let (cuv, cvu) = (matrix.get(u, v), matrix.get(v, u));
            let low = cuv.min(cvu);
            if cuv - low > gap {
                state.fix(v, u, matrix)?;
                count += 1;
            } else if cvu - low > gap {
                state.fix(u, v, matrix)?;
                count += 1;
            }
        }
    }
    Ok(count)
}

/// How often each rule fired.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ReductionCounts {
    pub isolated: usize,
    pub parts: usize,
    pub split_fixes: usize,
    pub zero_pairs: usize,
    pub dominance: usize,
    pub bound: usize,
    pub closure: usize,
}

#[derive(Debug, Clone)]
pub struct Reduced {
    /// Orientation over the whole free layer, including the pairs fixed by
    /// the split and by isolated vertices.
    pub state: FixState,
    pub split: SplitResult,
    pub counts: ReductionCounts,
}

impl Reduced {
    /// The fix state restricted to part `i`, with its submatrix.
    pub fn part_state(&self, i: usize, matrix: &CrossingMatrix) -> (CrossingMatrix, FixState) {
        let members = &self.split.parts[i].members;
        let sub = matrix.submatrix(members);
        let state = self.state.project(members, &sub);
        (sub, state)
    }
}

/// Runs all reduction rules. `ub` is the cost of a known ordering.
pub fn reduce(instance: &Instance, matrix: &CrossingMatrix, ub: u64) -> Result<Reduced> {
    let mut state = FixState::new(matrix);
    let split = split_instance(instance);
    let mut counts = ReductionCounts {
        isolated: split.isolated.len(),
        parts: split.parts.len(),
        ..Default::default()
    };

    // isolated vertices leftmost in ascending order, then the parts in order
    let mut blocks: Vec<&[usize]> = split.isolated.iter().map(std::slice::from_ref).collect();
    blocks.extend(split.parts.iter().map(|p| p.members.as_slice()));
    for (i, left) in blocks.iter().enumerate() {
        for right in &blocks[i + 1..] {
            for &a in *left {
                for &b in *right {
                    if state.fix(a, b, matrix)? {
                        counts.split_fixes += 1;
                    }
                }
            }
        }
    }

    loop {
        let zero = fix_zero_pairs(matrix, &mut state)?;
        let dom = dominance_fix(instance, matrix, &mut state)?;
        let bound = bound_fix(matrix, &mut state, ub)?;
        let closed = state.transitive_close(matrix)?;
        counts.zero_pairs += zero;
        counts.dominance += dom;
        counts.bound += bound;
        counts.closure += closed;
        if zero + dom + bound + closed == 0 {
            break;
        }
    }
    Ok(Reduced {
        state,
        split,
        counts,
    })
}
