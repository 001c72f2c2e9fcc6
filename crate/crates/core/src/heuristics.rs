//! Constructive and improvement heuristics.
//!
//! The constructive heuristics assign each free vertex a score and sort by
//! it. The LP-informed ones read a fractional solution as [`PairValues`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bnb::{search, SearchParams};
use crate::crossings::{crossing_matrix, order_cost_unchecked, CrossingMatrix};
use crate::lp::{PairValues, INT_TOL};
use crate::model::{Instance, Ordering, Solution};
use crate::reduction::{extract_isolated, FixState};
use crate::{Error, Result};

/// Interval the probabilistic median draws its quantile from.
pub const PROBABILISTIC_MEDIAN_RANGE: (f64, f64) = (0.0957, 0.9043);

/// Sorts vertices by non-decreasing score, ties by ascending index.
pub fn order_by_scores(scores: &[f64]) -> Result<Ordering> {
    if let Some(vertex) = scores.iter().position(|s| !s.is_finite()) {
        return Err(Error::NonFiniteScore { vertex });
    }
    let mut perm: Vec<usize> = (0..scores.len()).collect();
    perm.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]).then(a.cmp(&b)));
    Ordering::new(perm)
}

fn scores_by(instance: &Instance, score: impl Fn(&[usize]) -> f64) -> Result<Vec<f64>> {
    (0..instance.n1())
        .map(|b| {
            let nbrs = instance.neighbors(b);
            if nbrs.is_empty() {
                Err(Error::IsolatedVertex(b))
            } else {
                Ok(score(nbrs))
            }
        })
        .collect()
}

/// Mean neighbor position.
pub fn barycenter(instance: &Instance) -> Result<Ordering> {
    let scores = scores_by(instance, |n| {
        n.iter().sum::<usize>() as f64 / n.len() as f64
    })?;
    order_by_scores(&scores)
}

/// Median of a sorted, nonempty neighbor list; the mean of the two middle
/// entries for even degree.
pub fn median_score(nbrs: &[usize]) -> f64 {
    let d = nbrs.len();
    if d % 2 == 1 {
        nbrs[(d - 1) / 2] as f64
    } else {
        (nbrs[d / 2 - 1] + nbrs[d / 2]) as f64 / 2.0
    }
}

pub fn median(instance: &Instance) -> Result<Ordering> {
    order_by_scores(&scores_by(instance, median_score)?)
}

/// Neighbor at quantile `x`: `w[floor(x * d)]`.
pub fn probabilistic_median_score(nbrs: &[usize], x: f64) -> f64 {
    let idx = ((x * nbrs.len() as f64).floor() as usize).min(nbrs.len() - 1);
    nbrs[idx] as f64
}

/// Median variant with an independent uniform quantile per vertex.
pub fn probabilistic_median(instance: &Instance, seed: u64) -> Result<Ordering> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    probabilistic_median_with(instance, &mut rng)
}

fn probabilistic_median_with(instance: &Instance, rng: &mut impl Rng) -> Result<Ordering> {
    let (lo, hi) = PROBABILISTIC_MEDIAN_RANGE;
    let mut scores = Vec::with_capacity(instance.n1());
    for b in 0..instance.n1() {
        let nbrs = instance.neighbors(b);
        if nbrs.is_empty() {
            return Err(Error::IsolatedVertex(b));
        }
        let x = rng.random_range(lo..=hi);
        scores.push(probabilistic_median_score(nbrs, x));
    }
    order_by_scores(&scores)
}

/// Orders by the expected number of vertices placed before each vertex.
pub fn sort_heuristic(values: &PairValues) -> Result<Ordering> {
    let n = values.n1();
    let mut scores = vec![0.0; n];
    for u in 0..n {
        for v in (u + 1)..n {
            let x = values.get(u, v);
            if !(-INT_TOL..=1.0 + INT_TOL).contains(&x) {
                return Err(Error::ValueOutOfRange { u, v, value: x });
            }
            scores[v] += x;
            scores[u] += 1.0 - x;
        }
    }
    order_by_scores(&scores)
}

/// Rounds every pair to a Bernoulli outcome, orders vertices by descending
/// number of pairs won (ties by index) and keeps the best of `trials`.
pub fn randomized_rounding(
    values: &PairValues,
    matrix: &CrossingMatrix,
    seed: u64,
    trials: usize,
) -> Solution {
    let n = values.n1();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<Solution> = None;
    for _ in 0..trials.max(1) {
        let mut wins = vec![0usize; n];
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.random_bool(values.get(u, v).clamp(0.0, 1.0)) {
                    wins[u] += 1;
                } else {
                    wins[v] += 1;
                }
            }
        }
        let mut perm: Vec<usize> = (0..n).collect();
        perm.sort_by(|&a, &b| wins[b].cmp(&wins[a]).then(a.cmp(&b)));
        let cost = order_cost_unchecked(matrix, &perm);
        if best.as_ref().is_none_or(|b| cost < b.crossings) {
            best = Some(Solution {
                ordering: Ordering::new(perm).expect("sorted indices"),
                crossings: cost,
            });
        }
    }
    best.expect("at least one trial")
}

/// Budget of a relaxation-induced neighborhood search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RinsLimits {
    pub node_limit: u64,
    /// Skip the sub-search when more than this many pairs stay free.
    pub max_free_pairs: usize,
}

impl Default for RinsLimits {
    fn default() -> Self {
        Self {
            node_limit: 10_000,
            max_free_pairs: usize::MAX,
        }
    }
}

/// Fixes every pair on which the relaxation is integral and agrees with the
/// incumbent, then searches the remaining pairs within the node budget.
/// Never returns anything worse than `incumbent`.
pub fn rins(
    values: &PairValues,
    incumbent: &Solution,
    matrix: &CrossingMatrix,
    limits: RinsLimits,
) -> Result<Solution> {
    let n = matrix.n1();
    let pos = incumbent.ordering.positions();
    let mut state = FixState::new(matrix);
    for u in 0..n {
        for v in (u + 1)..n {
            let x = values.get(u, v);
            let u_first = pos[u] < pos[v];
            if (u_first && x >= 1.0 - INT_TOL) || (!u_first && x <= INT_TOL) {
                let (a, b) = if u_first { (u, v) } else { (v, u) };
                state.fix(a, b, matrix)?;
            }
        }
    }
    state.transitive_close(matrix)?;
    let total = n * n.saturating_sub(1) / 2;
    let free = total - state.fixed_pairs();
    if free == 0 || free > limits.max_free_pairs {
        return Ok(incumbent.clone());
    }
    let params = SearchParams {
        node_limit: Some(limits.node_limit),
        use_rins: false,
        ..SearchParams::default()
    };
    let out = search(matrix, state, incumbent.clone(), &params)?;
    Ok(if out.best.crossings < incumbent.crossings {
        out.best
    } else {
        incumbent.clone()
    })
}

/// Moves single vertices to their best position until no move improves.
pub fn shift_improve(ordering: &Ordering, matrix: &CrossingMatrix) -> Solution {
    let mut perm = ordering.as_slice().to_vec();
    let n = perm.len();
    loop {
        let mut improved = false;
        let sweep = perm.clone();
        for &v in &sweep {
            let i = perm.iter().position(|&x| x == v).expect("vertex present");
            let (mut best_delta, mut best_pos) = (0i64, i);
            let mut acc = 0i64;
            for k in (0..i).rev() {
                let t = perm[k];
                acc += matrix.get(v, t) as i64 - matrix.get(t, v) as i64;
                if acc < best_delta {
                    (best_delta, best_pos) = (acc, k);
                }
            }
            acc = 0;
            for (k, &t) in perm.iter().enumerate().skip(i + 1) {
                acc += matrix.get(t, v) as i64 - matrix.get(v, t) as i64;
                if acc < best_delta {
                    (best_delta, best_pos) = (acc, k);
                }
            }
            if best_pos != i {
                perm.remove(i);
                perm.insert(best_pos, v);
                improved = true;
            }
        }
        if !improved || n < 2 {
            break;
        }
    }
    let crossings = order_cost_unchecked(matrix, &perm);
    Solution {
        ordering: Ordering::new(perm).expect("moves preserve the permutation"),
        crossings,
    }
}

/// Default node budget per window solve.
pub const LOCAL_SEARCH_NODE_LIMIT: u64 = 10_000;

/// Optimizes over all pairs closer than `w` positions, keeping farther pairs
/// in their current relative order, and repeats until no window solve
/// improves.
pub fn local_search_improve(
    ordering: &Ordering,
    matrix: &CrossingMatrix,
    w: usize,
) -> Result<Solution> {
    local_search_improve_with(ordering, matrix, w, LOCAL_SEARCH_NODE_LIMIT)
}

pub fn local_search_improve_with(
    ordering: &Ordering,
    matrix: &CrossingMatrix,
    w: usize,
    node_limit: u64,
) -> Result<Solution> {
    let w = w.max(2);
    let mut current = Solution {
        crossings: order_cost_unchecked(matrix, ordering.as_slice()),
        ordering: ordering.clone(),
    };
    loop {
        let perm = current.ordering.as_slice();
        let mut state = FixState::new(matrix);
        for i in 0..perm.len() {
            for j in (i + w)..perm.len() {
                state.fix(perm[i], perm[j], matrix)?;
            }
        }
        state.transitive_close(matrix)?;
        if state.all_fixed() {
            return Ok(current);
        }
        let params = SearchParams {
            node_limit: Some(node_limit),
            use_rins: false,
            ..SearchParams::default()
        };
        let out = search(matrix, state, current.clone(), &params)?;
        if out.best.crossings < current.crossings {
            current = out.best;
        } else {
            return Ok(current);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeuristicConfig {
    pub seed: u64,
    /// Probabilistic-median draws.
    pub restarts: usize,
}

impl Default for HeuristicConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            restarts: 64,
        }
    }
}

/// Barycenter, median and `restarts` probabilistic medians, each followed by
/// [`shift_improve`]; returns the cheapest (earliest on ties).
pub fn heuristic_portfolio(
    instance: &Instance,
    matrix: &CrossingMatrix,
    config: &HeuristicConfig,
) -> Result<Solution> {
    if instance.n1() == 0 {
        return Ok(Solution::empty());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut starts = vec![barycenter(instance)?, median(instance)?];
    for _ in 0..config.restarts {
        starts.push(probabilistic_median_with(instance, &mut rng)?);
    }
    let mut best: Option<Solution> = None;
    for start in &starts {
        let s = shift_improve(start, matrix);
        if best.as_ref().is_none_or(|b| s.crossings < b.crossings) {
            best = Some(s);
        }
    }
    Ok(best.expect("at least two starts"))
}

/// Heuristic-only pipeline: isolated vertices leftmost, portfolio on the rest.
pub fn solve_heuristic(instance: &Instance, config: &HeuristicConfig) -> Result<Solution> {
    let iso = extract_isolated(instance);
    let matrix = crossing_matrix(&iso.core);
    let core = heuristic_portfolio(&iso.core, &matrix, config)?;
    Ok(Solution {
        ordering: iso.assemble(&core.ordering),
        crossings: core.crossings,
    })
}
