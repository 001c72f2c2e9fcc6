//! Depth-first branch-and-bound-and-cut.
//!
//! Every node replays its branching trail on the root [`FixState`], solves
//! the cutting-plane relaxation warm-started from the previous node, and
//! either prunes, records an integral solution or branches on the most
//! fractional pair.

use std::time::{Duration, Instant};

use crate::crossings::{crossing_matrix, order_cost_unchecked, CrossingMatrix};
use crate::heuristics::{
    heuristic_portfolio, local_search_improve, randomized_rounding, rins, shift_improve,
    sort_heuristic, HeuristicConfig, RinsLimits,
};
use crate::lp::{build_lp, solve_relaxation, PairValues, INT_TOL};
use crate::model::{Instance, Ordering, Solution};
use crate::reduction::{bound_fix, extract_isolated, reduce, FixState, ReductionCounts};
use crate::{Error, Result};

/// Randomized rounding runs at the root and then on every this many nodes.
pub const ROUNDING_PERIOD: u64 = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverConfig {
    pub seed: u64,
    /// Probabilistic-median restarts of the initial portfolio.
    pub restarts: usize,
    /// Local search window applied to the initial heuristic solution.
    pub window: Option<usize>,
    pub time_limit: Option<Duration>,
    pub rounding_trials: usize,
    pub rins_node_budget: u64,
    /// Stop after this many nodes per part.
    pub node_limit: Option<u64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            restarts: 64,
            window: Some(20),
            time_limit: None,
            rounding_trials: 32,
            rins_node_budget: 10_000,
            node_limit: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub best: Solution,
    pub proven_optimal: bool,
    pub nodes_explored: u64,
    pub cuts_added: u64,
    pub lp_solves: u64,
    pub wall_time: Duration,
    /// Valid lower bound on the optimum; equals `best.crossings` when
    /// `proven_optimal`.
    pub lower_bound: u64,
    /// Cost after the initial heuristics, before any search.
    pub heuristic_cost: u64,
    pub reductions: ReductionCounts,
}

/// A node of the search: the branching decisions leading to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchNode {
    /// `(a, b)`: `a` forced before `b`.
    pub trail: Vec<(usize, usize)>,
    /// Lower bound inherited from the parent.
    pub bound: u64,
}

impl SearchNode {
    pub fn depth(&self) -> usize {
        self.trail.len()
    }

    /// The node's fix state, or `None` when the trail contradicts `root`.
    pub fn replay(&self, root: &FixState, matrix: &CrossingMatrix) -> Result<Option<FixState>> {
        let mut state = root.clone();
        for &(a, b) in &self.trail {
            match state.fix_and_close(a, b, matrix) {
                Ok(_) => {}
                Err(Error::FixConflict { .. } | Error::CyclicFixes(..)) => return Ok(None),
                Err(e) => return Err(e),
            }
        }
        Ok(Some(state))
    }
}

/// Knobs of a single [`search`].
#[derive(Debug, Clone)]
pub struct SearchParams {
    pub node_limit: Option<u64>,
    pub deadline: Option<Instant>,
    pub seed: u64,
    pub rounding_trials: usize,
    /// Run RINS at the root and after every new incumbent.
    pub use_rins: bool,
    pub rins_limits: RinsLimits,
    /// Re-run the bound rule on the root state after every new incumbent.
    pub tighten_root: bool,
}

impl Default for SearchParams {
    fn default() -> Self {
        Self {
            node_limit: None,
            deadline: None,
            seed: 0,
            rounding_trials: 32,
            use_rins: true,
            rins_limits: RinsLimits::default(),
            tighten_root: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub best: Solution,
    pub proven_optimal: bool,
    pub lower_bound: u64,
    pub nodes: u64,
    pub cuts_added: u64,
    pub lp_solves: u64,
    /// Cost of every incumbent, starting with the initial one.
    pub incumbents: Vec<u64>,
}

/// Column closest to 0.5, ties by lowest index, ignoring integral columns.
pub fn choose_branch_variable(x: &[f64]) -> Result<usize> {
    let mut best: Option<(f64, usize)> = None;
    for (j, &v) in x.iter().enumerate() {
        if (v - v.round()).abs() <= INT_TOL {
            continue;
        }
        let d = (v - 0.5).abs();
        if best.is_none_or(|(bd, _)| d < bd - 1e-12) {
            best = Some((d, j));
        }
    }
    best.map(|(_, j)| j).ok_or(Error::NothingToBranch)
}

/// The ordering encoded by integral, transitive pair values.
pub fn decode_integral(values: &PairValues) -> Result<Ordering> {
    let n = values.n1();
    let mut preds = vec![0usize; n];
    for u in 0..n {
        for v in (u + 1)..n {
            let x = values.get(u, v);
            if (x - x.round()).abs() > INT_TOL {
                return Err(Error::InconsistentIntegral(u));
            }
            if x > 0.5 {
                preds[v] += 1;
            } else {
                preds[u] += 1;
            }
        }
    }
    let mut perm = vec![usize::MAX; n];
    for (v, &p) in preds.iter().enumerate() {
        if perm[p] != usize::MAX {
            return Err(Error::InconsistentIntegral(v));
        }
        perm[p] = v;
    }
    Ordering::new(perm)
}

fn state_values(state: &FixState) -> PairValues {
    PairValues::from_upper(state.n1(), |u, v| match state.before(u, v) {
        Some(true) => 1.0,
        _ => 0.0,
    })
}

struct Incumbent<'a> {
    matrix: &'a CrossingMatrix,
    best: Solution,
    history: Vec<u64>,
}

impl Incumbent<'_> {
    fn offer(&mut self, candidate: Solution) -> bool {
        if candidate.crossings < self.best.crossings {
            self.history.push(candidate.crossings);
            self.best = candidate;
            true
        } else {
            false
        }
    }

    fn offer_order(&mut self, ordering: Ordering) -> bool {
        let crossings = order_cost_unchecked(self.matrix, ordering.as_slice());
        self.offer(Solution {
            ordering,
            crossings,
        })
    }
}

/// Searches the orderings consistent with `root` for one cheaper than
/// `incumbent`. The incumbent itself need not be consistent with `root`.
pub fn search(
    matrix: &CrossingMatrix,
    root: FixState,
    incumbent: Solution,
    params: &SearchParams,
) -> Result<SearchOutcome> {
    let mut root = root;
    let mut inc = Incumbent {
        matrix,
        history: vec![incumbent.crossings],
        best: incumbent,
    };
    let mut model = build_lp(matrix, &root);
    let mut stack = vec![SearchNode {
        trail: Vec::new(),
        bound: root.lower_bound(),
    }];
    let (mut nodes, mut cuts_added) = (0u64, 0u64);
    let mut rins_pending = params.use_rins;
    let mut open_bound: Option<u64> = None;

    while let Some(node) = stack.pop() {
        if node.bound >= inc.best.crossings {
            continue;
        }
        let out_of_budget = params.node_limit.is_some_and(|l| nodes >= l)
            || params.deadline.is_some_and(|d| Instant::now() >= d);
        if out_of_budget {
            let lb = stack.iter().map(|n| n.bound).fold(node.bound, u64::min);
            open_bound = Some(lb);
            break;
        }
        let Some(state) = node.replay(&root, matrix)? else {
            continue;
        };
        nodes += 1;
        if state.lower_bound() >= inc.best.crossings {
            continue;
        }
        if state.all_fixed() {
            inc.offer_order(decode_integral(&state_values(&state))?);
            continue;
        }

        let relax = solve_relaxation(&mut model, &state)?;
        cuts_added += relax.cuts_added as u64;
        let Some(values) = relax.values else {
            continue;
        };
        let bound = (relax.solution.objective_value - 1e-6).ceil().max(0.0) as u64;
        let bound = bound.max(node.bound);
        if bound >= inc.best.crossings {
            continue;
        }
        if values.is_integral() {
            if inc.offer_order(decode_integral(&values)?) {
                rins_pending = params.use_rins;
                if params.tighten_root {
                    tighten(&mut root, matrix, inc.best.crossings)?;
                }
            }
            continue;
        }

        let mut improved = inc.offer(shift_improve(&sort_heuristic(&values)?, matrix));
        if nodes % ROUNDING_PERIOD == 1 {
            let seed = params
                .seed
                .wrapping_add(nodes.wrapping_mul(0x9e37_79b9_7f4a_7c15));
            let r = randomized_rounding(&values, matrix, seed, params.rounding_trials);
            improved |= inc.offer(shift_improve(&r.ordering, matrix));
        }
        if improved {
            rins_pending = params.use_rins;
        }
        if rins_pending {
            rins_pending = false;
            let r = rins(&values, &inc.best, matrix, params.rins_limits)?;
            improved |= inc.offer(r);
        }
        if improved && params.tighten_root {
            tighten(&mut root, matrix, inc.best.crossings)?;
        }
        if bound >= inc.best.crossings {
            continue;
        }

        let j = choose_branch_variable(&relax.solution.x)?;
        let (u, v) = model.columns()[j];
        let pos = inc.best.ordering.positions();
        let (first, second) = if pos[u] < pos[v] {
            ((u, v), (v, u))
        } else {
            ((v, u), (u, v))
        };
        for pair in [second, first] {
            let mut trail = node.trail.clone();
            trail.push(pair);
            stack.push(SearchNode { trail, bound });
        }
    }

    let best_cost = inc.best.crossings;
    Ok(SearchOutcome {
        proven_optimal: open_bound.is_none(),
        lower_bound: open_bound.unwrap_or(best_cost).min(best_cost),
        best: inc.best,
        nodes,
        cuts_added,
        lp_solves: model.lp_solves(),
        incumbents: inc.history,
    })
}

fn tighten(root: &mut FixState, matrix: &CrossingMatrix, ub: u64) -> Result<()> {
    if root.lower_bound() > ub {
        // nothing cheaper than the incumbent remains; the search prunes the rest
        return Ok(());
    }
    if bound_fix(matrix, root, ub)? > 0 {
        root.transitive_close(matrix)?;
    }
    Ok(())
}

fn restrict(ordering: &Ordering, members: &[usize], n1: usize) -> Ordering {
    let mut local = vec![usize::MAX; n1];
    for (i, &m) in members.iter().enumerate() {
        local[m] = i;
    }
    let perm = ordering
        .iter()
        .map(|v| local[v])
        .filter(|&i| i != usize::MAX)
        .collect();
    Ordering::new(perm).expect("restriction of a permutation")
}

/// Heuristics, reduction, then an exact search per independent part.
pub fn solve_exact(instance: &Instance, config: &SolverConfig) -> Result<SolveReport> {
    let start = Instant::now();
    let deadline = config.time_limit.map(|t| start + t);
    let n1 = instance.n1();
    let matrix = crossing_matrix(instance);

    let iso = extract_isolated(instance);
    let core_matrix = crossing_matrix(&iso.core);
    let heuristic = HeuristicConfig {
        seed: config.seed,
        restarts: config.restarts,
    };
    let mut core = heuristic_portfolio(&iso.core, &core_matrix, &heuristic)?;
    if let Some(w) = config.window {
        if core.ordering.len() > 1 {
            core = local_search_improve(&core.ordering, &core_matrix, w)?;
        }
    }
    let start_order = iso.assemble(&core.ordering);
    let heuristic_cost = order_cost_unchecked(&matrix, start_order.as_slice());

    let reduced = reduce(instance, &matrix, heuristic_cost)?;
    let params = SearchParams {
        node_limit: config.node_limit,
        deadline,
        seed: config.seed,
        rounding_trials: config.rounding_trials,
        use_rins: true,
        rins_limits: RinsLimits {
            node_limit: config.rins_node_budget,
            ..RinsLimits::default()
        },
        tighten_root: true,
    };

    let mut orders = Vec::with_capacity(reduced.split.parts.len());
    let (mut nodes, mut cuts, mut solves, mut lb) = (0, 0, 0, 0);
    let mut proven = true;
    for (i, part) in reduced.split.parts.iter().enumerate() {
        let (sub, state) = reduced.part_state(i, &matrix);
        let local = restrict(&start_order, &part.members, n1);
        let crossings = order_cost_unchecked(&sub, local.as_slice());
        let out = search(
            &sub,
            state,
            Solution {
                ordering: local,
                crossings,
            },
            &params,
        )?;
        nodes += out.nodes;
        cuts += out.cuts_added;
        solves += out.lp_solves;
        lb += out.lower_bound;
        proven &= out.proven_optimal;
        orders.push(out.best.ordering);
    }
    let ordering = reduced.split.assemble(&orders)?;
    let crossings = order_cost_unchecked(&matrix, ordering.as_slice());
    if lb > crossings {
        return Err(Error::BoundAboveIncumbent { lb, ub: crossings });
    }
    Ok(SolveReport {
        best: Solution {
            ordering,
            crossings,
        },
        proven_optimal: proven,
        nodes_explored: nodes,
        cuts_added: cuts,
        lp_solves: solves,
        wall_time: start.elapsed(),
        lower_bound: if proven { crossings } else { lb },
        heuristic_cost,
        reductions: reduced.counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crossings::pair_lower_bound;
    use crate::model::parse_instance;
    use crate::oracle::{brute_force_matrix, brute_force_opt, generate, GenSpec};

    const FIG1: &str = "p ocr 4 2 6\n1 5\n3 5\n4 5\n2 6\n3 6\n4 6\n";

    fn corpus_instance(seed: u64) -> Instance {
        generate(&GenSpec {
            n0: 2 + (seed as usize % 7),
            n1: 2 + (seed as usize / 7) % 6,
            density: [0.2, 0.5, 0.8][(seed / 42) as usize % 3],
            seed: 90_000 + seed,
            guarantee_no_isolated: !seed.is_multiple_of(5),
        })
    }

    #[test]
    fn branch_variable_examples() {
        assert_eq!(choose_branch_variable(&[0.5, 0.9]).unwrap(), 0);
        assert_eq!(choose_branch_variable(&[0.3, 0.7]).unwrap(), 0);
        assert_eq!(choose_branch_variable(&[1.0, 0.49]).unwrap(), 1);
        assert!(matches!(
            choose_branch_variable(&[0.0, 1.0]),
            Err(Error::NothingToBranch)
        ));
    }

    #[test]
    fn decode_examples() {
        let v = PairValues::from_order(&[0, 1, 2]);
        assert_eq!(decode_integral(&v).unwrap().as_slice(), &[0, 1, 2]);
        let v = PairValues::from_upper(2, |_, _| 0.0);
        assert_eq!(decode_integral(&v).unwrap().as_slice(), &[1, 0]);
        let v = PairValues::from_upper(1, |_, _| 0.0);
        assert_eq!(decode_integral(&v).unwrap().as_slice(), &[0]);
        // 0 < 1, 1 < 2, 2 < 0
        let cyc = PairValues::from_upper(3, |u, v| if (u, v) == (0, 2) { 0.0 } else { 1.0 });
        assert!(matches!(
            decode_integral(&cyc),
            Err(Error::InconsistentIntegral(_))
        ));
        let frac = PairValues::from_upper(2, |_, _| 0.5);
        assert!(decode_integral(&frac).is_err());
    }

    #[test]
    fn solve_examples() {
        let fig1 = parse_instance(FIG1).unwrap();
        let r = solve_exact(&fig1, &SolverConfig::default()).unwrap();
        assert_eq!(r.best.crossings, 3);
        assert!(r.proven_optimal);
        assert!(r.nodes_explored <= 1);

        let swap = Instance::new(2, vec![vec![2], vec![1]]).unwrap();
        let r = solve_exact(&swap, &SolverConfig::default()).unwrap();
        assert_eq!((r.best.crossings, r.proven_optimal), (0, true));

        let g = generate(&GenSpec {
            n0: 6,
            n1: 6,
            density: 0.5,
            seed: 11,
            guarantee_no_isolated: false,
        });
        let r = solve_exact(&g, &SolverConfig::default()).unwrap();
        assert_eq!(r.best.crossings, brute_force_opt(&g).unwrap().crossings);

        let empty = Instance::new(4, vec![]).unwrap();
        let r = solve_exact(&empty, &SolverConfig::default()).unwrap();
        assert_eq!((r.best, r.proven_optimal), (Solution::empty(), true));
    }

    #[test]
    fn exact_on_small_corpus() {
        for seed in 0..300 {
            let g = corpus_instance(seed);
            let r = solve_exact(&g, &SolverConfig::default()).unwrap();
            let opt = brute_force_opt(&g).unwrap().crossings;
            assert_eq!(r.best.crossings, opt, "seed {seed}");
            assert!(r.proven_optimal);
            assert_eq!(r.lower_bound, opt);
            assert!(r.heuristic_cost >= opt);
        }
    }

    #[test]
    fn bare_search_is_exact_and_monotone() {
        // no reduction, no local search: the tree does all the work
        for seed in 0..120 {
            let g = corpus_instance(seed);
            let m = crossing_matrix(&g);
            let opt = brute_force_matrix(&m).unwrap().crossings;
            let start = Solution {
                crossings: order_cost_unchecked(&m, &(0..g.n1()).collect::<Vec<_>>()),
                ordering: Ordering::identity(g.n1()),
            };
            for use_rins in [false, true] {
                let params = SearchParams {
                    use_rins,
                    ..SearchParams::default()
                };
                let out = search(&m, FixState::new(&m), start.clone(), &params).unwrap();
                assert_eq!(out.best.crossings, opt, "seed {seed}");
                assert!(out.proven_optimal);
                assert!(out.incumbents.windows(2).all(|w| w[1] < w[0]));
                assert_eq!(*out.incumbents.last().unwrap(), opt);
            }
        }
    }

    #[test]
    fn node_limit_keeps_a_valid_bound() {
        for seed in 0..60 {
            let g = generate(&GenSpec {
                n0: 8,
                n1: 8,
                density: 0.5,
                seed: 500 + seed,
                guarantee_no_isolated: true,
            });
            let m = crossing_matrix(&g);
            let opt = brute_force_matrix(&m).unwrap().crossings;
            let params = SearchParams {
                node_limit: Some(1),
                use_rins: false,
                ..SearchParams::default()
            };
            let start = Solution {
                crossings: order_cost_unchecked(&m, &(0..8).collect::<Vec<_>>()),
                ordering: Ordering::identity(8),
            };
            let out = search(&m, FixState::new(&m), start, &params).unwrap();
            assert!(out.lower_bound <= opt);
            assert!(out.lower_bound >= pair_lower_bound(&m).min(out.best.crossings));
            assert!(out.best.crossings >= opt);
            if out.proven_optimal {
                assert_eq!(out.best.crossings, opt);
            }
        }
    }

    #[test]
    fn fully_fixed_root_takes_one_node() {
        let g = corpus_instance(17);
        let m = crossing_matrix(&g);
        let opt = brute_force_matrix(&m).unwrap();
        let mut state = FixState::new(&m);
        let p = opt.ordering.as_slice();
        for i in 0..p.len() {
            for j in (i + 1)..p.len() {
                state.fix(p[i], p[j], &m).unwrap();
            }
        }
        let worst = Solution {
            crossings: u64::MAX,
            ordering: Ordering::identity(g.n1()),
        };
        let out = search(&m, state, worst, &SearchParams::default()).unwrap();
        assert_eq!(out.nodes, 1);
        assert_eq!(out.best, opt);
    }

    #[test]
    fn zero_time_limit_reports_heuristic_bound() {
        let g = generate(&GenSpec {
            n0: 20,
            n1: 30,
            density: 0.5,
            seed: 3,
            guarantee_no_isolated: true,
        });
        let cfg = SolverConfig {
            time_limit: Some(Duration::ZERO),
            window: None,
            ..SolverConfig::default()
        };
        let r = solve_exact(&g, &cfg).unwrap();
        assert!(r.lower_bound <= r.best.crossings);
        assert!(r.best.crossings <= r.heuristic_cost);
        if !r.proven_optimal {
            assert!(r.lower_bound >= pair_lower_bound(&crossing_matrix(&g)).min(r.best.crossings));
        }
    }
}
