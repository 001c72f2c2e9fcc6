use proptest::prelude::*;

use oscm::crossings::{count_crossings, crossing_matrix, order_cost, pair_lower_bound};
use oscm::heuristics::{barycenter, median, probabilistic_median, shift_improve};
use oscm::model::{parse_instance, parse_solution, write_instance, write_solution};
use oscm::oracle::{brute_force_matrix, brute_force_restricted, generate, GenSpec};
use oscm::reduction::reduce;
use oscm::{solve_exact, solve_heuristic, HeuristicConfig, Instance, Ordering, SolverConfig};

fn instance(max_n0: usize, max_n1: usize, isolated: bool) -> impl Strategy<Value = Instance> {
    (1..=max_n0, 0..=max_n1, 0.0..=1.0f64, any::<u64>()).prop_map(move |(n0, n1, density, seed)| {
        generate(&GenSpec {
            n0,
            n1,
            density,
            seed,
            guarantee_no_isolated: !isolated,
        })
    })
}

fn with_ordering(inst: Instance) -> impl Strategy<Value = (Instance, Ordering)> {
    let n1 = inst.n1();
    Just((0..n1).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(move |p| (inst.clone(), Ordering::new(p).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn counting_agrees_with_matrix((g, ord) in instance(30, 40, true).prop_flat_map(with_ordering)) {
        let m = crossing_matrix(&g);
        let c = count_crossings(&g, &ord).unwrap();
        prop_assert_eq!(c, order_cost(&m, &ord).unwrap());
        prop_assert!(c >= pair_lower_bound(&m));
    }

    #[test]
    fn instance_and_solution_text_round_trip((g, ord) in instance(20, 20, true).prop_flat_map(with_ordering)) {
        prop_assert_eq!(&parse_instance(&write_instance(&g)).unwrap(), &g);
        let text = write_solution(&g, &ord).unwrap();
        prop_assert_eq!(parse_solution(&g, &text).unwrap(), ord);
    }

    #[test]
    fn exact_matches_brute_force(g in instance(8, 7, true)) {
        let r = solve_exact(&g, &SolverConfig::default()).unwrap();
        let opt = brute_force_matrix(&crossing_matrix(&g)).unwrap();
        prop_assert_eq!(r.best.crossings, opt.crossings);
        prop_assert_eq!(count_crossings(&g, &r.best.ordering).unwrap(), opt.crossings);
        prop_assert!(r.proven_optimal);
        prop_assert!(r.lower_bound <= r.best.crossings && r.best.crossings <= r.heuristic_cost);
    }

    #[test]
    fn reduction_keeps_an_optimal_ordering(g in instance(8, 8, true)) {
        let m = crossing_matrix(&g);
        let ub = solve_heuristic(&g, &HeuristicConfig::default()).unwrap().crossings;
        let red = reduce(&g, &m, ub).unwrap();
        let opt = brute_force_matrix(&m).unwrap().crossings;
        let restricted = brute_force_restricted(&m, &red.state).unwrap().unwrap();
        prop_assert_eq!(restricted.crossings, opt);
    }

    #[test]
    fn heuristics_are_valid_and_seeded(g in instance(25, 30, false), seed in any::<u64>()) {
        let m = crossing_matrix(&g);
        for o in [barycenter(&g).unwrap(), median(&g).unwrap(), probabilistic_median(&g, seed).unwrap()] {
            prop_assert_eq!(o.len(), g.n1());
            let s = shift_improve(&o, &m);
            prop_assert!(s.crossings <= order_cost(&m, &o).unwrap());
        }
        prop_assert_eq!(probabilistic_median(&g, seed).unwrap(), probabilistic_median(&g, seed).unwrap());
        let cfg = HeuristicConfig { seed, restarts: 8 };
        prop_assert_eq!(solve_heuristic(&g, &cfg).unwrap(), solve_heuristic(&g, &cfg).unwrap());
    }
}

#[test]
fn time_limited_runs_stay_consistent() {
    let g = generate(&GenSpec {
        n0: 40,
        n1: 60,
        density: 0.2,
        seed: 99,
        guarantee_no_isolated: false,
    });
    let cfg = SolverConfig {
        time_limit: Some(std::time::Duration::from_millis(50)),
        ..SolverConfig::default()
    };
    let r = solve_exact(&g, &cfg).unwrap();
    assert_eq!(
        count_crossings(&g, &r.best.ordering).unwrap(),
        r.best.crossings
    );
    assert!(r.lower_bound <= r.best.crossings);
    assert!(r.lower_bound >= pair_lower_bound(&crossing_matrix(&g)).min(r.best.crossings));
}
