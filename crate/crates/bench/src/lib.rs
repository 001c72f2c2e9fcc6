//! Fixed benchmark instances shared by the criterion benches.

use oscm::oracle::{generate, GenSpec};
use oscm::Instance;

/// A named random instance; the name encodes its parameters.
pub struct Fixture {
    pub name: String,
    pub instance: Instance,
}

pub fn fixture(n0: usize, n1: usize, density: f64, seed: u64) -> Fixture {
    Fixture {
        name: format!("n0={n0}/n1={n1}/d={density}"),
        instance: generate(&GenSpec {
            n0,
            n1,
            density,
            seed,
            guarantee_no_isolated: true,
        }),
    }
}

/// Sparse instances growing in size, the regime the exact solver targets.
pub fn exact_suite() -> Vec<Fixture> {
    vec![
        fixture(20, 20, 0.2, 1),
        fixture(40, 40, 0.1, 2),
        fixture(60, 60, 0.06, 3),
    ]
}

/// Larger instances for the counting and heuristic benches.
pub fn heuristic_suite() -> Vec<Fixture> {
    vec![
        fixture(100, 100, 0.05, 4),
        fixture(300, 300, 0.02, 5),
        fixture(1000, 1000, 0.005, 6),
    ]
}
