//! Brute-force reference solver and random instance generation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::crossings::{crossing_matrix, order_cost_unchecked, CrossingMatrix};
use crate::model::{Instance, Ordering, Solution};
use crate::reduction::FixState;
use crate::{Error, Result};

/// Largest free layer the brute force accepts.
pub const MAX_BRUTE_FORCE_N1: usize = 10;

/// Exact optimum over all `n1!` orderings. Ties go to the lexicographically
/// smallest permutation.
pub fn brute_force_opt(instance: &Instance) -> Result<Solution> {
    brute_force_matrix(&crossing_matrix(instance))
}

pub fn brute_force_matrix(matrix: &CrossingMatrix) -> Result<Solution> {
    Ok(brute_force_filtered(matrix, |_| true)?
        .expect("unfiltered enumeration accepts every permutation"))
}

/// Optimum over orderings consistent with every fixed pair of `state`, or
/// `None` when no ordering is consistent.
pub fn brute_force_restricted(
    matrix: &CrossingMatrix,
    state: &FixState,
) -> Result<Option<Solution>> {
    brute_force_filtered(matrix, |perm| state.is_consistent(perm))
}

/// Enumerates permutations by adjacent transpositions (Steinhaus-Johnson-
/// Trotter), updating the cost by `c[b][a] - c[a][b]` per swap.
fn brute_force_filtered(
    matrix: &CrossingMatrix,
    accept: impl Fn(&[usize]) -> bool,
) -> Result<Option<Solution>> {
    let n = matrix.n1();
    if n > MAX_BRUTE_FORCE_N1 {
        return Err(Error::TooLarge {
            n1: n,
            max: MAX_BRUTE_FORCE_N1,
        });
    }
    let mut perm: Vec<usize> = (0..n).collect();
    // -1: looks left, +1: looks right
    let mut dir: Vec<isize> = vec![-1; n];
    let mut cost = order_cost_unchecked(matrix, &perm) as i64;
    let mut best: Option<(i64, Vec<usize>)> = None;

    loop {
        if accept(&perm) {
            let better = match &best {
                None => true,
                Some((bc, bp)) => cost < *bc || (cost == *bc && perm < *bp),
            };
            if better {
                best = Some((cost, perm.clone()));
            }
        }

        let mut mobile: Option<usize> = None;
        for i in 0..n {
            let j = i as isize + dir[perm[i]];
            if j < 0 || j >= n as isize {
                continue;
            }
            if perm[j as usize] < perm[i] && mobile.is_none_or(|m| perm[i] > perm[m]) {
                mobile = Some(i);
            }
        }
        let Some(i) = mobile else { break };
        let k = perm[i];
        let j = (i as isize + dir[k]) as usize;
        let (left, right) = if i < j {
            (perm[i], perm[j])
        } else {
            (perm[j], perm[i])
        };
        cost += matrix.get(right, left) as i64 - matrix.get(left, right) as i64;
        perm.swap(i, j);
        for d in &mut dir[k + 1..] {
            *d = -*d;
        }
    }

    Ok(best.map(|(c, p)| Solution {
        ordering: Ordering::new(p).expect("enumerated permutation"),
        crossings: c as u64,
    }))
}

/// Parameters of a random bipartite instance.
#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    pub n0: usize,
    pub n1: usize,
    /// Probability of each `(a, b)` edge.
    pub density: f64,
    pub seed: u64,
    /// Give every degree-zero free vertex one uniform random neighbor.
    pub guarantee_no_isolated: bool,
}

pub fn generate(spec: &GenSpec) -> Instance {
    let density = spec.density.clamp(0.0, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut adjacency = Vec::with_capacity(spec.n1);
    for _ in 0..spec.n1 {
        let mut nbrs: Vec<usize> = (1..=spec.n0).filter(|_| rng.random_bool(density)).collect();
        if nbrs.is_empty() && spec.guarantee_no_isolated && spec.n0 > 0 {
            nbrs.push(rng.random_range(1..=spec.n0));
        }
        adjacency.push(nbrs);
    }
    Instance::new(spec.n0, adjacency).expect("generated adjacency is valid")
}
