//! Linear relaxation of the ordering program with lazy triangle rows.
//!
//! One column `x_uv` per pair `u < v` that is free when the model is built;
//! `x_uv = 1` means `u` is left of `v`. The objective is
//! `sum (c_uv - c_vu) x_uv + sum c_vu`, and the rows are the triangle
//! inequalities `0 <= x_uv + x_vw - x_uw <= 1` for `u < v < w`, added only
//! once the current solution violates them.

mod simplex;

use std::collections::HashSet;

pub use simplex::{Outcome, Simplex};

use crate::crossings::CrossingMatrix;
use crate::reduction::FixState;

/// Violation tolerance for triangle rows and column bounds.
pub const FEAS_TOL: f64 = 1e-6;
/// Distance from 0 or 1 under which a value counts as integral.
pub const INT_TOL: f64 = 1e-6;
/// Most violated triangles added per separation round.
pub const MAX_CUTS_PER_ROUND: usize = 500;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("basis matrix became singular")]
    SingularBasis,
    #[error("simplex iteration limit reached")]
    IterationLimit,
    #[error("separation keeps returning rows already in the pool")]
    StalledSeparation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
}

/// Values of the columns of an [`LpModel`] after a solve.
#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    /// Objective including the model's constant term.
    pub objective_value: f64,
    pub status: LpStatus,
}

/// An ordered triple `u < v < w`, standing for the row
/// `0 <= x_uv + x_vw - x_uw <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triangle {
    pub u: usize,
    pub v: usize,
    pub w: usize,
}

/// A violated triangle and its row activity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleCut {
    pub triangle: Triangle,
    pub value: f64,
}

impl TriangleCut {
    pub fn violation(&self) -> f64 {
        (-self.value).max(self.value - 1.0)
    }
}

/// `x_uv` for every pair, whether it is a column or was fixed at build time.
#[derive(Debug, Clone, PartialEq)]
pub struct PairValues {
    n1: usize,
    x: Vec<f64>,
}

impl PairValues {
    /// Builds from a dense row-major `n1 x n1` table; only entries `u < v`
    /// are read.
    pub fn from_upper(n1: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut x = vec![0.0; n1 * n1];
        for u in 0..n1 {
            for v in (u + 1)..n1 {
                x[u * n1 + v] = f(u, v);
            }
        }
        Self { n1, x }
    }

    /// Integral values encoding `perm`.
    pub fn from_order(perm: &[usize]) -> Self {
        let n1 = perm.len();
        let mut pos = vec![0; n1];
        for (i, &v) in perm.iter().enumerate() {
            pos[v] = i;
        }
        Self::from_upper(n1, |u, v| if pos[u] < pos[v] { 1.0 } else { 0.0 })
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    /// `x_uv` for `u < v`.
    #[inline]
    pub fn get(&self, u: usize, v: usize) -> f64 {
        debug_assert!(u < v);
        self.x[u * self.n1 + v]
    }

    /// Fractional degree to which `u` is left of `v`, for any `u != v`.
    #[inline]
    pub fn before(&self, u: usize, v: usize) -> f64 {
        if u < v {
            self.get(u, v)
        } else {
            1.0 - self.get(v, u)
        }
    }

    pub fn is_integral(&self) -> bool {
        (0..self.n1).all(|u| {
            ((u + 1)..self.n1).all(|v| {
                let x = self.get(u, v);
                x.abs() <= INT_TOL || (1.0 - x).abs() <= INT_TOL
            })
        })
    }
}

/// The relaxation together with its warm-startable simplex.
#[derive(Debug, Clone)]
pub struct LpModel {
    n1: usize,
    columns: Vec<(usize, usize)>,
    column_of: Vec<Option<usize>>,
    /// Orientation of pairs fixed at build time (no column): 1.0 if `u < v`
    /// is ordered `u` first.
    built_fixed: Vec<f64>,
    objective: Vec<f64>,
    constant: f64,
    rows: Vec<Triangle>,
    pooled: HashSet<Triangle>,
    engine: Simplex,
    lp_solves: u64,
}

impl LpModel {
    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn num_columns(&self) -> usize {
        self.columns.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn columns(&self) -> &[(usize, usize)] {
        &self.columns
    }

    pub fn column(&self, u: usize, v: usize) -> Option<usize> {
        self.column_of[u * self.n1 + v]
    }

    pub fn objective_coefficients(&self) -> &[f64] {
        &self.objective
    }

    pub fn constant_term(&self) -> f64 {
        self.constant
    }

    pub fn rows(&self) -> &[Triangle] {
        &self.rows
    }

    pub fn lp_solves(&self) -> u64 {
        self.lp_solves
    }

    pub fn col_bounds(&self, j: usize) -> (f64, f64) {
        self.engine.col_bounds(j)
    }

    /// Tightens column bounds to the orientations fixed in `state`; free
    /// pairs get `[0, 1]`.
    pub fn apply_fixes(&mut self, state: &FixState) {
        for (j, &(u, v)) in self.columns.iter().enumerate() {
            let (lo, hi) = match state.before(u, v) {
                Some(true) => (1.0, 1.0),
                Some(false) => (0.0, 0.0),
                None => (0.0, 1.0),
            };
            self.engine.set_col_bounds(j, lo, hi);
        }
    }

    /// Adds the row for `t` unless it is already pooled. Returns whether a
    /// row was added.
    pub fn add_triangle(&mut self, t: Triangle) -> bool {
        self.add_triangles(&[t]) == 1
    }

    /// Adds the rows of all triangles not yet pooled in one engine update.
    /// Returns how many were new.
    pub fn add_triangles(&mut self, triangles: &[Triangle]) -> usize {
        let mut rows = Vec::new();
        let mut added = 0;
        for &t in triangles {
            if !self.pooled.insert(t) {
                continue;
            }
            added += 1;
            let mut entries = Vec::with_capacity(3);
            let mut shift = 0.0;
            for (a, b, coef) in [(t.u, t.v, 1.0), (t.v, t.w, 1.0), (t.u, t.w, -1.0)] {
                match self.column(a, b) {
                    Some(j) => entries.push((j, coef)),
                    None => shift += coef * self.built_fixed[a * self.n1 + b],
                }
            }
            // with all three orientations fixed, transitive closure keeps
            // the row satisfied
            if !entries.is_empty() {
                rows.push((entries, -shift, 1.0 - shift));
                self.rows.push(t);
            }
        }
        if !rows.is_empty() {
            self.engine.add_rows(&rows);
        }
        added
    }

    /// Pair values of a solution, filling in build-time fixed pairs.
    pub fn pair_values(&self, solution: &LpSolution) -> PairValues {
        let n1 = self.n1;
        PairValues::from_upper(n1, |u, v| match self.column(u, v) {
            Some(j) => solution.x[j].clamp(0.0, 1.0),
            None => self.built_fixed[u * n1 + v],
        })
    }
}

/// The model for `state`: a column for each free pair, no rows yet.
pub fn build_lp(matrix: &CrossingMatrix, state: &FixState) -> LpModel {
    let n1 = matrix.n1();
    let mut columns = Vec::new();
    let mut column_of = vec![None; n1 * n1];
    let mut built_fixed = vec![0.0; n1 * n1];
    let mut objective = Vec::new();
    let mut constant = state.fixed_cost() as f64;
    for u in 0..n1 {
        for v in (u + 1)..n1 {
            match state.before(u, v) {
                None => {
                    column_of[u * n1 + v] = Some(columns.len());
                    columns.push((u, v));
                    objective.push(matrix.get(u, v) as f64 - matrix.get(v, u) as f64);
                    constant += matrix.get(v, u) as f64;
                }
                Some(first) => built_fixed[u * n1 + v] = if first { 1.0 } else { 0.0 },
            }
        }
    }
    let k = columns.len();
    let engine = Simplex::new(objective.clone(), vec![0.0; k], vec![1.0; k]);
    LpModel {
        n1,
        columns,
        column_of,
        built_fixed,
        objective,
        constant,
        rows: Vec::new(),
        pooled: HashSet::new(),
        engine,
        lp_solves: 0,
    }
}

/// Solves the current model (rows and bounds as they stand).
pub fn simplex_solve(model: &mut LpModel) -> Result<LpSolution, LpError> {
    model.lp_solves += 1;
    let outcome = match model.engine.solve() {
        Ok(o) => o,
        Err(_) => {
            model.engine.reset_basis();
            model.engine.solve()?
        }
    };
    let x = model.engine.col_values().to_vec();
    let status = match outcome {
        Outcome::Optimal => LpStatus::Optimal,
        Outcome::Infeasible { .. } => LpStatus::Infeasible,
    };
    Ok(LpSolution {
        objective_value: model.engine.objective() + model.constant,
        x,
        status,
    })
}

/// Scans all ordered triples for violated triangle inequalities, most
/// violated first, at most `max_cuts`.
pub fn separate_triangles(values: &PairValues, max_cuts: usize) -> Vec<TriangleCut> {
    let n = values.n1();
    let mut cuts = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            let xuv = values.get(u, v);
            for w in (v + 1)..n {
                let value = xuv + values.get(v, w) - values.get(u, w);
                if !(-FEAS_TOL..=1.0 + FEAS_TOL).contains(&value) {
                    cuts.push(TriangleCut {
                        triangle: Triangle { u, v, w },
                        value,
                    });
                }
            }
        }
    }
    cuts.sort_by(|a, b| {
        b.violation()
            .total_cmp(&a.violation())
            .then(a.triangle.cmp(&b.triangle))
    });
    cuts.truncate(max_cuts);
    cuts
}

/// Outcome of the cutting loop.
#[derive(Debug, Clone)]
pub struct Relaxation {
    pub solution: LpSolution,
    /// Present when the relaxation is feasible.
    pub values: Option<PairValues>,
    pub rounds: usize,
    pub cuts_added: usize,
}

impl Relaxation {
    pub fn is_infeasible(&self) -> bool {
        self.solution.status == LpStatus::Infeasible
    }
}

/// Applies `state` to the column bounds, then alternates simplex solves and
/// triangle separation until no triangle is violated.
pub fn solve_relaxation(model: &mut LpModel, state: &FixState) -> Result<Relaxation, LpError> {
    model.apply_fixes(state);
    let mut rounds = 0;
    let mut cuts_added = 0;
    loop {
        rounds += 1;
        let solution = simplex_solve(model)?;
        if solution.status == LpStatus::Infeasible {
            return Ok(Relaxation {
                solution,
                values: None,
                rounds,
                cuts_added,
            });
        }
        let values = model.pair_values(&solution);
        let cuts = separate_triangles(&values, MAX_CUTS_PER_ROUND);
        if cuts.is_empty() {
            return Ok(Relaxation {
                solution,
                values: Some(values),
                rounds,
                cuts_added,
            });
        }
        let triangles: Vec<Triangle> = cuts.iter().map(|c| c.triangle).collect();
        let added = model.add_triangles(&triangles);
        if added == 0 {
            return Err(LpError::StalledSeparation);
        }
        cuts_added += added;
    }
}
