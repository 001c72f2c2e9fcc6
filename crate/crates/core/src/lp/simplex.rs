//! Bounded-variable revised simplex on `A x - s = 0`.
//!
//! Structural columns `0..n` and one slack per row (index `n + i`) all carry
//! finite bounds, so any basis is made dual feasible by parking each nonbasic
//! variable at the bound matching the sign of its reduced cost. The solver
//! therefore runs the dual simplex from whatever basis it holds: adding rows
//! or tightening bounds keeps the basis and only needs dual pivots.
//!
//! The basis inverse is kept dense and updated by elementary row operations,
//! with a full Gauss-Jordan refactorization every [`REFACTOR_EVERY`] pivots
//! (or every `m / 2` pivots once there are more rows).

use super::LpError;

/// Primal feasibility tolerance used while pivoting.
pub const PRIMAL_TOL: f64 = 1e-8;
/// Reduced-cost tolerance for entering candidates.
pub const DUAL_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-9;
const REFACTOR_EVERY: usize = 64;
const DEGENERATE_LIMIT: usize = 100;

/// A row `lo <= sum a_j x_j <= hi` given as `(entries, lo, hi)`.
pub type RowSpec = (Vec<(usize, f64)>, f64, f64);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum VarStatus {
    Basic(usize),
    AtLower,
    AtUpper,
}

/// Result of one [`Simplex::solve`] call.
#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Optimal,
    /// `farkas` holds row multipliers `y` such that `y^T (A x - s)` cannot
    /// vanish anywhere inside the variable bounds.
    Infeasible {
        farkas: Vec<f64>,
    },
}

#[derive(Debug, Clone)]
pub struct Simplex {
    n: usize,
    cost: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    /// Structural columns as (row, coefficient).
    columns: Vec<Vec<(usize, f64)>>,
    basis: Vec<usize>,
    status: Vec<VarStatus>,
    binv: Vec<f64>,
    since_refactor: usize,
    x: Vec<f64>,
    pub(crate) pivots: usize,
}

impl Simplex {
    /// A model with structural columns only. `cost`, `lower` and `upper` have
    /// one entry per column.
    pub fn new(cost: Vec<f64>, lower: Vec<f64>, upper: Vec<f64>) -> Self {
        let n = cost.len();
        assert_eq!(lower.len(), n);
        assert_eq!(upper.len(), n);
        let status = (0..n)
            .map(|j| {
                if cost[j] < 0.0 {
                    VarStatus::AtUpper
                } else {
                    VarStatus::AtLower
                }
            })
            .collect();
        let mut s = Self {
            n,
            x: vec![0.0; n],
            cost,
            lower,
            upper,
            columns: vec![Vec::new(); n],
            basis: Vec::new(),
            status,
            binv: Vec::new(),
            since_refactor: 0,
            pivots: 0,
        };
        s.recompute_primal();
        s
    }

    pub fn num_cols(&self) -> usize {
        self.n
    }

    pub fn num_rows(&self) -> usize {
        self.basis.len()
    }

    pub fn set_col_bounds(&mut self, j: usize, lower: f64, upper: f64) {
        debug_assert!(j < self.n && lower <= upper);
        self.lower[j] = lower;
        self.upper[j] = upper;
    }

    pub fn col_bounds(&self, j: usize) -> (f64, f64) {
        (self.lower[j], self.upper[j])
    }

    /// Appends `lo <= sum a_j x_j <= hi`. Its slack enters the basis, so the
    /// inverse grows by one row and column without refactorizing.
    pub fn add_row(&mut self, entries: &[(usize, f64)], lo: f64, hi: f64) -> usize {
        self.add_rows(&[(entries.to_vec(), lo, hi)]);
        self.basis.len() - 1
    }

    /// Appends several rows at once; the new inverse is
    /// `[[B^-1, 0], [C B^-1, -I]]` where `C` holds the new rows' coefficients
    /// of the current basic variables.
    pub fn add_rows(&mut self, rows: &[RowSpec]) {
        let m = self.basis.len();
        let k = rows.len();
        let m1 = m + k;
        let mut binv = vec![0.0; m1 * m1];
        for r in 0..m {
            binv[r * m1..r * m1 + m].copy_from_slice(&self.binv[r * m..r * m + m]);
        }
        for (t, (entries, lo, hi)) in rows.iter().enumerate() {
            let row = m + t;
            let out = &mut binv[row * m1..row * m1 + m];
            for &(j, a) in entries {
                self.columns[j].push((row, a));
                if let VarStatus::Basic(r) = self.status[j] {
                    for (o, &b) in out.iter_mut().zip(&self.binv[r * m..(r + 1) * m]) {
                        *o += a * b;
                    }
                }
            }
            binv[row * m1 + row] = -1.0;
            self.cost.push(0.0);
            self.lower.push(*lo);
            self.upper.push(*hi);
            self.status.push(VarStatus::Basic(row));
            self.basis.push(self.n + row);
            self.x.push(0.0);
        }
        self.binv = binv;
        self.recompute_primal();
    }

    /// Current structural values.
    pub fn col_values(&self) -> &[f64] {
        &self.x[..self.n]
    }

    pub fn objective(&self) -> f64 {
        (0..self.n).map(|j| self.cost[j] * self.x[j]).sum()
    }

    /// Row duals `y = c_B B^-1` of the current basis.
    pub fn row_duals(&self) -> Vec<f64> {
        let m = self.basis.len();
        let mut y = vec![0.0; m];
        for (r, &var) in self.basis.iter().enumerate() {
            let c = self.cost[var];
            if c != 0.0 {
                for (yk, &b) in y.iter_mut().zip(&self.binv[r * m..(r + 1) * m]) {
                    *yk += c * b;
                }
            }
        }
        y
    }

    /// Drops the basis back to all slacks.
    pub fn reset_basis(&mut self) {
        let m = self.basis.len();
        for j in 0..self.n {
            self.status[j] = VarStatus::AtLower;
        }
        self.basis = (0..m).map(|i| self.n + i).collect();
        for i in 0..m {
            self.status[self.n + i] = VarStatus::Basic(i);
        }
        self.binv = vec![0.0; m * m];
        for i in 0..m {
            self.binv[i * m + i] = -1.0;
        }
        self.since_refactor = 0;
        self.recompute_primal();
    }

    fn nonbasic_value(&self, j: usize) -> f64 {
        match self.status[j] {
            VarStatus::AtUpper => self.upper[j],
            _ => self.lower[j],
        }
    }

    /// `rho . M_j` for column `j` of `[A | -I]`.
    fn row_times_col(&self, rho: &[f64], j: usize) -> f64 {
        if j < self.n {
            self.columns[j].iter().map(|&(i, a)| rho[i] * a).sum()
        } else {
            -rho[j - self.n]
        }
    }

    fn recompute_primal(&mut self) {
        let m = self.basis.len();
        let total = self.n + m;
        let mut rhs = vec![0.0; m];
        for j in 0..total {
            if matches!(self.status[j], VarStatus::Basic(_)) {
                continue;
            }
            let v = self.nonbasic_value(j);
            self.x[j] = v;
            if v == 0.0 {
                continue;
            }
            if j < self.n {
                for &(i, a) in &self.columns[j] {
                    rhs[i] -= a * v;
                }
            } else {
                rhs[j - self.n] += v;
            }
        }
        for r in 0..m {
            let row = &self.binv[r * m..(r + 1) * m];
            self.x[self.basis[r]] = row.iter().zip(&rhs).map(|(b, v)| b * v).sum();
        }
    }

    fn reduced_costs(&self, y: &[f64]) -> Vec<f64> {
        let total = self.n + self.basis.len();
        (0..total)
            .map(|j| match self.status[j] {
                VarStatus::Basic(_) => 0.0,
                _ => self.cost[j] - self.row_times_col(y, j),
            })
            .collect()
    }

    fn refactor(&mut self) -> Result<(), LpError> {
        let m = self.basis.len();
        let mut b = vec![0.0; m * m];
        for (r, &var) in self.basis.iter().enumerate() {
            if var < self.n {
                for &(i, a) in &self.columns[var] {
                    b[i * m + r] = a;
                }
            } else {
                b[(var - self.n) * m + r] = -1.0;
            }
        }
        self.binv = invert(b, m).ok_or(LpError::SingularBasis)?;
        self.since_refactor = 0;
        Ok(())
    }

    /// Reduced costs from scratch, then every nonbasic variable parked at
    /// its dual-feasible bound and the basic values recomputed.
    fn resync(&mut self) -> Vec<f64> {
        let y = self.row_duals();
        let d = self.reduced_costs(&y);
        for (j, &dj) in d.iter().enumerate() {
            if self.lower[j] == self.upper[j] {
                continue;
            }
            match self.status[j] {
                VarStatus::AtLower if dj < -DUAL_TOL => self.status[j] = VarStatus::AtUpper,
                VarStatus::AtUpper if dj > DUAL_TOL => self.status[j] = VarStatus::AtLower,
                _ => {}
            }
        }
        self.recompute_primal();
        d
    }

    /// Runs dual simplex pivots until the basis is primal feasible or a row
    /// proves infeasibility.
    pub fn solve(&mut self) -> Result<Outcome, LpError> {
        let m = self.basis.len();
        let total = self.n + m;
        let limit = 20_000 + 50 * total;
        let refactor_every = REFACTOR_EVERY.max(m / 2);
        let mut degenerate = 0usize;
        let mut bland = false;
        let mut d = self.resync();
        let mut alpha_row = vec![0.0; total];

        for _ in 0..limit {
            if self.since_refactor >= refactor_every {
                self.refactor()?;
                d = self.resync();
            }

            // leaving row
            let mut leave: Option<(usize, f64)> = None;
            for (r, &var) in self.basis.iter().enumerate() {
                let v = self.x[var];
                let infeas = (self.lower[var] - v).max(v - self.upper[var]);
                if infeas <= PRIMAL_TOL {
                    continue;
                }
                let better = match leave {
                    None => true,
                    Some((lr, li)) => {
                        if bland {
                            var < self.basis[lr]
                        } else {
                            infeas > li
                        }
                    }
                };
                if better {
                    leave = Some((r, infeas));
                }
            }
            let Some((r, _)) = leave else {
                return Ok(Outcome::Optimal);
            };
            let leaving = self.basis[r];
            let below = self.x[leaving] < self.lower[leaving];
            let rho: Vec<f64> = self.binv[r * m..(r + 1) * m].to_vec();

            // dual ratio test
            let mut enter: Option<(usize, f64, f64)> = None;
            for j in 0..total {
                let at_lower = match self.status[j] {
                    VarStatus::Basic(_) => {
                        alpha_row[j] = 0.0;
                        continue;
                    }
                    VarStatus::AtLower => true,
                    VarStatus::AtUpper => false,
                };
                let alpha = self.row_times_col(&rho, j);
                alpha_row[j] = alpha;
                if self.lower[j] == self.upper[j] {
                    continue;
                }
                let eligible = match (below, at_lower) {
                    (true, true) => alpha < -PIVOT_TOL,
                    (true, false) => alpha > PIVOT_TOL,
                    (false, true) => alpha > PIVOT_TOL,
                    (false, false) => alpha < -PIVOT_TOL,
                };
                if !eligible {
                    continue;
                }
                let ratio = d[j].abs() / alpha.abs();
                let better = match enter {
                    None => true,
                    Some((ej, er, ea)) => {
                        if ratio < er - 1e-12 {
                            true
                        } else if ratio <= er + 1e-12 {
                            if bland {
                                j < ej
                            } else {
                                alpha.abs() > ea.abs()
                            }
                        } else {
                            false
                        }
                    }
                };
                if better {
                    enter = Some((j, ratio, alpha));
                }
            }
            let Some((q, ratio, alpha_q)) = enter else {
                return Ok(Outcome::Infeasible { farkas: rho });
            };

            if ratio <= 1e-12 {
                degenerate += 1;
                if degenerate >= DEGENERATE_LIMIT {
                    bland = true;
                }
            } else {
                degenerate = 0;
            }

            // dual update
            let theta_d = d[q] / alpha_q;
            for j in 0..total {
                if alpha_row[j] != 0.0 {
                    d[j] -= theta_d * alpha_row[j];
                }
            }
            d[q] = 0.0;
            d[leaving] = -theta_d;

            // primal update: move x_q until the leaving variable hits its bound
            let u = self.basis_column(q);
            let target = if below {
                self.lower[leaving]
            } else {
                self.upper[leaving]
            };
            let t = (self.x[leaving] - target) / u[r];
            for (k, &uk) in u.iter().enumerate() {
                if uk != 0.0 {
                    let var = self.basis[k];
                    self.x[var] -= t * uk;
                }
            }
            self.x[q] += t;
            self.x[leaving] = target;
            self.pivot(r, q, below, &u);

            // rounding can push a reduced cost across zero; re-park if so
            let misparked = (0..total).any(|j| {
                self.lower[j] != self.upper[j]
                    && match self.status[j] {
                        VarStatus::AtLower => d[j] < -DUAL_TOL,
                        VarStatus::AtUpper => d[j] > DUAL_TOL,
                        VarStatus::Basic(_) => false,
                    }
            });
            if misparked {
                d = self.resync();
            }
        }
        Err(LpError::IterationLimit)
    }

    /// `B^-1 M_q`.
    fn basis_column(&self, q: usize) -> Vec<f64> {
        let m = self.basis.len();
        let mut u = vec![0.0; m];
        if q < self.n {
            for &(i, a) in &self.columns[q] {
                for (k, uk) in u.iter_mut().enumerate() {
                    *uk += self.binv[k * m + i] * a;
                }
            }
        } else {
            let i = q - self.n;
            for (k, uk) in u.iter_mut().enumerate() {
                *uk = -self.binv[k * m + i];
            }
        }
        u
    }

    fn pivot(&mut self, r: usize, q: usize, leaving_below: bool, u: &[f64]) {
        let m = self.basis.len();
        let piv = u[r];
        for k in 0..m {
            self.binv[r * m + k] /= piv;
        }
        let (before, rest) = self.binv.split_at_mut(r * m);
        let (pivot_row, after) = rest.split_at_mut(m);
        for (i, &f) in u.iter().enumerate() {
            if i == r || f == 0.0 {
                continue;
            }
            let row = if i < r {
                &mut before[i * m..(i + 1) * m]
            } else {
                &mut after[(i - r - 1) * m..(i - r) * m]
            };
            for (b, &p) in row.iter_mut().zip(pivot_row.iter()) {
                *b -= f * p;
            }
        }
        let leaving = self.basis[r];
        self.status[leaving] = if leaving_below {
            VarStatus::AtLower
        } else {
            VarStatus::AtUpper
        };
        self.status[q] = VarStatus::Basic(r);
        self.basis[r] = q;
        self.since_refactor += 1;
        self.pivots += 1;
    }
}

/// Gauss-Jordan inverse with partial pivoting; `None` if singular.
fn invert(mut a: Vec<f64>, m: usize) -> Option<Vec<f64>> {
    let mut inv = vec![0.0; m * m];
    for i in 0..m {
        inv[i * m + i] = 1.0;
    }
    for col in 0..m {
        let p = (col..m).max_by(|&x, &y| a[x * m + col].abs().total_cmp(&a[y * m + col].abs()))?;
        if a[p * m + col].abs() < 1e-11 {
            return None;
        }
        if p != col {
            for k in 0..m {
                a.swap(p * m + k, col * m + k);
                inv.swap(p * m + k, col * m + k);
            }
        }
        let piv = a[col * m + col];
        for k in 0..m {
            a[col * m + k] /= piv;
            inv[col * m + k] /= piv;
        }
        for i in 0..m {
            if i == col {
                continue;
            }
            let f = a[i * m + col];
            if f == 0.0 {
                continue;
            }
            for k in 0..m {
                a[i * m + k] -= f * a[col * m + k];
                inv[i * m + k] -= f * inv[col * m + k];
            }
        }
    }
    Some(inv)
}
