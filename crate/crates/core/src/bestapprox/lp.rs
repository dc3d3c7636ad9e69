//! Discrete minimax by linear programming.
//!
//! The problem `min_c max_i |f_i - Σ_k c_k φ_k(x_i)|` is solved through its
//! dual
//!
//! ```text
//! max Σ_i f_i (u_i - v_i)
//!     Σ_i φ_k(x_i) (u_i - v_i) = 0   for every k
//!     Σ_i (u_i + v_i)          = 1
//!     u, v >= 0
//! ```
//!
//! whose simplex multipliers are the coefficients `c` and the level `t`.
//! The optimal `w = u - v` is a discrete signed measure annihilating the
//! approximating space, i.e. an extremal signature on the points.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

const HARRIS_DELTA: f64 = 1e-11;

#[derive(Clone, Debug)]
pub struct LpOptions {
    /// Reduced-cost tolerance relative to `max |f_i|`.
    pub opt_tol_rel: f64,
    pub pivot_tol: f64,
    pub refactor_every: usize,
    /// Degenerate pivots in a row before switching to Bland's rule.
    pub bland_after: usize,
    pub max_pivots: usize,
}

impl Default for LpOptions {
    fn default() -> Self {
        LpOptions {
            opt_tol_rel: 1e-11,
            pivot_tol: 1e-11,
            refactor_every: 1,
            bland_after: 50,
            max_pivots: 200_000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct MinimaxLp {
    pub coefficients: Vec<f64>,
    /// The multiplier of the normalization row.
    pub level: f64,
    /// `Σ f_i w_i` at the optimal vertex.
    pub objective: f64,
    /// `w_i = u_i - v_i`.
    pub weights: Vec<f64>,
    pub pivots: usize,
    pub bland_pivots: usize,
    /// Stopped after a long run of pivots without objective gain. The
    /// vertex is still feasible, so `objective` is still a lower bound.
    pub stalled: bool,
}

struct Tableau<'a> {
    phi: &'a DMatrix<f64>,
    f: &'a [f64],
    scale: Vec<f64>,
    n: usize,
    m: usize,
    basis: Vec<usize>,
    is_basic: Vec<bool>,
    binv: DMatrix<f64>,
    xb: DVector<f64>,
    pivots: usize,
    bland_pivots: usize,
    since_refactor: usize,
}

#[derive(Clone, Copy, PartialEq)]
enum Phase {
    One,
    Two,
}

impl<'a> Tableau<'a> {
    fn new(phi: &'a DMatrix<f64>, f: &'a [f64]) -> Self {
        let n = phi.nrows();
        let k = phi.ncols();
        let m = k + 1;
        let scale = (0..k)
            .map(|c| {
                let mx = phi.column(c).iter().fold(0.0f64, |a, v| a.max(v.abs()));
                if mx > 0.0 {
                    1.0 / mx
                } else {
                    1.0
                }
            })
            .collect();
        let basis: Vec<usize> = (0..m).map(|r| 2 * n + r).collect();
        let mut is_basic = vec![false; 2 * n + m];
        for &b in &basis {
            is_basic[b] = true;
        }
        let mut xb = DVector::zeros(m);
        xb[m - 1] = 1.0;
        Tableau {
            phi,
            f,
            scale,
            n,
            m,
            basis,
            is_basic,
            binv: DMatrix::identity(m, m),
            xb,
            pivots: 0,
            bland_pivots: 0,
            since_refactor: 0,
        }
    }

    fn is_artificial(&self, j: usize) -> bool {
        j >= 2 * self.n
    }

    fn column(&self, j: usize) -> DVector<f64> {
        let mut a = DVector::zeros(self.m);
        if self.is_artificial(j) {
            a[j - 2 * self.n] = 1.0;
            return a;
        }
        let (i, sgn) = if j < self.n { (j, 1.0) } else { (j - self.n, -1.0) };
        for k in 0..self.m - 1 {
            a[k] = sgn * self.scale[k] * self.phi[(i, k)];
        }
        a[self.m - 1] = 1.0;
        a
    }

    fn cost(&self, j: usize, phase: Phase) -> f64 {
        match phase {
            Phase::One => {
                if self.is_artificial(j) {
                    -1.0
                } else {
                    0.0
                }
            }
            Phase::Two => {
                if j < self.n {
                    self.f[j]
                } else if j < 2 * self.n {
                    -self.f[j - self.n]
                } else {
                    0.0
                }
            }
        }
    }

    fn duals(&self, phase: Phase) -> DVector<f64> {
        let cb = DVector::from_iterator(self.m, self.basis.iter().map(|&j| self.cost(j, phase)));
        self.binv.tr_mul(&cb)
    }

    fn refactor(&mut self) -> Result<()> {
        let cols: Vec<DVector<f64>> = self.basis.iter().map(|&j| self.column(j)).collect();
        let b = DMatrix::from_columns(&cols);
        self.binv = b
            .lu()
            .try_inverse()
            .ok_or_else(|| Error::Lp("singular basis matrix".into()))?;
        let mut rhs = DVector::zeros(self.m);
        rhs[self.m - 1] = 1.0;
        self.xb = &self.binv * rhs;
        for v in self.xb.iter_mut() {
            if *v < 0.0 && *v > -1e-9 {
                *v = 0.0;
            }
        }
        self.since_refactor = 0;
        Ok(())
    }

    /// Reduced costs of the `u` and `v` columns.
    fn reduced_costs(&self, y: &DVector<f64>, phase: Phase) -> Vec<f64> {
        let k = self.m - 1;
        let ys = DVector::from_iterator(k, (0..k).map(|c| y[c] * self.scale[c]));
        let z = self.phi * ys;
        let t = y[k];
        let mut d = Vec::with_capacity(2 * self.n);
        for i in 0..self.n {
            d.push(self.cost(i, phase) - z[i] - t);
        }
        for i in 0..self.n {
            d.push(self.cost(self.n + i, phase) + z[i] - t);
        }
        d
    }

    fn pivot(&mut self, r: usize, j: usize, alpha: &DVector<f64>) {
        let theta = self.xb[r].max(0.0) / alpha[r];
        let pr = alpha[r];
        let row = self.binv.row(r) / pr;
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let a = alpha[i];
            if a != 0.0 {
                let upd = &row * a;
                let mut ri = self.binv.row_mut(i);
                ri -= upd;
                self.xb[i] -= theta * a;
                if self.xb[i] < 0.0 && self.xb[i] > -1e-13 {
                    self.xb[i] = 0.0;
                }
            }
        }
        self.binv.set_row(r, &row);
        self.xb[r] = theta;
        self.is_basic[self.basis[r]] = false;
        self.is_basic[j] = true;
        self.basis[r] = j;
        self.pivots += 1;
        self.since_refactor += 1;
    }

    /// Returns `true` when the phase stopped on a stall rather than on
    /// optimality.
    fn run(&mut self, phase: Phase, opts: &LpOptions) -> Result<bool> {
        let fscale = match phase {
            Phase::One => 1.0,
            Phase::Two => self.f.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(f64::MIN_POSITIVE),
        };
        let tol = match phase {
            Phase::One => 1e-11,
            Phase::Two => opts.opt_tol_rel * fscale,
        };
        let stall_limit = 20 * opts.bland_after.max(1) * self.m;
        let mut degenerate_streak = 0usize;
        let mut bland = false;
        let mut best_obj = f64::NEG_INFINITY;
        let mut since_gain = 0usize;
        let mut skipped: Vec<usize> = Vec::new();
        loop {
            if self.pivots > opts.max_pivots {
                return Err(Error::Lp(format!("no convergence after {} pivots", self.pivots)));
            }
            let obj: f64 = self.basis.iter().zip(self.xb.iter()).map(|(&b, &x)| self.cost(b, phase) * x).sum();
            if obj > best_obj + 1e-13 * fscale {
                best_obj = obj;
                since_gain = 0;
            } else {
                since_gain += 1;
                if since_gain > stall_limit {
                    return Ok(true);
                }
            }
            if self.since_refactor >= opts.refactor_every {
                self.refactor()?;
            }
            let y = self.duals(phase);
            let d = self.reduced_costs(&y, phase);
            let usable = |j: usize| !self.is_basic[j] && !skipped.contains(&j) && d[j] > tol;
            let entering = if bland {
                (0..2 * self.n).find(|&j| usable(j))
            } else {
                let mut best: Option<(usize, f64)> = None;
                for (j, &dj) in d.iter().enumerate() {
                    if usable(j) && best.map_or(true, |(_, b)| dj > b) {
                        best = Some((j, dj));
                    }
                }
                best.map(|(j, _)| j)
            };
            let Some(j) = entering else {
                return Ok(!skipped.is_empty());
            };
            let alpha = &self.binv * self.column(j);
            // Pivot elements are judged against the largest entry of the
            // column; columns offering only tiny pivots are skipped until
            // the basis changes.
            let amax = alpha.iter().fold(0.0f64, |m, a| m.max(a.abs()));
            let ptol = opts.pivot_tol.max(1e-9 * amax);
            if !alpha.iter().any(|&a| a > ptol) {
                skipped.push(j);
                continue;
            }
            let ratio = |r: usize| self.xb[r].max(0.0) / alpha[r];
            let eligible = |r: &usize| alpha[*r] > ptol;
            // Harris ratio test outside Bland mode: admit rows within
            // `HARRIS_DELTA` of the minimum ratio, take the largest pivot.
            let delta = if bland { 0.0 } else { HARRIS_DELTA };
            let bound = (0..self.m)
                .filter(eligible)
                .map(|r| (self.xb[r].max(0.0) + delta) / alpha[r])
                .fold(f64::INFINITY, f64::min);
            let mut leave: Option<(usize, f64)> = None;
            for r in (0..self.m).filter(eligible).filter(|&r| ratio(r) <= bound) {
                let better = match leave {
                    None => true,
                    Some((lr, _)) if bland => self.basis[r] < self.basis[lr],
                    Some((lr, _)) => alpha[r] > alpha[lr],
                };
                if better {
                    leave = Some((r, ratio(r)));
                }
            }
            let (r, theta) = leave.expect("an eligible row exists");
            if theta * d[j] <= 1e-13 * fscale {
                degenerate_streak += 1;
                if degenerate_streak > opts.bland_after {
                    bland = true;
                }
            } else {
                degenerate_streak = 0;
            }
            if bland {
                self.bland_pivots += 1;
            }
            self.pivot(r, j, &alpha);
            skipped.clear();
        }
    }

    /// Pivots zero-level artificials out of the basis after phase one.
    fn drive_out_artificials(&mut self, opts: &LpOptions) -> Result<()> {
        for r in 0..self.m {
            if !self.is_artificial(self.basis[r]) {
                continue;
            }
            let row = self.binv.row(r).clone_owned();
            let mut best: Option<(usize, f64)> = None;
            for j in 0..2 * self.n {
                if self.is_basic[j] {
                    continue;
                }
                let v = (&row * self.column(j))[0].abs();
                if v > opts.pivot_tol && best.map_or(true, |(_, b)| v > b) {
                    best = Some((j, v));
                }
            }
            let Some((j, _)) = best else {
                return Err(Error::Lp(format!("constraint row {r} is redundant on the points")));
            };
            let alpha = &self.binv * self.column(j);
            self.pivot(r, j, &alpha);
        }
        Ok(())
    }
}

/// Best uniform approximation of the values `f` by the columns of `phi`
/// (rows are points, columns basis functions). The columns are assumed
/// linearly independent on the points.
pub fn solve_minimax(phi: &DMatrix<f64>, f: &[f64], opts: &LpOptions) -> Result<MinimaxLp> {
    if phi.nrows() != f.len() || f.is_empty() {
        return Err(Error::Lp("point count mismatch or empty point set".into()));
    }
    let mut t = Tableau::new(phi, f);
    if t.run(Phase::One, opts)? {
        return Err(Error::Lp("phase one stalled".into()));
    }
    let infeas: f64 = t
        .basis
        .iter()
        .zip(t.xb.iter())
        .filter(|(&j, _)| t.is_artificial(j))
        .map(|(_, &x)| x)
        .sum();
    if infeas > 1e-9 {
        return Err(Error::Lp(format!("phase one left infeasibility {infeas:e}")));
    }
    t.drive_out_artificials(opts)?;
    t.refactor()?;
    let stalled = t.run(Phase::Two, opts)?;
    t.refactor()?;
    let y = t.duals(Phase::Two);
    let k = t.m - 1;
    let coefficients = (0..k).map(|c| y[c] * t.scale[c]).collect();
    let mut weights = vec![0.0; t.n];
    for (r, &j) in t.basis.iter().enumerate() {
        if j < t.n {
            weights[j] += t.xb[r];
        } else if j < 2 * t.n {
            weights[j - t.n] -= t.xb[r];
        }
    }
    let objective = weights.iter().zip(f).map(|(w, fi)| w * fi).sum();
    Ok(MinimaxLp {
        coefficients,
        level: y[k],
        objective,
        weights,
        pivots: t.pivots,
        bland_pivots: t.bland_pivots,
        stalled,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn interval_problem(deg: usize, f: impl Fn(f64) -> f64, npts: usize) -> (DMatrix<f64>, Vec<f64>, Vec<f64>) {
        let xs: Vec<f64> = (0..npts).map(|i| -1.0 + 2.0 * i as f64 / (npts - 1) as f64).collect();
        let phi = DMatrix::from_fn(npts, deg + 1, |i, k| xs[i].powi(k as i32));
        let fv = xs.iter().map(|&x| f(x)).collect();
        (phi, fv, xs)
    }

    #[test]
    fn square_by_lines() {
        let (phi, f, _) = interval_problem(1, |x| x * x, 101);
        let s = solve_minimax(&phi, &f, &LpOptions::default()).unwrap();
        assert!((s.level - 0.5).abs() < 1e-12, "{}", s.level);
        assert!((s.coefficients[0] - 0.5).abs() < 1e-12);
        assert!(s.coefficients[1].abs() < 1e-12);
        assert!((s.objective - s.level).abs() < 1e-12);
        let mass: f64 = s.weights.iter().map(|w| w.abs()).sum();
        assert!((mass - 1.0).abs() < 1e-12);
    }

    #[test]
    fn quartic_by_cubics() {
        let xs: Vec<f64> = (0..=40).map(|i| (std::f64::consts::PI * i as f64 / 40.0).cos()).collect();
        let phi = DMatrix::from_fn(xs.len(), 4, |i, k| xs[i].powi(k as i32));
        let f: Vec<f64> = xs.iter().map(|x| x.powi(4)).collect();
        let s = solve_minimax(&phi, &f, &LpOptions::default()).unwrap();
        assert!((s.level - 0.125).abs() < 1e-12, "{}", s.level);
    }

    #[test]
    fn exact_fit_has_zero_level() {
        let (phi, f, _) = interval_problem(2, |x| 3.0 * x * x - x + 2.0, 11);
        let s = solve_minimax(&phi, &f, &LpOptions::default()).unwrap();
        assert!(s.level.abs() < 1e-12);
        assert!((s.coefficients[2] - 3.0).abs() < 1e-10);
    }
}
