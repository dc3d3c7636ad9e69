//! Uniform best approximation `E_n(f; Ω)` by discrete minimax and exchange.
//!
//! The LP value on any finite subset of `Ω` bounds `E` from below; the sup
//! of the residual over `Ω` (critical-point search) bounds the achieved
//! approximant from above. Both are always reported.

mod basis;
mod checks;
mod lp;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

pub use basis::{invariant_basis, BasisFunction, BasisKind};
pub use checks::{dependent_columns, equioscillation_count};
pub use lp::{solve_minimax, LpOptions, MinimaxLp};

use crate::constructions::{lift_to_ball, monomial_target};
use crate::error::{Error, Result};
use crate::poly::{Compiled, FPoly};
use crate::supnorm::{candidate_points, sample_domain, Domain, SearchOptions};
use crate::symfun::is_symmetric;

const RANK_TOL: f64 = 1e-10;
const EQUI_TOL: f64 = 1e-8;
/// A new point closer than this to an existing one replaces it; near-equal
/// rows make the LP basis singular.
const ADJOIN_TOL: f64 = 1e-6;
/// Exchange rounds without a better upper bound before giving up.
const STALE_ROUNDS: usize = 4;

#[derive(Clone, Debug)]
pub struct ApproxProblem {
    pub target: FPoly,
    /// Degree of the approximating space.
    pub degree: u32,
    pub domain: Domain,
    pub basis: BasisKind,
    pub grid: usize,
    /// Drop basis functions that are dependent on the grid instead of failing.
    pub drop_dependent: bool,
}

impl ApproxProblem {
    pub fn new(target: FPoly, degree: u32, domain: Domain, basis: BasisKind, grid: usize) -> Self {
        ApproxProblem {
            target,
            degree,
            domain,
            basis,
            grid,
            drop_dependent: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.target.nvars() != self.domain.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.domain.dimension(),
                got: self.target.nvars(),
            });
        }
        if self.grid == 0 {
            return Err(Error::InvalidArgument("grid resolution must be positive".into()));
        }
        let symmetric = matches!(self.basis, BasisKind::Symmetric | BasisKind::EvenSymmetric);
        let even = matches!(self.basis, BasisKind::Even | BasisKind::EvenSymmetric);
        if symmetric && !is_symmetric(&self.target, 1e-12) {
            return Err(Error::InvalidArgument(format!(
                "{} basis needs a symmetric target",
                self.basis.as_str()
            )));
        }
        if even {
            if matches!(self.domain, Domain::Simplex(_) | Domain::SimplexFace(_)) {
                return Err(Error::InvalidArgument(format!(
                    "{} basis needs a domain symmetric under sign changes",
                    self.basis.as_str()
                )));
            }
            if !self.target.terms().all(|(m, _)| m.is_even()) {
                return Err(Error::InvalidArgument(format!(
                    "{} basis needs a target even in every variable",
                    self.basis.as_str()
                )));
            }
        }
        Ok(())
    }

    fn to_json(&self) -> Value {
        json!({
            "target": self.target.to_json(),
            "degree": self.degree,
            "domain": self.domain,
            "basis": self.basis,
            "grid": self.grid,
            "drop_dependent": self.drop_dependent,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidualExtremum {
    pub point: Vec<f64>,
    pub sign: i8,
    /// Mass of the discrete signature at this point.
    pub weight: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExchangeStep {
    pub iteration: usize,
    pub points: usize,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Clone, Debug)]
pub struct ApproxResult {
    pub problem: ApproxProblem,
    pub coefficients: Vec<f64>,
    pub basis_names: Vec<String>,
    pub approximant: FPoly,
    /// Largest LP value seen: a lower bound for `E`.
    pub deviation: f64,
    /// Sup of the residual over the domain (search-based), when computed.
    pub deviation_upper: Option<f64>,
    pub residual_extrema: Vec<ResidualExtremum>,
    pub iterations: usize,
    pub history: Vec<ExchangeStep>,
    pub converged: bool,
    pub equioscillation_points: usize,
    pub dropped: Vec<String>,
    pub point_count: usize,
    pub lp_pivots: usize,
}

impl ApproxResult {
    pub fn gap(&self) -> Option<f64> {
        self.deviation_upper.map(|u| u - self.deviation)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "problem": self.problem.to_json(),
            "deviation_lower": self.deviation,
            "deviation_upper": self.deviation_upper,
            "coefficients": self.basis_names.iter().zip(&self.coefficients)
                .map(|(n, c)| json!({"function": n, "value": c})).collect::<Vec<_>>(),
            "extrema": self.residual_extrema,
            "iterations": self.iterations,
            "converged": self.converged,
            "history": self.history,
            "equioscillation_points": self.equioscillation_points,
            "dropped": self.dropped,
            "point_count": self.point_count,
        })
    }
}

struct Assembled {
    basis: Vec<BasisFunction<f64>>,
    compiled: Vec<Compiled>,
    dropped: Vec<String>,
}

fn assemble(prob: &ApproxProblem, points: &[Vec<f64>]) -> Result<Assembled> {
    let mut basis = invariant_basis::<f64>(prob.degree, prob.domain.dimension(), prob.basis);
    let compiled: Vec<Compiled> = basis.iter().map(|b| Compiled::new(&b.poly)).collect();
    let phi = design_matrix(&compiled, points);
    let dep = dependent_columns(&phi, RANK_TOL);
    let mut dropped = Vec::new();
    if let Some(&first) = dep.first() {
        if !prob.drop_dependent {
            return Err(Error::DependentBasis {
                index: first,
                name: basis[first].name.clone(),
            });
        }
        for &j in dep.iter().rev() {
            dropped.push(basis.remove(j).name);
        }
        dropped.reverse();
    }
    let compiled = basis.iter().map(|b| Compiled::new(&b.poly)).collect();
    Ok(Assembled {
        basis,
        compiled,
        dropped,
    })
}

fn design_matrix(compiled: &[Compiled], points: &[Vec<f64>]) -> DMatrix<f64> {
    let rows: Vec<Vec<f64>> = points
        .par_iter()
        .map(|x| compiled.iter().map(|c| c.eval(x)).collect())
        .collect();
    DMatrix::from_fn(points.len(), compiled.len(), |i, k| rows[i][k])
}

struct Solved {
    lp: MinimaxLp,
    approximant: FPoly,
    residuals: Vec<f64>,
}

fn solve_on(prob: &ApproxProblem, asm: &Assembled, points: &[Vec<f64>]) -> Result<Solved> {
    let target = Compiled::new(&prob.target);
    let f: Vec<f64> = points.par_iter().map(|x| target.eval(x)).collect();
    let phi = design_matrix(&asm.compiled, points);
    let lp = solve_minimax(&phi, &f, &LpOptions::default())?;
    let mut approximant = FPoly::zero(prob.domain.dimension());
    for (b, c) in asm.basis.iter().zip(&lp.coefficients) {
        approximant = approximant.try_add(&b.poly.scale(c))?;
    }
    let fitted = &phi * nalgebra::DVector::from_column_slice(&lp.coefficients);
    let residuals = f.iter().zip(fitted.iter()).map(|(a, b)| a - b).collect();
    Ok(Solved {
        lp,
        approximant,
        residuals,
    })
}

fn finish(
    prob: &ApproxProblem,
    asm: &Assembled,
    points: &[Vec<f64>],
    s: Solved,
    upper: Option<f64>,
    iterations: usize,
    history: Vec<ExchangeStep>,
    converged: bool,
) -> ApproxResult {
    let deviation = s.lp.objective.max(0.0);
    let wmax = s.lp.weights.iter().fold(0.0f64, |a, w| a.max(w.abs()));
    let residual_extrema = points
        .iter()
        .zip(&s.lp.weights)
        .filter(|(_, w)| w.abs() > 1e-10 * wmax)
        .map(|(x, &w)| ResidualExtremum {
            point: x.clone(),
            sign: if w > 0.0 { 1 } else { -1 },
            weight: w.abs(),
        })
        .collect();
    ApproxResult {
        problem: prob.clone(),
        coefficients: s.lp.coefficients.clone(),
        basis_names: asm.basis.iter().map(|b| b.name.clone()).collect(),
        approximant: s.approximant,
        deviation,
        deviation_upper: upper,
        residual_extrema,
        iterations,
        history,
        converged,
        equioscillation_points: equioscillation_count(&s.residuals, deviation, EQUI_TOL),
        dropped: asm.dropped.clone(),
        point_count: points.len(),
        lp_pivots: s.lp.pivots,
    }
}

/// Minimax on the lattice of `prob.grid` only.
pub fn discrete_minimax(prob: &ApproxProblem) -> Result<ApproxResult> {
    prob.validate()?;
    let points = initial_points(prob);
    let asm = assemble(prob, &points)?;
    let s = solve_on(prob, &asm, &points)?;
    Ok(finish(prob, &asm, &points, s, None, 1, Vec::new(), true))
}

fn residual_sup(
    residual: &FPoly,
    prob: &ApproxProblem,
    opts: &SearchOptions,
    lattice_max: f64,
) -> Result<(f64, Vec<(Vec<f64>, f64)>)> {
    let reps_only = matches!(prob.basis, BasisKind::Symmetric | BasisKind::EvenSymmetric);
    let cands = candidate_points(residual, prob.domain, opts, reps_only)?;
    let sup = cands.iter().fold(lattice_max, |a, c| a.max(c.value.abs()));
    Ok((sup, cands.into_iter().map(|c| (c.point, c.value.abs())).collect()))
}

/// Exchange iteration: solve on the current points, adjoin the continuum
/// maxima of the residual, repeat. Stops when the gap between the LP value
/// and the residual sup is below `1e-10` relative, when no new points turn
/// up, when the sup has not improved for a few rounds, or after `max_iter`
/// rounds. The iterate with the smallest sup is returned; `converged` says
/// whether the gap closed.
pub fn remez_exchange(prob: &ApproxProblem, max_iter: usize, opts: &SearchOptions) -> Result<ApproxResult> {
    prob.validate()?;
    let mut points = initial_points(prob);
    let asm = assemble(prob, &points)?;
    let mut history = Vec::new();
    let mut best: Option<(Solved, f64, Vec<Vec<f64>>, usize)> = None;
    let mut converged = false;
    let mut stale = 0usize;
    let mut lower_best = 0.0f64;
    for it in 1..=max_iter.max(1) {
        let s = solve_on(prob, &asm, &points)?;
        let lower = s.lp.objective.max(0.0);
        let lattice_max = s.residuals.iter().fold(0.0f64, |a, r| a.max(r.abs()));
        let residual = prob.target.try_sub(&s.approximant)?;
        let (upper, cands) = residual_sup(&residual, prob, opts, lattice_max)?;
        history.push(ExchangeStep {
            iteration: it,
            points: points.len(),
            lower,
            upper,
        });
        lower_best = lower_best.max(lower);
        let upper_best = best.as_ref().map_or(upper, |b| b.1.min(upper));
        let done = upper_best - lower_best <= 1e-10 * upper_best || upper_best <= 1e-13;
        let improved = best.as_ref().map_or(true, |b| upper < b.1 - 1e-3 * (b.1 - lower).max(0.0));
        if improved {
            stale = 0;
        } else {
            stale += 1;
        }
        let snapshot = if best.as_ref().map_or(true, |b| upper <= b.1) {
            Some(points.clone())
        } else {
            None
        };
        let mut added = 0usize;
        if !done {
            for (x, v) in &cands {
                if *v <= lower * (1.0 + 1e-13) {
                    continue;
                }
                let x = &canonical(x, prob.basis);
                let (i, dist) = points
                    .iter()
                    .enumerate()
                    .map(|(i, q)| (i, dist_inf(q, x)))
                    .min_by(|a, b| a.1.total_cmp(&b.1))
                    .expect("nonempty point set");
                if dist <= 1e-13 {
                    continue;
                }
                if dist <= ADJOIN_TOL {
                    points[i] = x.clone();
                } else {
                    points.push(x.clone());
                }
                added += 1;
            }
        }
        if let Some(pts) = snapshot {
            best = Some((s, upper, pts, it));
        }
        if done {
            converged = true;
            break;
        }
        if added == 0 || stale >= STALE_ROUNDS {
            break;
        }
    }
    let (s, upper, pts, it) = best.expect("at least one iteration");
    let iterations = history.len();
    let mut r = finish(prob, &asm, &pts, s, Some(upper), iterations, history, converged);
    // Every LP value is a lower bound; the best one may come from another
    // iterate than the best approximant.
    r.deviation = r.deviation.max(lower_best);
    r.iterations = iterations.max(it);
    Ok(r)
}

/// One representative per class of points the basis and target cannot tell
/// apart: sorted for symmetric kinds, absolute values for even kinds.
fn canonical(x: &[f64], kind: BasisKind) -> Vec<f64> {
    let mut y = x.to_vec();
    if matches!(kind, BasisKind::Even | BasisKind::EvenSymmetric) {
        y.iter_mut().for_each(|v| *v = v.abs());
    }
    if matches!(kind, BasisKind::Symmetric | BasisKind::EvenSymmetric) {
        y.sort_by(|a, b| b.total_cmp(a));
    }
    y
}

fn initial_points(prob: &ApproxProblem) -> Vec<Vec<f64>> {
    let mut pts: Vec<Vec<f64>> = sample_domain(prob.domain, prob.grid)
        .iter()
        .map(|x| canonical(x, prob.basis))
        .collect();
    if prob.basis != BasisKind::Full {
        pts.sort_by(|a, b| a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal));
        pts.dedup();
    }
    pts
}

fn dist_inf(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

#[derive(Clone, Debug, Serialize)]
pub struct SideSummary {
    pub domain: Domain,
    pub degree: u32,
    pub basis: BasisKind,
    pub deviation: f64,
    pub deviation_upper: Option<f64>,
    pub converged: bool,
    pub iterations: usize,
}

impl SideSummary {
    fn of(r: &ApproxResult) -> Self {
        SideSummary {
            domain: r.problem.domain,
            degree: r.problem.degree,
            basis: r.problem.basis,
            deviation: r.deviation,
            deviation_upper: r.deviation_upper,
            converged: r.converged,
            iterations: r.iterations,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CandidateComparison {
    pub label: String,
    pub value: f64,
    /// `ball deviation - value`.
    pub offset: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorrespondenceReport {
    pub alpha: Vec<u32>,
    pub simplex: SideSummary,
    pub ball: SideSummary,
    /// `ball - simplex`.
    pub difference: f64,
    pub candidates: Vec<CandidateComparison>,
    /// Candidate closest to the ball value.
    pub supported: String,
}

/// `E(x^α; T^d)` from degree `|α| - 1` against `E(x^{2α}; B^d)` from degree
/// `2|α| - 1`, both by exchange. Symmetric bases are used when all exponents
/// agree.
pub fn verify_correspondence(alpha: &[u32], grid: usize, opts: &SearchOptions) -> Result<CorrespondenceReport> {
    let total: u32 = alpha.iter().sum();
    if total == 0 || alpha.is_empty() {
        return Err(Error::InvalidArgument("exponent must have positive total degree".into()));
    }
    let d = alpha.len();
    let symmetric = alpha.iter().all(|&a| a == alpha[0]);
    let f = monomial_target::<f64>(alpha);
    let (sb, bb) = if symmetric {
        (BasisKind::Symmetric, BasisKind::EvenSymmetric)
    } else {
        (BasisKind::Full, BasisKind::Even)
    };
    let sp = ApproxProblem::new(f.clone(), total - 1, Domain::Simplex(d), sb, grid);
    let bp = ApproxProblem::new(lift_to_ball(&f), 2 * total - 1, Domain::Ball(d), bb, grid);
    let s = remez_exchange(&sp, 30, opts)?;
    let b = remez_exchange(&bp, 30, opts)?;
    let candidates: Vec<CandidateComparison> = [
        ("72^-1", 1.0 / 72.0),
        ("72^-2", 1.0 / 5184.0),
        ("2^-6*3^-2", 1.0 / 576.0),
    ]
    .into_iter()
    .map(|(label, value)| CandidateComparison {
        label: label.into(),
        value,
        offset: b.deviation - value,
    })
    .collect();
    let supported = candidates
        .iter()
        .min_by(|x, y| x.offset.abs().total_cmp(&y.offset.abs()))
        .map(|c| c.label.clone())
        .unwrap_or_default();
    Ok(CorrespondenceReport {
        alpha: alpha.to_vec(),
        difference: b.deviation - s.deviation,
        simplex: SideSummary::of(&s),
        ball: SideSummary::of(&b),
        candidates,
        supported,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MixedMonomialReport {
    pub k: u32,
    pub n: u32,
    pub deviation: f64,
    pub deviation_upper: Option<f64>,
    pub expected: f64,
    pub within: bool,
}

/// `E(x1^k x2^{n-k}; B^3)` from degree `n - 1` against `2^{1-n}`.
pub fn ball_mixed_monomial_check(k: u32, n: u32, grid: usize, opts: &SearchOptions) -> Result<MixedMonomialReport> {
    if k == 0 || k >= n || n > 4 {
        return Err(Error::InvalidArgument(format!("need 1 <= k <= n-1 and n <= 4, got k={k}, n={n}")));
    }
    let f = monomial_target::<f64>(&[k, n - k, 0]);
    let prob = ApproxProblem::new(f, n - 1, Domain::Ball(3), BasisKind::Full, grid);
    let r = remez_exchange(&prob, 30, opts)?;
    let expected = 2f64.powi(1 - n as i32);
    Ok(MixedMonomialReport {
        k,
        n,
        deviation: r.deviation,
        deviation_upper: r.deviation_upper,
        expected,
        within: (r.deviation - expected).abs() <= 1e-4,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Monomial;

    fn mono(e: &[u32]) -> FPoly {
        FPoly::monomial(Monomial::new(e.to_vec()), 1.0)
    }

    #[test]
    fn square_on_interval() {
        let p = ApproxProblem::new(mono(&[2]), 1, Domain::Ball(1), BasisKind::Full, 50);
        let r = discrete_minimax(&p).unwrap();
        assert!((r.deviation - 0.5).abs() < 1e-10);
        assert!((r.coefficients[0] - 0.5).abs() < 1e-10);
        assert!(r.equioscillation_points >= 3);
    }

    #[test]
    fn quartic_on_interval_by_exchange() {
        let p = ApproxProblem::new(mono(&[4]), 3, Domain::Ball(1), BasisKind::Full, 7);
        let r = remez_exchange(&p, 30, &SearchOptions::default()).unwrap();
        assert!((r.deviation - 0.125).abs() < 1e-10, "{r:?}");
        assert!(r.converged);
    }

    #[test]
    fn triple_product_on_simplex() {
        let p = ApproxProblem::new(mono(&[1, 1, 1]), 2, Domain::Simplex(3), BasisKind::Symmetric, 32);
        let r = discrete_minimax(&p).unwrap();
        assert!(r.deviation <= 1.0 / 72.0 + 1e-10 && r.deviation >= 1.0 / 72.0 - 5e-4);
        let r = remez_exchange(&p, 30, &SearchOptions::default()).unwrap();
        assert!(r.converged);
        assert!(r.gap().unwrap() < 1e-8);
        assert!((r.deviation - 1.0 / 72.0).abs() < 1e-9);
    }

    #[test]
    fn symmetric_restriction_is_lossless() {
        let f = mono(&[1, 1, 1]);
        let a = discrete_minimax(&ApproxProblem::new(f.clone(), 2, Domain::Simplex(3), BasisKind::Full, 12)).unwrap();
        let b = discrete_minimax(&ApproxProblem::new(f, 2, Domain::Simplex(3), BasisKind::Symmetric, 12)).unwrap();
        assert!((a.deviation - b.deviation).abs() < 1e-8);
    }

    #[test]
    fn invariance_is_validated() {
        let p = ApproxProblem::new(mono(&[2, 1, 0]), 2, Domain::Simplex(3), BasisKind::Symmetric, 8);
        assert!(discrete_minimax(&p).is_err());
        let p = ApproxProblem::new(mono(&[2, 2, 2]), 5, Domain::Simplex(3), BasisKind::Even, 8);
        assert!(discrete_minimax(&p).is_err());
    }

    #[test]
    fn dependent_basis_is_named() {
        // x^2 + y^2 = 1 on the circle.
        let p = ApproxProblem::new(mono(&[1, 1]), 2, Domain::Sphere(2), BasisKind::Full, 20);
        match discrete_minimax(&p) {
            Err(Error::DependentBasis { name, .. }) => assert_eq!(name, "x2^2"),
            other => panic!("{other:?}"),
        }
        let mut p = p;
        p.drop_dependent = true;
        let r = discrete_minimax(&p).unwrap();
        assert_eq!(r.dropped, ["x2^2"]);
        assert!(r.deviation < 1e-10);
    }

    #[test]
    fn sphere_product_needs_no_approximant() {
        let mut p = ApproxProblem::new(mono(&[1, 1, 1]), 2, Domain::Sphere(3), BasisKind::Symmetric, 24);
        p.drop_dependent = true;
        let r = remez_exchange(&p, 30, &SearchOptions::default()).unwrap();
        let expect = 3f64.powf(-1.5);
        assert!((r.deviation - expect).abs() < 1e-8, "{}", r.deviation);
        assert!(r.coefficients.iter().all(|c| c.abs() < 1e-6), "{:?}", r.coefficients);
    }
}
