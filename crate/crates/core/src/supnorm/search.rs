use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{sample_domain, Domain, SearchOptions, SupNormReport};
use crate::error::{Error, Result};
use crate::poly::{Compiled, Differentiable, FPoly, Face};
use crate::symfun::{distinct_permutations, is_symmetric};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriticalPoint {
    pub point: Vec<f64>,
    pub value: f64,
    pub location: String,
}

/// A face of `T^d`: the variables outside `free` are zero, and with `on_sum`
/// the last free variable is eliminated through `Σ x_i = 1`. The chart
/// coordinates range over `T^k`, `k = dim()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceChart {
    pub d: usize,
    pub free: Vec<usize>,
    pub on_sum: bool,
}

impl FaceChart {
    pub fn dim(&self) -> usize {
        self.free.len() - usize::from(self.on_sum)
    }

    pub fn embed(&self, y: &[f64]) -> Vec<f64> {
        let k = self.dim();
        let mut x = vec![0.0; self.d];
        for (j, &i) in self.free.iter().take(k).enumerate() {
            x[i] = y[j];
        }
        if self.on_sum {
            x[self.free[k]] = 1.0 - y.iter().sum::<f64>();
        }
        x
    }

    pub fn chart_coords(&self, x: &[f64]) -> Vec<f64> {
        self.free.iter().take(self.dim()).map(|&i| x[i]).collect()
    }

    pub fn pull_back(&self, p: &FPoly) -> FPoly {
        let k = self.dim();
        let mut subs = vec![FPoly::zero(k); self.d];
        for (j, &i) in self.free.iter().take(k).enumerate() {
            subs[i] = FPoly::var(k, j);
        }
        if self.on_sum {
            let mut last = FPoly::one(k);
            for j in 0..k {
                last = &last - &FPoly::var(k, j);
            }
            subs[self.free[k]] = last;
        }
        p.compose(&subs).expect("one substitution per variable")
    }

    pub fn id(&self) -> String {
        let zeros: Vec<String> = (0..self.d)
            .filter(|i| !self.free.contains(i))
            .map(|i| format!("x{}", i + 1))
            .collect();
        let mut parts = Vec::new();
        if !zeros.is_empty() {
            parts.push(format!("{}=0", zeros.join("=")));
        }
        if self.on_sum {
            parts.push("sum=1".to_string());
        }
        if parts.is_empty() {
            "interior".to_string()
        } else {
            parts.join(",")
        }
    }

    pub fn in_relative_interior(&self, y: &[f64], tol: f64) -> bool {
        y.iter().all(|&v| v > tol) && y.iter().sum::<f64>() < 1.0 - tol
    }

    /// Every face of `T^d`, including the vertices.
    pub fn all(d: usize) -> Vec<FaceChart> {
        let mut out = Vec::new();
        for mask in 0u64..(1u64 << d) {
            let free: Vec<usize> = (0..d).filter(|i| mask >> i & 1 == 1).collect();
            out.push(FaceChart { d, free: free.clone(), on_sum: false });
            if !free.is_empty() {
                out.push(FaceChart { d, free, on_sum: true });
            }
        }
        out
    }

    /// One face per class under coordinate permutations.
    pub fn representatives(d: usize) -> Vec<FaceChart> {
        let mut out = Vec::new();
        for f in 0..=d {
            let free: Vec<usize> = (0..f).collect();
            out.push(FaceChart { d, free: free.clone(), on_sum: false });
            if f > 0 {
                out.push(FaceChart { d, free, on_sum: true });
            }
        }
        out
    }
}

/// Face id of a point of `dom`.
pub fn locate(dom: Domain, x: &[f64], zero_tol: f64) -> String {
    match dom {
        Domain::Simplex(d) | Domain::SimplexFace(d) => {
            let free: Vec<usize> = (0..d).filter(|&i| x[i].abs() > zero_tol).collect();
            let on_sum = matches!(dom, Domain::SimplexFace(_)) || (x.iter().sum::<f64>() - 1.0).abs() <= zero_tol;
            let on_sum = on_sum && !free.is_empty();
            FaceChart { d, free, on_sum }.id()
        }
        Domain::Ball(_) => {
            let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            if (n - 1.0).abs() <= zero_tol {
                "sphere".into()
            } else {
                "interior".into()
            }
        }
        Domain::Sphere(_) => "sphere".into(),
    }
}

fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Newton on `∇f = 0`. `None` on a singular Hessian, divergence or no
/// convergence.
pub(crate) fn newton_stationary(f: &Differentiable, x0: &[f64], max_iter: usize) -> Option<Vec<f64>> {
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut polished = false;
    for _ in 0..max_iter {
        let g = f.gradient(&x);
        let h = f.hessian(&x);
        let s = h.lu().solve(&DVector::from_iterator(n, g.iter().map(|v| -v)))?;
        for i in 0..n {
            x[i] += s[i];
        }
        if !x.iter().all(|v| v.is_finite()) || norm_inf(&x) > 1e3 {
            return None;
        }
        if norm_inf(s.as_slice()) <= 1e-12 * (1.0 + norm_inf(&x)) {
            if polished {
                return Some(x);
            }
            polished = true;
        }
    }
    (norm_inf(&f.gradient(&x)) <= 1e-9).then_some(x)
}

/// Newton on the Lagrange system `∇f = μ x`, `|x|^2 = 1`.
pub(crate) fn sphere_stationary(f: &Differentiable, x0: &[f64], max_iter: usize) -> Option<Vec<f64>> {
    let n = x0.len();
    let nrm = dot(x0, x0).sqrt();
    if nrm == 0.0 {
        return None;
    }
    let mut x: Vec<f64> = x0.iter().map(|v| v / nrm).collect();
    let mut mu = dot(&x, &f.gradient(&x));
    let mut polished = false;
    for _ in 0..max_iter {
        let g = f.gradient(&x);
        let h = f.hessian(&x);
        let mut j = DMatrix::zeros(n + 1, n + 1);
        let mut r = DVector::zeros(n + 1);
        for i in 0..n {
            r[i] = -(g[i] - mu * x[i]);
            for k in 0..n {
                j[(i, k)] = h[(i, k)];
            }
            j[(i, i)] -= mu;
            j[(i, n)] = -x[i];
            j[(n, i)] = x[i];
        }
        r[n] = -0.5 * (dot(&x, &x) - 1.0);
        let s = j.lu().solve(&r)?;
        for i in 0..n {
            x[i] += s[i];
        }
        mu += s[n];
        if !x.iter().all(|v| v.is_finite()) || norm_inf(&x) > 1e3 {
            return None;
        }
        if norm_inf(s.as_slice()) <= 1e-12 * (1.0 + mu.abs()) {
            if polished {
                break;
            }
            polished = true;
        }
    }
    let nrm = dot(&x, &x).sqrt();
    let x: Vec<f64> = x.iter().map(|v| v / nrm).collect();
    let g = f.gradient(&x);
    let mu = dot(&x, &g);
    let res: Vec<f64> = g.iter().zip(&x).map(|(gi, xi)| gi - mu * xi).collect();
    (norm_inf(&res) <= 1e-9 * (1.0 + mu.abs())).then_some(x)
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Uniform points of `T^k`.
fn simplex_starts(k: usize, count: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    (0..count)
        .map(|_| {
            let e: Vec<f64> = (0..=k).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
            let s: f64 = e.iter().sum();
            e[..k].iter().map(|v| v / s).collect()
        })
        .collect()
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

fn sphere_starts(d: usize, count: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    (0..count)
        .map(|_| {
            let v: Vec<f64> = (0..d).map(|_| gaussian(rng)).collect();
            let n = dot(&v, &v).sqrt().max(1e-300);
            v.iter().map(|x| x / n).collect()
        })
        .collect()
}

fn ball_starts(d: usize, count: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    sphere_starts(d, count, rng)
        .into_iter()
        .map(|v| {
            let r = rng.gen::<f64>().powf(1.0 / d as f64);
            v.iter().map(|x| x * r).collect()
        })
        .collect()
}

fn dedupe(points: Vec<Vec<f64>>, tol: f64) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for p in points {
        if !out.iter().any(|q| q.iter().zip(&p).all(|(a, b)| (a - b).abs() <= tol)) {
            out.push(p);
        }
    }
    out
}

/// Equalize coordinates closer than `tol` so that `distinct_permutations`
/// does not produce near-duplicates.
fn snap(x: &mut [f64], tol: f64) {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    for w in 1..idx.len() {
        if (x[idx[w]] - x[idx[w - 1]]).abs() <= tol {
            x[idx[w]] = x[idx[w - 1]];
        }
    }
    for v in x.iter_mut() {
        if v.abs() <= tol {
            *v = 0.0;
        }
    }
}

fn symmetric_enough(p: &FPoly) -> bool {
    is_symmetric(p, 1e-12 * p.max_abs_coeff().max(1.0))
}

/// Stationary points of `p` in the relative interior of every face of
/// `T^d` (vertices included). With `reps_only` and a symmetric `p`, one
/// point per permutation class is returned.
fn simplex_critical(p: &FPoly, d: usize, opts: &SearchOptions, reps_only: bool) -> Vec<Vec<f64>> {
    simplex_critical_on(p, d, opts, reps_only, &|_| true)
}

/// As `simplex_critical`, restricted to the faces accepted by `keep`.
pub(crate) fn simplex_critical_on(
    p: &FPoly,
    d: usize,
    opts: &SearchOptions,
    reps_only: bool,
    keep: &dyn Fn(&FaceChart) -> bool,
) -> Vec<Vec<f64>> {
    let symmetric = symmetric_enough(p);
    let faces = if symmetric {
        FaceChart::representatives(d)
    } else {
        FaceChart::all(d)
    };
    let mut found = Vec::new();
    for (fi, face) in faces.iter().enumerate() {
        if !keep(face) {
            continue;
        }
        let k = face.dim();
        if k == 0 {
            found.push(face.embed(&[]));
            continue;
        }
        let q = face.pull_back(p);
        if q.degree().unwrap_or(0) <= 1 {
            // Affine on the face: no isolated stationary points.
            continue;
        }
        let f = Differentiable::new(&q);
        let mut rng = rng_for(opts.seed, fi as u64);
        let starts = simplex_starts(k, opts.starts_per_dim * k, &mut rng);
        let pts: Vec<Vec<f64>> = starts
            .par_iter()
            .filter_map(|y0| newton_stationary(&f, y0, opts.max_newton_iter))
            .filter(|y| face.in_relative_interior(y, opts.zero_tol))
            .collect();
        let mut pts = dedupe(pts, opts.dedupe_tol);
        if symmetric {
            for y in pts.iter_mut() {
                y.sort_by(|a, b| a.total_cmp(b));
            }
            pts = dedupe(pts, opts.dedupe_tol);
        }
        found.extend(pts.iter().map(|y| face.embed(y)));
    }
    if symmetric && !reps_only {
        let mut all = Vec::new();
        for mut x in found {
            snap(&mut x, opts.dedupe_tol);
            all.extend(distinct_permutations(&x));
        }
        found = all;
    }
    found
}

fn ball_critical(p: &FPoly, d: usize, opts: &SearchOptions, interior: bool) -> Vec<Vec<f64>> {
    let f = Differentiable::new(p);
    let mut found = Vec::new();
    if interior && p.degree().unwrap_or(0) >= 2 {
        let mut rng = rng_for(opts.seed, 1);
        let starts = ball_starts(d, opts.starts_per_dim * d, &mut rng);
        let pts: Vec<Vec<f64>> = starts
            .par_iter()
            .filter_map(|x0| newton_stationary(&f, x0, opts.max_newton_iter))
            .filter(|x| dot(x, x).sqrt() < 1.0 - opts.zero_tol)
            .collect();
        found.extend(dedupe(pts, opts.dedupe_tol));
    }
    let mut rng = rng_for(opts.seed, 2);
    let starts = sphere_starts(d, opts.starts_per_dim * d.max(2), &mut rng);
    let pts: Vec<Vec<f64>> = starts
        .par_iter()
        .filter_map(|x0| sphere_stationary(&f, x0, opts.max_newton_iter))
        .collect();
    found.extend(dedupe(pts, opts.dedupe_tol));
    dedupe(found, opts.dedupe_tol)
}

fn face_chart_of(d: usize) -> FaceChart {
    FaceChart { d, free: (0..d).collect(), on_sum: true }
}

fn raw_critical(p: &FPoly, dom: Domain, opts: &SearchOptions, reps_only: bool) -> Vec<Vec<f64>> {
    match dom {
        Domain::Simplex(d) => simplex_critical(p, d, opts, reps_only),
        Domain::SimplexFace(d) => {
            if d == 1 {
                return vec![vec![1.0]];
            }
            let q = p.restrict_face(Face::AffineLast).expect("d >= 2");
            let chart = face_chart_of(d);
            simplex_critical(&q, d - 1, opts, reps_only && symmetric_enough(p))
                .iter()
                .map(|y| chart.embed(y))
                .collect()
        }
        Domain::Ball(d) => ball_critical(p, d, opts, true),
        Domain::Sphere(d) => ball_critical(p, d, opts, false),
    }
}

fn check_dims(p: &FPoly, dom: Domain) -> Result<()> {
    if p.nvars() != dom.dimension() {
        return Err(Error::DimensionMismatch {
            expected: dom.dimension(),
            got: p.nvars(),
        });
    }
    Ok(())
}

/// Multi-start stationary points of `p` on every stratum of `dom`, with
/// values. Deterministic in `opts.seed`, independent of the thread count.
pub fn critical_points(p: &FPoly, dom: Domain, opts: &SearchOptions) -> Result<Vec<CriticalPoint>> {
    check_dims(p, dom)?;
    Ok(attach(p, dom, raw_critical(p, dom, opts, false), opts))
}

/// Stationary points for exchange steps: with `reps_only`, one point per
/// permutation class when `p` is symmetric.
pub(crate) fn candidate_points(p: &FPoly, dom: Domain, opts: &SearchOptions, reps_only: bool) -> Result<Vec<CriticalPoint>> {
    check_dims(p, dom)?;
    Ok(attach(p, dom, raw_critical(p, dom, opts, reps_only), opts))
}

fn attach(p: &FPoly, dom: Domain, pts: Vec<Vec<f64>>, opts: &SearchOptions) -> Vec<CriticalPoint> {
    let c = Compiled::new(p);
    pts.into_iter()
        .map(|x| CriticalPoint {
            value: c.eval(&x),
            location: locate(dom, &x, opts.zero_tol),
            point: x,
        })
        .collect()
}

/// Euclidean projection onto `{x >= 0, Σ x <= 1}`.
fn project_simplex(x: &[f64]) -> Vec<f64> {
    let clipped: Vec<f64> = x.iter().map(|v| v.max(0.0)).collect();
    if clipped.iter().sum::<f64>() <= 1.0 {
        return clipped;
    }
    let mut u = x.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut css = 0.0;
    let mut theta = 0.0;
    for (i, &ui) in u.iter().enumerate() {
        css += ui;
        let t = (css - 1.0) / (i + 1) as f64;
        if ui - t > 0.0 {
            theta = t;
        }
    }
    x.iter().map(|v| (v - theta).max(0.0)).collect()
}

fn project(dom: Domain, x: &[f64]) -> Vec<f64> {
    match dom {
        Domain::Simplex(_) => project_simplex(x),
        Domain::Ball(_) => {
            let n = dot(x, x).sqrt();
            if n > 1.0 {
                x.iter().map(|v| v / n).collect()
            } else {
                x.to_vec()
            }
        }
        Domain::Sphere(_) => {
            let n = dot(x, x).sqrt().max(1e-300);
            x.iter().map(|v| v / n).collect()
        }
        Domain::SimplexFace(_) => unreachable!("face domains are refined in their chart"),
    }
}

/// Projected-gradient ascent of `|p|` from `x0`, then Newton on the face the
/// ascent ends on. Returns the point and whether the polish converged.
fn refine(p: &FPoly, f: &Differentiable, dom: Domain, x0: &[f64], opts: &SearchOptions) -> (Vec<f64>, bool) {
    let s = if f.eval(x0) >= 0.0 { 1.0 } else { -1.0 };
    let mut x = x0.to_vec();
    let mut fx = s * f.eval(&x);
    let mut t = 1e-2;
    for _ in 0..300 {
        let g = f.gradient(&x);
        let mut improved = false;
        while t > 1e-14 {
            let trial: Vec<f64> = x.iter().zip(&g).map(|(xi, gi)| xi + t * s * gi).collect();
            let trial = project(dom, &trial);
            let ft = s * f.eval(&trial);
            if ft > fx {
                improved = ft - fx > 1e-15 * fx.abs().max(1.0);
                x = trial;
                fx = ft;
                t *= 2.0;
                break;
            }
            t *= 0.5;
        }
        if !improved {
            break;
        }
    }
    let polished = match dom {
        Domain::Simplex(d) => {
            let free: Vec<usize> = (0..d).filter(|&i| x[i] > opts.zero_tol).collect();
            let on_sum = !free.is_empty() && (x.iter().sum::<f64>() - 1.0).abs() <= opts.zero_tol;
            let face = FaceChart { d, free, on_sum };
            if face.dim() == 0 {
                Some(face.embed(&[]))
            } else {
                let q = face.pull_back(p);
                let y0 = face.chart_coords(&x);
                newton_stationary(&Differentiable::new(&q), &y0, opts.max_newton_iter)
                    .filter(|y| face.in_relative_interior(y, -1e-9))
                    .map(|y| face.embed(&y))
            }
        }
        Domain::Ball(_) => {
            if dot(&x, &x).sqrt() >= 1.0 - opts.zero_tol {
                sphere_stationary(f, &x, opts.max_newton_iter)
            } else {
                newton_stationary(f, &x, opts.max_newton_iter).filter(|y| dot(y, y) <= 1.0)
            }
        }
        Domain::Sphere(_) => sphere_stationary(f, &x, opts.max_newton_iter),
        Domain::SimplexFace(_) => unreachable!(),
    };
    match polished {
        Some(y) if s * f.eval(&y) >= fx - 1e-12 * fx.abs().max(1.0) => (y, true),
        _ => (x, false),
    }
}

/// Lattice maximum of `|p|`, refined by projected-gradient ascent and Newton
/// on the active face, and compared with all multi-start stationary values.
/// For symmetric `p` on the simplex the reported critical points are one per
/// permutation class.
pub fn sup_norm(p: &FPoly, dom: Domain, resolution: usize, opts: &SearchOptions) -> Result<SupNormReport> {
    check_dims(p, dom)?;
    if let Domain::SimplexFace(d) = dom {
        if d >= 2 {
            let q = p.restrict_face(Face::AffineLast)?;
            let mut r = sup_norm(&q, Domain::Simplex(d - 1), resolution, opts)?;
            let chart = face_chart_of(d);
            r.argmax = chart.embed(&r.argmax);
            r.location = locate(dom, &r.argmax, opts.zero_tol);
            for c in r.critical_points.iter_mut() {
                c.point = chart.embed(&c.point);
                c.location = locate(dom, &c.point, opts.zero_tol);
            }
            return Ok(r);
        }
    }
    let c = Compiled::new(p);
    let grid = sample_domain(dom, resolution);
    let vals: Vec<f64> = grid.par_iter().map(|x| c.eval(x).abs()).collect();
    let mut order: Vec<usize> = (0..grid.len()).collect();
    order.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]).then(a.cmp(&b)));
    let (grid_arg, grid_value) = order
        .first()
        .map(|&i| (grid[i].clone(), vals[i]))
        .unwrap_or((vec![0.0; dom.dimension()], 0.0));

    let f = Differentiable::new(p);
    let refined: Vec<(Vec<f64>, bool)> = order
        .iter()
        .take(opts.refine_top)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&&i| refine(p, &f, dom, &grid[i], opts))
        .collect();
    let failures = refined.iter().filter(|(_, ok)| !ok).count();

    let crit = attach(p, dom, raw_critical(p, dom, opts, true), opts);
    let mut best = (grid_arg, grid_value);
    let candidates = refined
        .iter()
        .map(|(x, _)| (x.clone(), c.eval(x).abs()))
        .chain(crit.iter().map(|cp| (cp.point.clone(), cp.value.abs())));
    for (x, v) in candidates {
        if v > best.1 && dom.contains(&x, 1e-12) {
            best = (x, v);
        }
    }
    Ok(SupNormReport {
        value: best.1,
        location: locate(dom, &best.0, opts.zero_tol),
        argmax: best.0,
        critical_points: crit,
        grid_resolution: resolution,
        grid_value,
        refinement_failures: failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_u3, r3};
    use crate::poly::FPoly;

    fn opts() -> SearchOptions {
        SearchOptions::default()
    }

    #[test]
    fn face_ids() {
        assert_eq!(FaceChart { d: 3, free: vec![0, 1, 2], on_sum: false }.id(), "interior");
        assert_eq!(FaceChart { d: 3, free: vec![0, 1], on_sum: true }.id(), "x3=0,sum=1");
        assert_eq!(FaceChart::all(3).len(), 15);
        assert_eq!(FaceChart::representatives(3).len(), 7);
    }

    #[test]
    fn chart_pull_back_matches_restriction() {
        let p = r3().to_f64();
        let face = FaceChart { d: 3, free: vec![0, 1, 2], on_sum: true };
        let q = face.pull_back(&p);
        assert!(q.approx_eq(&p.restrict_face(Face::AffineLast).unwrap(), 1e-12));
    }

    #[test]
    fn r3_has_four_interior_critical_points() {
        let p = r3().to_f64();
        let cps = critical_points(&p, Domain::Simplex(3), &opts()).unwrap();
        let interior: Vec<_> = cps.iter().filter(|c| c.location == "interior").collect();
        assert_eq!(interior.len(), 4, "{interior:?}");
        assert!(interior.iter().all(|c| c.value.abs() < 1.0));
    }

    #[test]
    fn u3_interior_critical_points() {
        let p = build_u3().to_f64();
        let cps = critical_points(&p, Domain::Simplex(2), &opts()).unwrap();
        let interior: Vec<_> = cps.iter().filter(|c| c.location == "interior").collect();
        assert_eq!(interior.len(), 4, "{interior:?}");
        let center = interior
            .iter()
            .find(|c| c.point.iter().all(|v| (v - 1.0 / 3.0).abs() < 1e-9))
            .expect("center is critical");
        assert!((center.value - 1.0).abs() < 1e-12);
        assert!(interior.iter().filter(|c| c.value.abs() >= 1.0 - 1e-9).count() == 1);
    }

    #[test]
    fn sup_of_r3_is_one() {
        let r = sup_norm(&r3().to_f64(), Domain::Simplex(3), 12, &opts()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-9, "{}", r.value);
    }

    #[test]
    fn sup_of_constant() {
        let r = sup_norm(&FPoly::constant(2, 1.0), Domain::Simplex(2), 3, &opts()).unwrap();
        assert_eq!(r.value, 1.0);
        let r = sup_norm(&FPoly::constant(3, -1.0), Domain::Ball(3), 3, &opts()).unwrap();
        assert_eq!(r.value, 1.0);
    }

    #[test]
    fn sphere_product_values() {
        for d in 3..=6 {
            let mut p = FPoly::one(d);
            for i in 0..d {
                p = &p * &FPoly::var(d, i);
            }
            let r = sup_norm(&p, Domain::Sphere(d), 4, &opts()).unwrap();
            let expected = (d as f64).powf(-(d as f64) / 2.0);
            assert!((r.value - expected).abs() < 1e-8, "d={d} {}", r.value);
        }
    }

    #[test]
    fn interval_chebyshev() {
        let t4 = crate::symfun::chebyshev_univariate::<f64>(4);
        let r = sup_norm(&t4, Domain::Ball(1), 7, &opts()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn projection_onto_simplex() {
        let p = project_simplex(&[0.8, 0.8, -0.1]);
        assert!((p[0] - 0.5).abs() < 1e-15 && (p[1] - 0.5).abs() < 1e-15 && p[2] == 0.0);
        assert_eq!(project_simplex(&[0.2, -0.3]), vec![0.2, 0.0]);
    }

    #[test]
    fn grid_monotone_in_resolution() {
        let p = r3().to_f64();
        let c = Compiled::new(&p);
        let gmax = |m| {
            sample_domain(Domain::Simplex(3), m)
                .iter()
                .map(|x| c.eval(x).abs())
                .fold(0.0, f64::max)
        };
        for m in 1..8 {
            assert!(gmax(2 * m) >= gmax(m) - 1e-12);
        }
    }
}
