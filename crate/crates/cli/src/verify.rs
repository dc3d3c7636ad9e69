use std::path::Path;

use chebydev_core::constructions::{
    build_td, derive_r5_constants, j_kd, t3_at_uniform, t3_at_uniform_closed, R5Constants,
};
use chebydev_core::signatures::{
    annihilation_residual, build_l_functional, certify_lower_bound, check_annihilation, combi_identity,
    cubature_check, r5_certificate, r5_cubature_check, td_certificate,
};
use chebydev_core::supnorm::{d5_claimed_factorization, dd_determinant, verify_td_bound, SearchOptions, VandermondeDivision};
use chebydev_core::{Coeff, QPoly, Rational};
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::report::{envelope, write_json, Failure};
use crate::{Suite, VerifyArgs};

/// Largest `d` for which the bordered determinant is expanded outside `d = 5`.
const MAX_DETERMINANT_D: usize = 7;

pub fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("not a dimension: {t:?}"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let d = num(s)?;
            (d, d)
        }
    };
    if lo > hi {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok((lo, hi))
}

struct Check {
    name: String,
    pass: bool,
    /// Non-asserting checks are reported but never fail the run.
    asserted: bool,
    residual: Option<f64>,
    detail: Value,
}

impl Check {
    fn new(name: impl Into<String>, pass: bool) -> Self {
        Check { name: name.into(), pass, asserted: true, residual: None, detail: Value::Null }
    }

    fn residual(mut self, r: f64) -> Self {
        self.residual = Some(r);
        self
    }

    fn detail(mut self, v: Value) -> Self {
        self.detail = v;
        self
    }

    fn informational(mut self) -> Self {
        self.asserted = false;
        self
    }

    fn to_json(&self) -> Value {
        let mut v = json!({"name": self.name, "pass": self.pass, "asserted": self.asserted});
        if let Some(r) = self.residual {
            v["residual"] = json!(r);
        }
        if !self.detail.is_null() {
            v["detail"] = self.detail.clone();
        }
        v
    }
}

struct Ctx<'a> {
    args: &'a VerifyArgs,
    opts: SearchOptions,
    r5: Option<R5Constants>,
}

impl Ctx<'_> {
    fn dims(&self) -> impl Iterator<Item = usize> {
        self.args.d.0..=self.args.d.1
    }

    fn resolution(&self, d: usize) -> usize {
        self.args.resolution.unwrap_or(if d <= 5 { 24 } else { 16 })
    }
}

fn sign(d: usize) -> i64 {
    if d % 2 == 1 {
        1
    } else {
        -1
    }
}

fn signature(cx: &Ctx) -> Result<Vec<Check>, Failure> {
    let mut out = Vec::new();
    for d in cx.dims() {
        let cert = td_certificate(d)?;
        let o = certify_lower_bound(&cert, 0.0);
        out.push(
            Check::new(format!("T_{d} certificate"), o.certified)
                .residual(o.annihilation_residual)
                .detail(json!({"level": cert.level.to_string(), "support": cert.support.len()})),
        );
        let l = build_l_functional(d)?;
        let n = d as u32 - 1;
        out.push(
            Check::new(format!("L_{d} annihilates degree {n}"), check_annihilation(&l, n, 0.0))
                .residual(annihilation_residual(&l, n).to_f64()),
        );
        if d == 3 {
            if let Some(k) = &cx.r5 {
                let cert = r5_certificate(k, 5)?;
                let o = certify_lower_bound(&cert, cx.args.tol);
                out.push(
                    Check::new("R_5 certificate", o.certified)
                        .residual(o.max_level_residual.max(o.annihilation_residual))
                        .detail(json!({"lower_bound": o.lower_bound, "tol": cx.args.tol})),
                );
            }
        }
    }
    Ok(out)
}

fn supnorm(cx: &Ctx) -> Result<Vec<Check>, Failure> {
    let mut out = Vec::new();
    for d in cx.dims() {
        let res = cx.resolution(d);
        let r = verify_td_bound(d, res, &cx.opts)?;
        let mut c = Check::new(format!("max |T_{d}| on the simplex is 1"), r.within_bound)
            .residual(r.max_abs - 1.0)
            .detail(json!({
                "max_abs": r.max_abs,
                "argmax": r.argmax,
                "location": r.location,
                "interior_max": r.interior_max,
                "coordinate_faces_max": r.coordinate_faces_max,
                "sum_face_max": r.sum_face_max,
                "face_identity_exact": r.face_identity_exact,
                "conjecture_mode": r.conjecture_mode,
                "resolution": res,
                "tol": r.tol,
            }));
        if r.conjecture_mode {
            c = c.informational();
        }
        out.push(c);
    }
    Ok(out)
}

fn laplacian(cx: &Ctx) -> Result<Vec<Check>, Failure> {
    let mut out = Vec::new();
    for d in cx.dims() {
        let t = build_td(d)?.polynomial;
        let s = sign(d);
        let each = QPoly::constant(d, Rational::from_integer((8 * s).into()));
        let mut ok = true;
        for i in 0..d {
            let d2 = t.partial_derivative(i)?.partial_derivative(i)?;
            ok &= d2 == each;
        }
        out.push(Check::new(format!("d^2 T_{d} / dx_i^2 = {} for every i", 8 * s), ok));
        let want = 8 * s * d as i64;
        let lap = t.laplacian();
        out.push(
            Check::new(format!("Laplacian of T_{d} = {want}"), lap == QPoly::constant(d, Rational::from_integer(want.into())))
                .detail(json!({"laplacian": lap.constant_term().to_string()})),
        );
    }
    Ok(out)
}

fn cubature(cx: &Ctx) -> Result<Vec<Check>, Failure> {
    let rep = cubature_check();
    let mut out = vec![
        Check::new("degree-2 parts integrate degree <= 2 exactly", rep.exact_through_degree_2),
        Check::new("degree-2 parts separate at degree 3", rep.degree_3_witness.is_some())
            .detail(json!({"witness": rep.degree_3_witness})),
    ];
    if let Some(k) = &cx.r5 {
        let r = r5_cubature_check(k, 1e-6)?;
        let worst = r.error_by_degree.iter().copied().fold(0.0, f64::max);
        out.push(
            Check::new("R_5 positive part is not a degree-5 cubature rule", r.first_inexact_degree.is_some())
                .residual(worst)
                .detail(json!({"error_by_degree": r.error_by_degree, "first_inexact_degree": r.first_inexact_degree})),
        );
    }
    Ok(out)
}

fn determinant(cx: &Ctx) -> Result<Vec<Check>, Failure> {
    let mut out = Vec::new();
    for d in cx.dims() {
        if d == 5 {
            let ok = dd_determinant(5)? == d5_claimed_factorization();
            out.push(Check::new("D_5 = -64 V(x_1..x_4) (225 x_5 - 14)", ok));
        } else if d <= MAX_DETERMINANT_D {
            let v = VandermondeDivision::of(d)?;
            out.push(
                Check::new(format!("D_{d} divisible by every x_i - x_j"), v.divides)
                    .detail(json!({"quotient": v.quotient.map(|q| q.to_string())}))
                    .informational(),
            );
        }
    }
    Ok(out)
}

fn combi(cx: &Ctx) -> Result<Vec<Check>, Failure> {
    let mut out = Vec::new();
    for d in cx.dims() {
        let bad: Vec<u32> = (1..d as u32).filter(|&k| !combi_identity(d as u32, k).is_zero()).collect();
        out.push(Check::new(format!("alternating binomial sums vanish, d={d}"), bad.is_empty()).detail(json!({"failing_k": bad})));
        if d >= 4 {
            let bad: Vec<usize> = (4..=d)
                .filter(|&k| j_kd(k, d) != if k == d { Rational::one() } else { Rational::zero() })
                .collect();
            out.push(Check::new(format!("J_(k,{d}) = [k = {d}]"), bad.is_empty()).detail(json!({"failing_k": bad})));
        }
        let direct = t3_at_uniform(d)?;
        out.push(
            Check::new(format!("T_3 at the uniform point, d={d}"), direct == t3_at_uniform_closed(d))
                .detail(json!({"value": direct.to_string()})),
        );
    }
    Ok(out)
}

const ORDER: [Suite; 6] =
    [Suite::Signature, Suite::Supnorm, Suite::Laplacian, Suite::Cubature, Suite::Determinant, Suite::Combi];

fn suite_name(s: Suite) -> &'static str {
    match s {
        Suite::Signature => "signature",
        Suite::Supnorm => "supnorm",
        Suite::Laplacian => "laplacian",
        Suite::Cubature => "cubature",
        Suite::Determinant => "determinant",
        Suite::Combi => "combi",
        Suite::All => "all",
    }
}

pub fn run(args: &VerifyArgs, seed: u64, out: Option<&Path>) -> Result<(), Failure> {
    if args.d.0 < 3 {
        return Err(Failure::Usage(format!("d must be ≥ 3, got {}", args.d.0)));
    }
    let suites: Vec<Suite> = if args.suite == Suite::All { ORDER.to_vec() } else { vec![args.suite] };
    let needs_r5 = args.d.0 <= 3 && suites.contains(&Suite::Signature) || suites.contains(&Suite::Cubature);
    let cx = Ctx {
        args,
        opts: SearchOptions { seed, ..SearchOptions::default() },
        r5: if needs_r5 { Some(derive_r5_constants()?) } else { None },
    };
    let mut reports = Vec::new();
    let mut failed = Vec::new();
    for s in suites {
        let checks = match s {
            Suite::Signature => signature(&cx)?,
            Suite::Supnorm => supnorm(&cx)?,
            Suite::Laplacian => laplacian(&cx)?,
            Suite::Cubature => cubature(&cx)?,
            Suite::Determinant => determinant(&cx)?,
            Suite::Combi => combi(&cx)?,
            Suite::All => unreachable!("expanded above"),
        };
        failed.extend(checks.iter().filter(|c| c.asserted && !c.pass).map(|c| c.name.clone()));
        let pass = checks.iter().all(|c| c.pass || !c.asserted);
        reports.push(json!({
            "suite": suite_name(s),
            "pass": pass,
            "checks": checks.iter().map(Check::to_json).collect::<Vec<_>>(),
        }));
    }
    let config = json!({
        "suite": suite_name(args.suite),
        "d": [args.d.0, args.d.1],
        "tol": args.tol,
        "resolution": args.resolution,
        "seed": seed,
        "search": {
            "starts_per_dim": cx.opts.starts_per_dim,
            "dedupe_tol": cx.opts.dedupe_tol,
            "zero_tol": cx.opts.zero_tol,
            "max_newton_iter": cx.opts.max_newton_iter,
            "refine_top": cx.opts.refine_top,
        },
    });
    let result = json!({"pass": failed.is_empty(), "suites": reports});
    write_json(&envelope("verify", config, result), out)?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(format!("failed checks: {}", failed.join("; "))))
    }
}

#[cfg(test)]
mod tests {
    use super::parse_range;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("3..5"), Ok((3, 5)));
        assert_eq!(parse_range("3..=5"), Ok((3, 5)));
        assert_eq!(parse_range("6"), Ok((6, 6)));
        assert!(parse_range("5..3").is_err());
        assert!(parse_range("x").is_err());
    }
}
