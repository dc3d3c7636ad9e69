use std::path::Path;

use chebydev_core::bestapprox::{remez_exchange, ApproxProblem, BasisKind};
use chebydev_core::constructions::{
    build_r5, build_r5_report, build_td, build_u3, build_u5, compute_rd, derive_r5_constants, factorize,
    format_factorization, monomial_target, r3, RdMethod,
};
use chebydev_core::supnorm::{Domain, SearchOptions};
use chebydev_core::{FPoly, Rational};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::report::{envelope, write_csv, write_json, Failure};
use crate::{ApproxArgs, BasisArg, ConstructArgs, DomainArg, Family, Format, RdTableArgs, SurfaceArgs, SurfacePoly};

/// Integers as JSON numbers when they fit, otherwise the exact string.
fn exact_json(r: &Rational) -> Value {
    match (r.is_integer(), r.to_integer().to_i64()) {
        (true, Some(v)) => json!(v),
        _ => json!(r.to_string()),
    }
}

fn need_dimension(d: usize) -> Result<(), Failure> {
    if d < 3 {
        return Err(Failure::Usage(format!("d must be ≥ 3, got {d}")));
    }
    Ok(())
}

pub fn construct(a: &ConstructArgs, out: Option<&Path>) -> Result<(), Failure> {
    let (config, result) = match a.family {
        Family::R3 => {
            let p = r3();
            let lead = p.coeff(&[1, 1, 1]);
            (
                json!({"family": "r3"}),
                json!({
                    "dimension": 3,
                    "leading_coefficient": exact_json(&lead),
                    "polynomial": p.to_json(),
                }),
            )
        }
        Family::Td => {
            need_dimension(a.d)?;
            let rep = build_td(a.d)?;
            let lead: Rational = rep.polynomial.coeff(&vec![1; a.d]);
            let mut v = rep.to_json();
            v["leading_coefficient"] = exact_json(&lead);
            (json!({"family": "td", "d": a.d}), v)
        }
        Family::R5 => {
            let k = derive_r5_constants()?;
            let rep = build_r5_report(&k);
            let mut v = rep.to_json();
            v["constants"] = k.to_json();
            v["leading_coefficient"] = json!(build_r5(&k).coeff(&[2, 2, 2]));
            (json!({"family": "r5"}), v)
        }
    };
    write_json(&envelope("construct", config, result), out)?;
    Ok(())
}

fn basis_kind(b: BasisArg) -> BasisKind {
    match b {
        BasisArg::Full => BasisKind::Full,
        BasisArg::Symmetric => BasisKind::Symmetric,
        BasisArg::Even => BasisKind::Even,
        BasisArg::EvenSymmetric => BasisKind::EvenSymmetric,
    }
}

pub fn approx(a: &ApproxArgs, seed: u64, out: Option<&Path>) -> Result<(), Failure> {
    let n = a.monomial.len();
    if n == 0 {
        return Err(Failure::Usage("--monomial needs at least one exponent".into()));
    }
    if a.grid == 0 {
        return Err(Failure::Usage("--grid must be positive".into()));
    }
    let domain = match a.domain {
        DomainArg::Simplex => Domain::Simplex(n),
        DomainArg::Ball => Domain::Ball(n),
        DomainArg::Sphere => Domain::Sphere(n),
    };
    let target: FPoly = monomial_target(&a.monomial);
    let mut prob = ApproxProblem::new(target, a.degree, domain, basis_kind(a.basis), a.grid);
    prob.drop_dependent = a.drop_dependent;
    let opts = SearchOptions { seed, ..SearchOptions::default() };
    let res = remez_exchange(&prob, a.max_iter, &opts)?;
    let config = json!({
        "monomial": a.monomial,
        "domain": domain.name(),
        "degree": a.degree,
        "grid": a.grid,
        "basis": prob.basis.as_str(),
        "max_iter": a.max_iter,
        "drop_dependent": a.drop_dependent,
        "seed": seed,
    });
    let mut result = res.to_json();
    result["deviation"] = json!(res.deviation);
    write_json(&envelope("approx", config, result), out)?;
    if !res.converged {
        return Err(Failure::Numerical(format!(
            "exchange did not converge in {} iterations (gap {:e})",
            res.iterations,
            res.gap().unwrap_or(f64::NAN)
        )));
    }
    Ok(())
}

pub fn rd_table(a: &RdTableArgs, out: Option<&Path>) -> Result<(), Failure> {
    need_dimension(a.max_d)?;
    let mut rows = Vec::new();
    for d in 3..=a.max_d {
        let closed = compute_rd(d, RdMethod::ClosedForm)?;
        let recursive = compute_rd(d, RdMethod::Recursive)?;
        if closed != recursive {
            return Err(Failure::Numerical(format!("r_{d}: closed form {closed} vs recursion {recursive}")));
        }
        let f = format_factorization(&factorize(&closed));
        rows.push((d, closed, f));
    }
    let config = json!({"max_d": a.max_d, "format": format!("{:?}", a.format).to_lowercase()});
    match a.format {
        Format::Csv => {
            let rows: Vec<Vec<String>> =
                rows.into_iter().map(|(d, r, f)| vec![d.to_string(), r.to_string(), f]).collect();
            write_csv(&config, &["d", "r_d", "factorization"], &rows, out)?;
        }
        Format::Json => {
            let rows: Vec<Value> = rows
                .into_iter()
                .map(|(d, r, f)| json!({"d": d, "r_d": r.to_string(), "factorization": f, "approx": r.to_f64()}))
                .collect();
            write_json(&envelope("rd-table", config, json!(rows)), out)?;
        }
    }
    Ok(())
}

pub fn surface(a: &SurfaceArgs, out: Option<&Path>) -> Result<(), Failure> {
    if a.grid == 0 {
        return Err(Failure::Usage("--grid must be positive".into()));
    }
    let (name, p) = match a.poly {
        SurfacePoly::U3 => ("u3", build_u3().to_f64()),
        SurfacePoly::U5 => ("u5", build_u5(&derive_r5_constants()?)),
    };
    let m = a.grid;
    let mut rows = Vec::with_capacity((m + 1) * (m + 2) / 2);
    for i in 0..=m {
        for j in 0..=m - i {
            let (x, y) = (i as f64 / m as f64, j as f64 / m as f64);
            let v = p.eval_f64(&[x, y])?;
            rows.push(vec![x.to_string(), y.to_string(), v.to_string()]);
        }
    }
    let config = json!({"poly": name, "grid": m});
    write_csv(&config, &["x", "y", "value"], &rows, out)?;
    Ok(())
}
