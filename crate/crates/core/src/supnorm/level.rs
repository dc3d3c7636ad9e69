use super::{critical_points, Domain, SearchOptions};
use crate::error::{Error, Result};
use crate::poly::FPoly;

/// Points of `dom` where `||f - p| - r| <= tol`.
///
/// Candidates are the stationary points of `f - p` on every stratum of the
/// domain: at `r = ‖f - p‖` every point of the level set is a maximum of
/// `|f - p|` on its stratum.
pub fn level_set(f: &FPoly, p: &FPoly, r: f64, dom: Domain, tol: f64, opts: &SearchOptions) -> Result<Vec<Vec<f64>>> {
    if r <= 0.0 {
        return Err(Error::InvalidArgument(format!("level must be positive, got {r}")));
    }
    let g = f.try_sub(p)?;
    let mut out: Vec<Vec<f64>> = Vec::new();
    for c in critical_points(&g, dom, opts)? {
        if (c.value.abs() - r).abs() <= tol
            && !out.iter().any(|q| q.iter().zip(&c.point).all(|(a, b)| (a - b).abs() <= opts.dedupe_tol))
        {
            out.push(c.point);
        }
    }
    out.sort_by(|a, b| {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::r3;

    #[test]
    fn r3_level_one_is_the_signature_support() {
        let p = r3().to_f64();
        let zero = FPoly::zero(3);
        let pts = level_set(&p, &zero, 1.0, Domain::Simplex(3), 1e-9, &SearchOptions::default()).unwrap();
        assert_eq!(pts.len(), 8, "{pts:?}");
        let c = crate::poly::Compiled::new(&p);
        for x in &pts {
            assert!((c.eval(x).abs() - 1.0).abs() <= 1e-10);
        }
        assert!(pts.contains(&vec![0.0, 0.0, 0.0]));
    }
}
