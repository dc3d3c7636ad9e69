use itertools::Itertools;

use super::Domain;

/// Deterministic lattice samples.
///
/// * simplex: `α/m` for `|α| <= m`
/// * simplex face: `α/m` for `|α| = m`
/// * ball: `{-m..m}^d / m` inside the unit ball
/// * sphere: points of the cube surface `max|k_i| = m`, normalized; axis and
///   diagonal directions are always included
pub fn sample_domain(dom: Domain, resolution: usize) -> Vec<Vec<f64>> {
    let m = resolution.max(1);
    let d = dom.dimension();
    let mf = m as f64;
    match dom {
        Domain::Simplex(_) => compositions_up_to(d, m)
            .into_iter()
            .map(|a| a.iter().map(|&k| k as f64 / mf).collect())
            .collect(),
        Domain::SimplexFace(_) => compositions_up_to(d, m)
            .into_iter()
            .filter(|a| a.iter().sum::<usize>() == m)
            .map(|a| a.iter().map(|&k| k as f64 / mf).collect())
            .collect(),
        Domain::Ball(_) => cube(d, m)
            .filter(|k| k.iter().map(|v| v * v).sum::<i64>() <= (m * m) as i64)
            .map(|k| k.iter().map(|&v| v as f64 / mf).collect())
            .collect(),
        Domain::Sphere(_) => cube_surface(d, m)
            .map(|k| {
                let n = (k.iter().map(|v| v * v).sum::<i64>() as f64).sqrt();
                k.iter().map(|&v| v as f64 / n).collect()
            })
            .collect(),
    }
}

fn cube(d: usize, m: usize) -> impl Iterator<Item = Vec<i64>> {
    let m = m as i64;
    (0..d).map(|_| -m..=m).multi_cartesian_product()
}

/// Points with `max|k_i| = m`, each once: the facet `k_i = ±m` only takes
/// points with `|k_j| < m` for `j < i`.
fn cube_surface(d: usize, m: usize) -> impl Iterator<Item = Vec<i64>> {
    let mi = m as i64;
    (0..d).flat_map(move |i| {
        [-mi, mi].into_iter().flat_map(move |s| {
            (0..d)
                .map(move |j| match j.cmp(&i) {
                    std::cmp::Ordering::Less => (1 - mi)..=(mi - 1),
                    std::cmp::Ordering::Equal => s..=s,
                    std::cmp::Ordering::Greater => -mi..=mi,
                })
                .multi_cartesian_product()
        })
    })
}

/// All `α ∈ N^d` with `|α| <= m`.
fn compositions_up_to(d: usize, m: usize) -> Vec<Vec<usize>> {
    fn rec(i: usize, rem: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for k in 0..=rem {
            cur[i] = k;
            rec(i + 1, rem - k, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    let mut cur = vec![0; d];
    rec(0, m, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_counts() {
        assert_eq!(sample_domain(Domain::Simplex(2), 2).len(), 6);
        assert_eq!(sample_domain(Domain::Simplex(3), 4).len(), 35);
        assert_eq!(sample_domain(Domain::SimplexFace(3), 3).len(), 10);
        for x in sample_domain(Domain::Simplex(4), 5) {
            assert!(x.iter().all(|&v| v >= 0.0));
            assert!(x.iter().sum::<f64>() <= 1.0 + 1e-15);
        }
    }

    #[test]
    fn sphere_points_are_unit() {
        let pts = sample_domain(Domain::Sphere(3), 6);
        for x in &pts {
            let n: f64 = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!((n - 1.0).abs() <= 1e-12);
        }
        let s = 1.0 / 3f64.sqrt();
        assert!(pts.iter().any(|x| x.iter().all(|&v| (v - s).abs() < 1e-15)));
        assert!(pts.iter().any(|x| x == &vec![0.0, 0.0, -1.0]));
        assert_eq!(pts.len(), 13usize.pow(3) - 11usize.pow(3));
        assert_eq!(sample_domain(Domain::Sphere(4), 1).len(), 3usize.pow(4) - 1);
    }

    #[test]
    fn ball_points_inside() {
        let pts = sample_domain(Domain::Ball(2), 4);
        assert!(pts.iter().all(|x| Domain::Ball(2).contains(x, 1e-15)));
        assert!(pts.contains(&vec![1.0, 0.0]));
        assert_eq!(sample_domain(Domain::Ball(1), 50).len(), 101);
    }
}
