use chebydev_core::bestapprox::{solve_minimax, LpOptions};
use chebydev_core::signatures::{certify_lower_bound, functional_values, functional_values_by_orbits, orbit, td_certificate, SignedPointSet};
use chebydev_core::symfun::{is_symmetric, symmetrize};
use chebydev_core::{FPoly, Face, Monomial, QPoly, Rational};
use nalgebra::DMatrix;
use num_bigint::BigInt;
use proptest::prelude::*;

const NVARS: usize = 3;

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn qpoly(nvars: usize, max_deg: u32) -> impl Strategy<Value = QPoly> {
    let term = (prop::collection::vec(0..=max_deg, nvars), -9i64..=9, 1i64..=4);
    prop::collection::vec(term, 0..6).prop_map(move |terms| {
        terms.into_iter().fold(QPoly::zero(nvars), |acc, (e, n, d)| {
            &acc + &QPoly::monomial(Monomial::new(e), rat(n, d))
        })
    })
}

fn fpoly(nvars: usize, max_deg: u32) -> impl Strategy<Value = FPoly> {
    let term = (prop::collection::vec(0..=max_deg, nvars), -3.0f64..3.0);
    prop::collection::vec(term, 1..6).prop_map(move |terms| {
        terms.into_iter().fold(FPoly::zero(nvars), |acc, (e, c)| &acc + &FPoly::monomial(Monomial::new(e), c))
    })
}

fn qpoint(nvars: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((-6i64..=6, 1i64..=5), nvars).prop_map(|v| v.into_iter().map(|(n, d)| rat(n, d)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ring_axioms(p in qpoly(NVARS, 3), q in qpoly(NVARS, 3), r in qpoly(NVARS, 2)) {
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert!((&p - &p).is_zero());
        prop_assert_eq!(&p * &QPoly::one(NVARS), p.clone());
    }

    #[test]
    fn evaluation_is_a_ring_map(p in qpoly(NVARS, 3), q in qpoly(NVARS, 3), x in qpoint(NVARS)) {
        let (px, qx) = (p.eval(&x).unwrap(), q.eval(&x).unwrap());
        prop_assert_eq!((&p + &q).eval(&x).unwrap(), px.clone() + qx.clone());
        prop_assert_eq!((&p * &q).eval(&x).unwrap(), px * qx);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn zero_face_then_insert_agrees(p in qpoly(NVARS, 3), x in qpoint(NVARS), i in 0..NVARS) {
        let lifted = p.restrict_face(Face::SetVarZero(i)).unwrap().insert_var(i);
        let mut x0 = x.clone();
        x0[i] = rat(0, 1);
        prop_assert_eq!(lifted.eval(&x).unwrap(), p.eval(&x0).unwrap());
    }

    #[test]
    fn affine_face_substitutes_last(p in qpoly(NVARS, 3), y in qpoint(NVARS - 1)) {
        let face = p.restrict_face(Face::AffineLast).unwrap();
        let mut x = y.clone();
        x.push(y.iter().fold(rat(1, 1), |s, v| s - v.clone()));
        prop_assert_eq!(face.eval(&y).unwrap(), p.eval(&x).unwrap());
    }

    #[test]
    fn derivative_matches_central_difference(p in fpoly(NVARS, 4), x in prop::collection::vec(-1.0f64..1.0, NVARS), i in 0..NVARS) {
        let h = 1e-5;
        let (mut a, mut b) = (x.clone(), x.clone());
        a[i] += h;
        b[i] -= h;
        let fd = (p.eval_f64(&a).unwrap() - p.eval_f64(&b).unwrap()) / (2.0 * h);
        let exact = p.partial_derivative(i).unwrap().eval_f64(&x).unwrap();
        prop_assert!((fd - exact).abs() <= 1e-6 * (1.0 + p.max_abs_coeff()), "fd={} exact={}", fd, exact);
    }

    #[test]
    fn symmetrize_is_idempotent(p in qpoly(NVARS, 3)) {
        let s = symmetrize(&p);
        prop_assert!(is_symmetric(&s, 0.0));
        prop_assert_eq!(symmetrize(&s), s);
    }

    #[test]
    fn orbit_reduction_is_lossless(
        bases in prop::collection::vec((qpoint(NVARS), 1i64..=5, any::<bool>()), 1..4),
        n in 0u32..=4,
    ) {
        let mut points = Vec::new();
        let mut signs = Vec::new();
        let mut weights = Vec::new();
        for (base, w, plus) in &bases {
            for p in orbit(base) {
                if points.contains(&p) {
                    continue;
                }
                points.push(p);
                signs.push(if *plus { 1 } else { -1 });
                weights.push(rat(*w, 1));
            }
        }
        let set = SignedPointSet::new(points, signs, Some(weights)).unwrap();
        // Orbits hit twice with different signs or weights are not orbit-constant.
        prop_assume!(functional_values_by_orbits(&set, n).is_some());
        let reduced = functional_values_by_orbits(&set, n).unwrap();
        for (m, v) in functional_values(&set, n) {
            let mut key = m.exps().to_vec();
            key.sort_by(|a, b| b.cmp(a));
            let w = &reduced.iter().find(|(e, _)| *e == key).unwrap().1;
            prop_assert_eq!(&v, w);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn certificate_rejects_any_other_level(d in 3usize..=5, num in 1i64..=40) {
        let mut cert = td_certificate(d).unwrap();
        let factor = rat(num, 20);
        prop_assume!(factor != rat(1, 1));
        cert.level = cert.level.clone() * factor;
        prop_assert!(!certify_lower_bound(&cert, 0.0).certified);
    }

    #[test]
    fn lp_level_is_a_lower_bound(
        xs in prop::collection::vec(-1.0f64..1.0, 12..40),
        target in prop::collection::vec(-2.0f64..2.0, 4),
        trial in prop::collection::vec(-2.0f64..2.0, 3),
    ) {
        // Quadratics on scattered points against a cubic target.
        let phi = DMatrix::from_fn(xs.len(), 3, |r, c| xs[r].powi(c as i32));
        let f: Vec<f64> = xs.iter().map(|x| (0..4).map(|k| target[k] * x.powi(k as i32)).sum()).collect();
        let mut distinct = xs.clone();
        distinct.sort_by(f64::total_cmp);
        distinct.dedup_by(|a, b| (*a - *b).abs() < 1e-3);
        prop_assume!(distinct.len() >= 4);
        let lp = solve_minimax(&phi, &f, &LpOptions::default()).unwrap();
        let sup = |c: &[f64]| {
            xs.iter().zip(&f).map(|(x, fx)| (fx - (0..3).map(|k| c[k] * x.powi(k as i32)).sum::<f64>()).abs()).fold(0.0, f64::max)
        };
        let tol = 1e-9 * (1.0 + f.iter().fold(0.0f64, |m, v| m.max(v.abs())));
        prop_assert!(lp.objective <= sup(&trial) + tol);
        prop_assert!((sup(&lp.coefficients) - lp.objective).abs() <= tol * 10.0);
    }
}

