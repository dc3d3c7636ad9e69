//! Symmetric functions and the univariate Chebyshev polynomials.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::poly::{Monomial, Poly};
use crate::scalar::Coeff;

/// `e_k` in `d` variables.
pub fn elementary_symmetric<C: Coeff>(k: usize, d: usize) -> Result<Poly<C>> {
    if k > d {
        return Err(Error::InvalidArgument(format!("e_{k} needs k <= d = {d}")));
    }
    let terms = (0..d).combinations(k).map(|idx| {
        let mut e = vec![0u32; d];
        for i in idx {
            e[i] = 1;
        }
        (e, C::one())
    });
    Poly::from_terms(d, terms)
}

/// `m_k = x_1^k + ... + x_d^k`; `m_0 = d`.
pub fn power_sum<C: Coeff>(k: u32, d: usize) -> Poly<C> {
    if k == 0 {
        return Poly::constant(d, C::from_i64(d as i64));
    }
    let terms = (0..d).map(|i| {
        let mut e = vec![0u32; d];
        e[i] = k;
        (e, C::one())
    });
    Poly::from_terms(d, terms).expect("exponent vectors have length d")
}

/// `T_n(t)` from `T_{n+1} = 2t T_n - T_{n-1}`.
pub fn chebyshev_univariate<C: Coeff>(n: u32) -> Poly<C> {
    let t = Poly::<C>::var(1, 0);
    let two_t = t.scale(&C::from_i64(2));
    let mut prev = Poly::one(1);
    if n == 0 {
        return prev;
    }
    let mut cur = t;
    for _ in 1..n {
        let next = &(&two_t * &cur) - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// All distinct rearrangements of `v`, in lexicographic order.
pub fn distinct_permutations<T: Clone + PartialOrd>(v: &[T]) -> Vec<Vec<T>> {
    let mut cur = v.to_vec();
    cur.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let mut out = vec![cur.clone()];
    while next_permutation(&mut cur) {
        out.push(cur.clone());
    }
    out
}

fn next_permutation<T: PartialOrd>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Orbit average over `S_d`. Each monomial is spread evenly over the
/// distinct permutations of its exponent vector.
pub fn symmetrize<C: Coeff>(p: &Poly<C>) -> Poly<C> {
    let d = p.nvars();
    let mut out = Poly::zero(d);
    for (m, c) in p.terms() {
        let orbit = distinct_permutations(m.exps());
        let share = c.clone() / C::from_i64(orbit.len() as i64);
        for e in orbit {
            out = &out + &Poly::monomial(Monomial::new(e), share.clone());
        }
    }
    out
}

pub fn is_symmetric<C: Coeff>(p: &Poly<C>, tol: f64) -> bool {
    symmetrize(p).approx_eq(p, tol)
}

/// Monomial symmetric function `m_λ` in `d` variables.
pub fn monomial_symmetric<C: Coeff>(partition: &[u32], d: usize) -> Result<Poly<C>> {
    if partition.len() > d {
        return Err(Error::InvalidArgument(format!(
            "partition {partition:?} has more than {d} parts"
        )));
    }
    let mut e = partition.to_vec();
    e.resize(d, 0);
    Poly::from_terms(
        d,
        distinct_permutations(&e).into_iter().map(|e| (e, C::one())),
    )
}

/// Partitions of `n` into at most `max_parts` parts, each part weakly
/// decreasing, in reverse lexicographic order.
pub fn partitions(n: u32, max_parts: usize) -> Vec<Vec<u32>> {
    fn rec(rem: u32, max_part: u32, parts_left: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        if parts_left == 0 {
            return;
        }
        for p in (1..=rem.min(max_part)).rev() {
            cur.push(p);
            rec(rem - p, p, parts_left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, max_parts, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::QPoly;
    use crate::scalar::{rational, Rational};
    use num_integer::binomial;

    #[test]
    fn e1_and_ed() {
        let e1: QPoly = elementary_symmetric(1, 3).unwrap();
        let sum = &(&QPoly::var(3, 0) + &QPoly::var(3, 1)) + &QPoly::var(3, 2);
        assert_eq!(e1, sum);
        let e3: QPoly = elementary_symmetric(3, 3).unwrap();
        assert_eq!(e3.num_terms(), 1);
        assert_eq!(e3.coeff(&[1, 1, 1]), rational(1, 1));
        assert!(elementary_symmetric::<Rational>(4, 3).is_err());
    }

    #[test]
    fn e2_on_two_ones() {
        let e2: QPoly = elementary_symmetric(2, 4).unwrap();
        let one = rational(1, 1);
        let zero = rational(0, 1);
        assert_eq!(e2.eval(&[one.clone(), one, zero.clone(), zero]).unwrap(), rational(1, 1));
    }

    #[test]
    fn ek_at_partial_uniform_points() {
        // Counting oracle: C(j,k) subsets of the nonzero coordinates, each j^-k.
        for d in 2..=7usize {
            for k in 1..=d {
                let ek: QPoly = elementary_symmetric(k, d).unwrap();
                for j in 1..=d {
                    let mut pt = vec![rational(0, 1); d];
                    for c in pt.iter_mut().take(j) {
                        *c = rational(1, j as i64);
                    }
                    let expected = rational(binomial(j as i64, k as i64), (j as i64).pow(k as u32));
                    assert_eq!(ek.eval(&pt).unwrap(), expected, "d={d} k={k} j={j}");
                }
            }
        }
    }

    #[test]
    fn power_sums() {
        let m1: QPoly = power_sum(1, 4);
        assert_eq!(m1, elementary_symmetric(1, 4).unwrap());
        let m0: QPoly = power_sum(0, 5);
        assert_eq!(m0, QPoly::constant(5, rational(5, 1)));
        let m2: QPoly = power_sum(2, 2);
        assert_eq!(m2, &QPoly::var(2, 0).pow(2) + &QPoly::var(2, 1).pow(2));
        for j in 1..=5i64 {
            for k in 1..=4u32 {
                let mut pt = vec![rational(0, 1); 5];
                for c in pt.iter_mut().take(j as usize) {
                    *c = rational(1, j);
                }
                let v = power_sum::<Rational>(k, 5).eval(&pt).unwrap();
                assert_eq!(v, rational(j, j.pow(k)));
            }
        }
    }

    #[test]
    fn chebyshev_low_degrees() {
        let t2: QPoly = chebyshev_univariate(2);
        assert_eq!(t2.coeff(&[2]), rational(2, 1));
        assert_eq!(t2.coeff(&[0]), rational(-1, 1));
        assert_eq!(t2.num_terms(), 2);
        let t3: QPoly = chebyshev_univariate(3);
        let expected = QPoly::from_terms(1, vec![(vec![3], rational(4, 1)), (vec![1], rational(-3, 1))]).unwrap();
        assert_eq!(t3, expected);
        for n in 1..10u32 {
            let tn: QPoly = chebyshev_univariate(n);
            assert_eq!(tn.coeff(&[n]), rational(1 << (n - 1), 1));
        }
        // T_4(2x-1) at x = 0 is T_4(-1) = 1
        let t4: QPoly = chebyshev_univariate(4);
        let shifted = t4.compose(&[&QPoly::var(1, 0).scale(&rational(2, 1)) - &QPoly::one(1)]).unwrap();
        assert_eq!(shifted.eval(&[rational(0, 1)]).unwrap(), rational(1, 1));
    }

    #[test]
    fn chebyshev_shift_expansion() {
        let t2: QPoly = chebyshev_univariate(2);
        let shifted = t2.compose(&[&QPoly::var(1, 0).scale(&rational(2, 1)) - &QPoly::one(1)]).unwrap();
        let expected = QPoly::from_terms(
            1,
            vec![(vec![2], rational(8, 1)), (vec![1], rational(-8, 1)), (vec![0], rational(1, 1))],
        )
        .unwrap();
        assert!(shifted.approx_eq(&expected, 0.0));
    }

    #[test]
    fn chebyshev_cosine_identity_and_bound() {
        for n in 0..12u32 {
            let tn = chebyshev_univariate::<f64>(n);
            for s in 0..=10_000 {
                let t = -1.0 + 2.0 * s as f64 / 10_000.0;
                assert!(tn.eval_f64(&[t]).unwrap().abs() <= 1.0 + 1e-12);
            }
            for s in 0..200 {
                let th = s as f64 * 0.0157;
                let v = tn.eval_f64(&[th.cos()]).unwrap();
                assert!((v - (n as f64 * th).cos()).abs() < 1e-12, "n={n}");
            }
        }
    }

    #[test]
    fn symmetrize_examples() {
        let x1sq = QPoly::var(3, 0).pow(2);
        assert_eq!(symmetrize(&x1sq), power_sum::<Rational>(2, 3).scale(&rational(1, 3)));
        let x1x2 = &QPoly::var(3, 0) * &QPoly::var(3, 1);
        assert_eq!(
            symmetrize(&x1x2),
            elementary_symmetric::<Rational>(2, 3).unwrap().scale(&rational(1, 3))
        );
    }

    #[test]
    fn newton_identity_e2() {
        for d in 2..=8 {
            let m1: QPoly = power_sum(1, d);
            let m2: QPoly = power_sum(2, d);
            let rhs = (&m1.pow(2) - &m2).scale(&rational(1, 2));
            assert_eq!(elementary_symmetric::<Rational>(2, d).unwrap(), rhs);
        }
    }

    #[test]
    fn partition_counts() {
        let total: usize = (0..=4).map(|n| partitions(n, 3).len()).sum();
        assert_eq!(total, 11);
        assert_eq!(partitions(0, 3), vec![Vec::<u32>::new()]);
        assert_eq!(partitions(4, 2), vec![vec![4], vec![3, 1], vec![2, 2]]);
    }

    #[test]
    fn multiset_permutations() {
        assert_eq!(distinct_permutations(&[1, 0, 0]).len(), 3);
        assert_eq!(distinct_permutations(&[2, 1, 0]).len(), 6);
        assert_eq!(distinct_permutations(&[1, 1, 1, 1]).len(), 1);
    }
}
