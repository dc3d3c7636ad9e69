//! The extremal families: `T_d` (with `T_3 = R_3`) over exact rationals, the
//! `R_5`/`U_5` family with numerically determined constants, and the lift
//! from the simplex to the ball.

use num_bigint::BigInt;
use num_integer::{binomial, Integer};
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::poly::{FPoly, Face, Poly, QPoly};
use crate::scalar::{Coeff, Rational};
use crate::symfun::{chebyshev_univariate, elementary_symmetric, power_sum};

#[derive(Clone, Debug)]
pub struct FamilyReport<C: Coeff> {
    pub dimension: usize,
    pub polynomial: Poly<C>,
    /// `r_d` for `T_d`, `27^2 b` for `R_5`.
    pub r_value: C,
    pub construction_log: Vec<String>,
}

impl<C: Coeff> FamilyReport<C> {
    pub fn to_json(&self) -> Value {
        json!({
            "dimension": self.dimension,
            "r_value": self.r_value.to_json(),
            "polynomial": self.polynomial.to_json(),
            "construction_log": self.construction_log,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RdMethod {
    ClosedForm,
    Recursive,
}

fn q(v: i64) -> Rational {
    Rational::from_i64(v)
}

/// `72 e_3 - 4 e_1 + 4 e_1^2 - 8 e_2 + 1` in `d >= 3` variables.
pub fn t3_in(d: usize) -> Result<QPoly> {
    if d < 3 {
        return Err(Error::InvalidArgument(format!("d must be ≥ 3, got {d}")));
    }
    let e1: QPoly = elementary_symmetric(1, d)?;
    let e2: QPoly = elementary_symmetric(2, d)?;
    let e3: QPoly = elementary_symmetric(3, d)?;
    Ok(&(&(&e3.scale(&q(72)) - &e1.scale(&q(4))) + &e1.pow(2).scale(&q(4)))
        - &(&e2.scale(&q(8)) - &QPoly::one(d)))
}

/// `R_3` in three variables.
pub fn r3() -> QPoly {
    t3_in(3).expect("d = 3")
}

/// `(1/k, ..., 1/k, 0, ..., 0)` with `k` nonzero entries among `d`.
pub fn uniform_point(k: usize, d: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); d];
    for c in v.iter_mut().take(k) {
        *c = Rational::new(BigInt::one(), BigInt::from(k));
    }
    v
}

/// `T_d` in `d` variables together with `r_3, ..., r_d`, following
/// `T_k = r_k e_k - T_{k-1}`, `r_k = k^k [T_{k-1}(k^{-1} 1^k) + 1]`.
fn td_chain(d: usize) -> Result<(QPoly, Vec<Rational>)> {
    let mut t = t3_in(d)?;
    let mut rs = vec![q(72)];
    for k in 4..=d {
        let at = t.eval(&uniform_point(k, d))?;
        let rk = Rational::from_integer(BigInt::from(k).pow(k as u32)) * (at + Rational::one());
        let ek: QPoly = elementary_symmetric(k, d)?;
        t = &ek.scale(&rk) - &t;
        rs.push(rk);
    }
    Ok((t, rs))
}

/// `r_d`, either from the closed form
/// `d Σ_{k=4}^d k^{d-3} C(d,k) [(-1)^k (9k^2 - 32k + 24) + k^2]` (with `r_3 = 72`)
/// or by running the recursive definition with exact evaluation.
pub fn compute_rd(d: usize, method: RdMethod) -> Result<BigInt> {
    if d < 3 {
        return Err(Error::InvalidArgument(format!("d must be ≥ 3, got {d}")));
    }
    match method {
        RdMethod::ClosedForm => Ok(rd_closed_form(d)),
        RdMethod::Recursive => {
            let (_, rs) = td_chain(d)?;
            let r = rs.last().expect("chain starts at r_3");
            if !r.denom().is_one() {
                return Err(Error::InvalidArgument(format!("r_{d} = {r} is not an integer")));
            }
            Ok(r.numer().clone())
        }
    }
}

fn rd_closed_form(d: usize) -> BigInt {
    if d == 3 {
        return BigInt::from(72);
    }
    let db = BigInt::from(d);
    let mut sum = BigInt::zero();
    for k in 4..=d {
        let kb = BigInt::from(k);
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let poly = BigInt::from(sign * (9 * (k * k) as i64 - 32 * k as i64 + 24)) + &kb * &kb;
        sum += kb.pow((d - 3) as u32) * BigInt::from(binomial(d as u64, k as u64)) * poly;
    }
    db * sum
}

/// Builds `T_d`; fails if the two routes to `r_d` disagree.
pub fn build_td(d: usize) -> Result<FamilyReport<Rational>> {
    let (t, rs) = td_chain(d)?;
    let mut log = Vec::new();
    for (k, r) in (3..=d).zip(&rs) {
        let closed = Rational::from_integer(rd_closed_form(k));
        if *r != closed {
            return Err(Error::RdMismatch {
                d: k,
                closed: closed.to_string(),
                recursive: r.to_string(),
            });
        }
        log.push(format!("r_{k} = {r}"));
    }
    let at_center = t.eval(&uniform_point(d, d))?;
    log.push(format!("T_{d}(1/{d},...,1/{d}) = {at_center}"));
    Ok(FamilyReport {
        dimension: d,
        polynomial: t,
        r_value: rs.last().cloned().expect("nonempty"),
        construction_log: log,
    })
}

/// `T_3(d^{-1} 1^d)` by direct evaluation.
pub fn t3_at_uniform(d: usize) -> Result<Rational> {
    t3_in(d)?.eval(&uniform_point(d, d))
}

/// `d^{-2} (9d^2 - 32d + 24)`.
pub fn t3_at_uniform_closed(d: usize) -> Rational {
    let d = d as i64;
    Rational::new(BigInt::from(9 * d * d - 32 * d + 24), BigInt::from(d * d))
}

/// `J_{k,d} = Σ_{j=k}^d d C(d,j) j^{d-1} (-1)^{j-k} C(j,k) j^{-k}`.
pub fn j_kd(k: usize, d: usize) -> Rational {
    let mut s = Rational::zero();
    for j in k..=d {
        let b = BigInt::from(d) * BigInt::from(binomial(d as u64, j as u64)) * BigInt::from(j).pow((d - 1) as u32);
        let term = Rational::new(
            b * BigInt::from(binomial(j as u64, k as u64)),
            BigInt::from(j).pow(k as u32),
        );
        if (j - k) % 2 == 0 {
            s += term;
        } else {
            s -= term;
        }
    }
    s
}

/// Prime factorization by trial division, stopping early once the cofactor
/// passes a deterministic Miller-Rabin test.
pub fn factorize(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    if n <= BigInt::one() {
        return out;
    }
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        if is_probable_prime(&n) {
            break;
        }
        let mut e = 0;
        while (&n % &p).is_zero() {
            n /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += if p == BigInt::from(2) { 1 } else { 2 };
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

fn is_probable_prime(n: &BigInt) -> bool {
    let two = BigInt::from(2);
    if n < &two {
        return false;
    }
    const BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
    for b in BASES {
        let b = BigInt::from(b);
        if n == &b {
            return true;
        }
        if (n % &b).is_zero() {
            return false;
        }
    }
    let one = BigInt::one();
    let nm1 = n - &one;
    let mut dd = nm1.clone();
    let mut s = 0;
    while dd.is_even() {
        dd >>= 1;
        s += 1;
    }
    'outer: for b in BASES {
        let mut x = BigInt::from(b).modpow(&dd, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == nm1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// `2^3*3^2` style rendering, primes ascending.
pub fn format_factorization(f: &[(BigInt, u32)]) -> String {
    f.iter()
        .map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") })
        .collect::<Vec<_>>()
        .join("*")
}

/// Integer coefficients (ascending powers) of the degree-8 polynomial whose
/// root in `(-1.3, -1.1)` fixes the `R_5` constants.
pub const R5_ROOT_POLY: [i64; 9] = [
    -612_220_032,
    -1_365_527_808,
    -835_528_041,
    -101_556_504,
    23_270_976,
    26_037_504,
    7_670_016,
    929_280,
    41_984,
];

pub const R5_ROOT_BRACKET: (f64, f64) = (-1.3, -1.1);

#[derive(Clone, Debug, PartialEq)]
pub struct R5Constants {
    pub d_root: f64,
    pub a: f64,
    pub b: f64,
    /// Offset in the `U_5` ansatz; `32/9 + a + b` pins `U_5(1/3,1/3) = 1`.
    pub c: f64,
    /// `27^2 b`, the reciprocal of the deviation.
    pub leading: f64,
    pub real_roots: Vec<f64>,
}

impl R5Constants {
    pub fn from_root(d_root: f64) -> Self {
        let a = 16.0 * (3.0 - 4.0 * d_root) / (3.0 * d_root * d_root);
        let b = 32.0 / (d_root * d_root);
        R5Constants {
            d_root,
            a,
            b,
            c: 32.0 / 9.0 + a + b,
            leading: 729.0 * b,
            real_roots: Vec::new(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "d_root": self.d_root,
            "a": self.a,
            "b": self.b,
            "c": self.c,
            "leading": self.leading,
            "real_roots": self.real_roots,
        })
    }
}

fn horner(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
}

fn horner_deriv(coeffs: &[f64], t: f64) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(0.0, |acc, (i, &c)| acc * t + i as f64 * c)
}

/// Real roots of a polynomial (ascending coefficients) in `[lo, hi]` found by
/// sign-change scanning, bisection and a Newton polish.
pub fn real_roots_in(coeffs: &[f64], lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).round() as usize;
    let mut roots = Vec::new();
    let mut prev_t = lo;
    let mut prev_v = horner(coeffs, lo);
    for i in 1..=n {
        let t = lo + i as f64 * step;
        let v = horner(coeffs, t);
        if prev_v == 0.0 {
            roots.push(prev_t);
        } else if prev_v.signum() != v.signum() && v != 0.0 {
            let (mut a, mut b, mut fa) = (prev_t, t, prev_v);
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                let fm = horner(coeffs, m);
                if fm == 0.0 || (b - a) < 1e-15 {
                    a = m;
                    b = m;
                    break;
                }
                if fa.signum() == fm.signum() {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            let mut r = 0.5 * (a + b);
            for _ in 0..5 {
                let dv = horner_deriv(coeffs, r);
                if dv == 0.0 {
                    break;
                }
                let step = horner(coeffs, r) / dv;
                r -= step;
                if step.abs() < 1e-14 * r.abs().max(1.0) {
                    break;
                }
            }
            roots.push(r);
        }
        prev_t = t;
        prev_v = v;
    }
    roots
}

pub fn derive_r5_constants() -> Result<R5Constants> {
    let coeffs: Vec<f64> = R5_ROOT_POLY.iter().map(|&c| c as f64).collect();
    let roots = real_roots_in(&coeffs, -10.0, 10.0, 0.01);
    let (lo, hi) = R5_ROOT_BRACKET;
    let d_root = roots
        .iter()
        .copied()
        .find(|&r| r > lo && r < hi)
        .ok_or(Error::NoRootInBracket { lo, hi })?;
    let mut c = R5Constants::from_root(d_root);
    c.real_roots = roots;
    Ok(c)
}


/// `R_5` in three variables.
pub fn build_r5(k: &R5Constants) -> FPoly {
    let e1: FPoly = elementary_symmetric(1, 3).expect("k <= d");
    let e2: FPoly = elementary_symmetric(2, 3).expect("k <= d");
    let e3: FPoly = elementary_symmetric(3, 3).expect("k <= d");
    let m2: FPoly = power_sum(2, 3);
    let one = FPoly::one(3);
    let s2 = e1.pow(2);
    let inner = &(&one - &e1.scale(&4.0)) + &m2.scale(&4.0);
    let bracket = &s2.scale(&(32.0 / 9.0 - 2.0 * k.a + k.b)) + &e2.scale(&(6.0 * k.a));
    let mut r = e3.pow(2).scale(&k.leading);
    r = &r - &one;
    r = &r + &e1.scale(&2.0);
    r = &r - &s2.scale(&2.0);
    r = &r + &inner.pow(2).scale(&2.0);
    &r - &(&e3 * &bracket).scale(&27.0)
}

/// `-1 + 2(x+y) - 2(x+y)^2 + 2(1 - 4(x+y) + 4(x^2+y^2))^2`.
pub fn r5_coordinate_face() -> FPoly {
    let x = FPoly::var(2, 0);
    let y = FPoly::var(2, 1);
    let s = &x + &y;
    let sq = &x.pow(2) + &y.pow(2);
    let inner = &(&FPoly::one(2) - &s.scale(&4.0)) + &sq.scale(&4.0);
    &(&(&s.scale(&2.0) - &FPoly::one(2)) - &s.pow(2).scale(&2.0)) + &inner.pow(2).scale(&2.0)
}

fn triangle_vars<C: Coeff>() -> (Poly<C>, Poly<C>, Poly<C>) {
    let x = Poly::var(2, 0);
    let y = Poly::var(2, 1);
    let z = &(&Poly::one(2) - &x) - &y;
    (x, y, z)
}

/// `U_5(x, y)` from its ansatz on the triangle.
pub fn build_u5(k: &R5Constants) -> FPoly {
    let (x, y, z) = triangle_vars::<f64>();
    let xyz = &(&x * &y) * &z;
    let sq = &(&x.pow(2) + &y.pow(2)) + &z.pow(2);
    let inner = &(&xyz.scale(&(27.0 * k.b)) + &sq.scale(&(3.0 * k.a))) - &FPoly::constant(2, k.c);
    let cheb = &sq.scale(&4.0) - &FPoly::constant(2, 3.0);
    &(&(&xyz * &inner).scale(&27.0) + &cheb.pow(2).scale(&2.0)) - &FPoly::one(2)
}

/// `U_3(x, y) = 72xy(1-x-y) - 3 + 4(x^2 + y^2 + (1-x-y)^2)`.
pub fn build_u3() -> QPoly {
    let (x, y, z) = triangle_vars::<Rational>();
    let xyz = &(&x * &y) * &z;
    let sq = &(&x.pow(2) + &y.pow(2)) + &z.pow(2);
    &(&xyz.scale(&q(72)) - &QPoly::constant(2, q(3))) + &sq.scale(&q(4))
}

/// `U_5(x, x)` as a univariate polynomial.
pub fn u5_diagonal(k: &R5Constants) -> FPoly {
    let x = FPoly::var(1, 0);
    build_u5(k).compose(&[x.clone(), x]).expect("two substitutions")
}

/// Coefficient residuals of the three boundary identities of `U_5`:
/// the edge equals `T_4(2x - 1)`, `1 - U_5(x, x)` factors as
/// `x(1-2x)(1-3x)^2 (64 - 54ax + 27bx + 162bx^2)`, and the quartic factor is
/// `2b(9x + d)^2`.
pub fn u5_identity_residuals(k: &R5Constants) -> [f64; 3] {
    let u5 = build_u5(k);
    let x = FPoly::var(1, 0);
    let one = FPoly::one(1);
    let shifted = &x.scale(&2.0) - &one;
    let t4 = chebyshev_univariate::<f64>(4).compose(&[shifted]).expect("one var");
    let edge = u5.restrict_face(Face::SetVarZero(1)).expect("two vars");
    let quartic = &(&FPoly::constant(1, 64.0) + &x.scale(&(27.0 * k.b - 54.0 * k.a))) + &x.pow(2).scale(&(162.0 * k.b));
    let factored = &(&(&x * &(&one - &x.scale(&2.0))) * &(&one - &x.scale(&3.0)).pow(2)) * &quartic;
    let diag = &one - &u5_diagonal(k);
    let square = (&x.scale(&9.0) + &FPoly::constant(1, k.d_root)).pow(2).scale(&(2.0 * k.b));
    [
        edge.max_coeff_diff(&t4),
        diag.max_coeff_diff(&factored),
        quartic.max_coeff_diff(&square),
    ]
}

/// Diagonal parameters `(t_1, t_2)` of the interior extremal orbits of `R_5`
/// on the face `Σ x_i = 1`: `U_5(t_1, t_1) = -1` at a diagonal minimum and
/// `t_2 = -d/9`, the double root of the quartic factor where `U_5 = 1`.
pub fn diagonal_extremal_params(k: &R5Constants) -> (f64, f64) {
    let diag = u5_diagonal(k);
    let d1 = diag.partial_derivative(0).expect("one var");
    let d2 = d1.partial_derivative(0).expect("one var");
    let mut t = 0.46;
    for _ in 0..50 {
        let g = d1.eval_f64(&[t]).expect("one var");
        let h = d2.eval_f64(&[t]).expect("one var");
        let step = g / h;
        t -= step;
        if step.abs() < 1e-16 {
            break;
        }
    }
    (t, -k.d_root / 9.0)
}

pub fn build_r5_report(k: &R5Constants) -> FamilyReport<f64> {
    FamilyReport {
        dimension: 3,
        polynomial: build_r5(k),
        r_value: k.leading,
        construction_log: vec![
            format!("real roots of the degree-8 polynomial: {:?}", k.real_roots),
            format!("selected root d = {}", k.d_root),
            format!("a = {}, b = {}, 27^2 b = {}", k.a, k.b, k.leading),
        ],
    }
}

/// `p(x_1^2, ..., x_d^2)`.
pub fn lift_to_ball<C: Coeff>(p: &Poly<C>) -> Poly<C> {
    let d = p.nvars();
    let subs: Vec<Poly<C>> = (0..d).map(|i| Poly::var(d, i).pow(2)).collect();
    p.compose(&subs).expect("one substitution per variable")
}

/// `x^α` as a polynomial over `C`.
pub fn monomial_target<C: Coeff>(alpha: &[u32]) -> Poly<C> {
    Poly::monomial(alpha.to_vec().into(), C::one())
}

/// Expected leading coefficient `r_d` as `f64` (lossy for large `d`).
pub fn rd_f64(d: usize) -> f64 {
    rd_closed_form(d).to_f64().unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;

    fn int(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn r3_explicit_values() {
        let r = r3();
        let z = rational(0, 1);
        let h = rational(1, 2);
        assert_eq!(r.eval(&[z.clone(), z.clone(), z.clone()]).unwrap(), rational(1, 1));
        assert_eq!(r.eval(&[h.clone(), h, z]).unwrap(), rational(-1, 1));
    }

    #[test]
    fn r3_from_monomials_matches_e_basis() {
        let x = |i| QPoly::var(3, i);
        let s = &(&x(0) + &x(1)) + &x(2);
        let e2 = &(&(&x(0) * &x(1)) + &(&x(1) * &x(2))) + &(&x(0) * &x(2));
        let expanded = &(&(&(&(&x(0) * &x(1)) * &x(2)).scale(&q(72)) - &s.scale(&q(4))) + &s.pow(2).scale(&q(4)))
            - &(&e2.scale(&q(8)) - &QPoly::one(3));
        assert!(expanded.approx_eq(&r3(), 0.0));
    }

    #[test]
    fn first_rd_values() {
        for (d, v) in [(3, 72i64), (4, 896), (5, 14400), (6, 283392)] {
            assert_eq!(compute_rd(d, RdMethod::ClosedForm).unwrap(), int(v));
            assert_eq!(compute_rd(d, RdMethod::Recursive).unwrap(), int(v));
        }
        assert_eq!(compute_rd(11, RdMethod::ClosedForm).unwrap(), int(6_939_874_934_784));
        assert!(compute_rd(2, RdMethod::ClosedForm).is_err());
    }

    #[test]
    fn t4_explicit_formula() {
        let t4 = build_td(4).unwrap().polynomial;
        let e = |k| elementary_symmetric::<Rational>(k, 4).unwrap();
        let expected = &(&(&(&e(4).scale(&q(896)) - &e(3).scale(&q(72))) + &e(1).scale(&q(4)))
            - &e(1).pow(2).scale(&q(4)))
            + &(&e(2).scale(&q(8)) - &QPoly::one(4));
        assert_eq!(t4, expected);
        assert_eq!(t4.coeff(&[1, 1, 1, 1]), rational(896, 1));
    }

    #[test]
    fn td3_is_r3() {
        assert_eq!(build_td(3).unwrap().polynomial, r3());
    }

    #[test]
    fn td_center_value_is_one() {
        for d in 3..=8 {
            let t = build_td(d).unwrap().polynomial;
            assert_eq!(t.eval(&uniform_point(d, d)).unwrap(), rational(1, 1), "d={d}");
        }
    }

    #[test]
    fn r3_coordinate_face() {
        let f = r3().restrict_face(Face::SetVarZero(2)).unwrap();
        let x = QPoly::var(2, 0);
        let y = QPoly::var(2, 1);
        let one = QPoly::one(2);
        let expected = &(&(&one - &x.scale(&q(2))).pow(2) + &(&one - &y.scale(&q(2))).pow(2)) - &one;
        assert_eq!(f, expected);
    }

    #[test]
    fn u3_edges_are_shifted_chebyshev() {
        let u3 = build_u3();
        assert_eq!(r3().restrict_face(Face::AffineLast).unwrap(), u3);
        let edge = u3.restrict_face(Face::SetVarZero(1)).unwrap();
        let t2: QPoly = chebyshev_univariate(2);
        let shifted = t2
            .compose(&[&QPoly::var(1, 0).scale(&q(2)) - &QPoly::one(1)])
            .unwrap();
        assert_eq!(edge, shifted);
        assert_eq!(edge.coeff(&[2]), q(8));
        assert_eq!(edge.coeff(&[1]), q(-8));
        assert_eq!(edge.coeff(&[0]), q(1));
    }

    #[test]
    fn r5_constants_match_reported_digits() {
        let k = derive_r5_constants().unwrap();
        assert_eq!(k.real_roots.len(), 4);
        assert!((k.d_root + 1.208972894).abs() < 1e-8);
        assert!((k.a - 28.5926243).abs() < 1e-6);
        assert!((k.b - 21.8935834).abs() < 1e-6);
        assert!((k.leading - 15960.4223).abs() < 1e-4);
    }

    #[test]
    fn no_root_in_empty_bracket() {
        let coeffs = [1.0, 0.0, 1.0];
        assert!(real_roots_in(&coeffs, -3.0, 3.0, 0.01).is_empty());
    }

    #[test]
    fn r5_point_values() {
        let k = derive_r5_constants().unwrap();
        let r5 = build_r5(&k);
        let c = 1.0 / 3.0;
        assert!((r5.eval_f64(&[c, c, c]).unwrap() - 1.0).abs() < 1e-9);
        assert!((r5.eval_f64(&[0.5, 0.5, 0.0]).unwrap() - 1.0).abs() < 1e-9);
        let face = r5.restrict_face(Face::SetVarZero(2)).unwrap();
        assert!(face.approx_eq(&r5_coordinate_face(), 1e-9));
        for i in 0..3 {
            let other = r5.restrict_face(Face::SetVarZero(i)).unwrap();
            assert!(other.approx_eq(&r5_coordinate_face(), 1e-9));
        }
    }

    #[test]
    fn u5_is_r5_on_the_slanted_face() {
        let k = derive_r5_constants().unwrap();
        let u5 = build_u5(&k);
        let from_r5 = build_r5(&k).restrict_face(Face::AffineLast).unwrap();
        assert!(u5.max_coeff_diff(&from_r5) < 1e-9, "{}", u5.max_coeff_diff(&from_r5));
        assert!((u5.eval_f64(&[1.0 / 3.0, 1.0 / 3.0]).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn r5_coordinate_face_exceeds_unit_bound() {
        // Interior point of the face x_3 = 0 where the boundary formula is
        // above 1; the slanted face stays within [-1, 1].
        let f = r5_coordinate_face();
        let v = f.eval_f64(&[0.4712, 0.4303]).unwrap();
        assert!(v > 1.08, "{v}");
    }

    #[test]
    fn u5_boundary_identities() {
        let k = derive_r5_constants().unwrap();
        for r in u5_identity_residuals(&k) {
            assert!(r < 1e-8, "{r}");
        }
        let (t1, t2) = diagonal_extremal_params(&k);
        assert!((t1 - 0.4588164122).abs() < 1e-9, "{t1}");
        assert!((t2 - 0.1343303216).abs() < 1e-9, "{t2}");
        let diag = u5_diagonal(&k);
        assert!((diag.eval_f64(&[t1]).unwrap() + 1.0).abs() < 1e-9);
        assert!((diag.eval_f64(&[t2]).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn lift_examples() {
        let p = &(&QPoly::var(3, 0) * &QPoly::var(3, 1)) * &QPoly::var(3, 2);
        let lifted = lift_to_ball(&p);
        assert_eq!(lifted.coeff(&[2, 2, 2]), q(1));
        assert_eq!(lifted.num_terms(), 1);
        let lr3 = lift_to_ball(&r3());
        assert_eq!(lr3.degree(), Some(6));
        assert!(lr3.terms().all(|(m, _)| m.is_even()));
    }

    #[test]
    fn factorization_table() {
        let f = factorize(&int(177_373_184));
        assert_eq!(format_factorization(&f), "2^15*5413");
        assert_eq!(format_factorization(&factorize(&int(72))), "2^3*3^2");
        assert_eq!(format_factorization(&factorize(&int(97))), "97");
    }

    #[test]
    fn a_d_closed_form() {
        for d in 3..=12 {
            assert_eq!(t3_at_uniform(d).unwrap(), t3_at_uniform_closed(d), "d={d}");
        }
    }

    #[test]
    fn j_identity() {
        for d in 4..=10 {
            for k in 4..=d {
                let expected = if k == d { q(1) } else { q(0) };
                assert_eq!(j_kd(k, d), expected, "k={k} d={d}");
            }
        }
    }

    #[test]
    fn pure_second_partials_are_constant() {
        for d in 3..=8 {
            let t = build_td(d).unwrap().polynomial;
            let sign = if d % 2 == 1 { 8 } else { -8 };
            for i in 0..d {
                let d2 = t.partial_derivative(i).unwrap().partial_derivative(i).unwrap();
                assert!(d2.approx_eq(&QPoly::constant(d, q(sign)), 0.0), "d={d} i={i}");
            }
            let lap = t.laplacian();
            assert!(lap.approx_eq(&QPoly::constant(d, q(sign * d as i64)), 0.0), "d={d}");
        }
    }
}
