//! Extremal signatures: signed, positively weighted point sets whose
//! functional annihilates a polynomial space, and the lower-bound
//! certificate built on them.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Pow, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::constructions::{build_r5, build_td, diagonal_extremal_params, uniform_point, R5Constants};
use crate::error::{Error, Result};
use crate::poly::{Monomial, Poly, QPoly};
use crate::scalar::{Coeff, Rational};
use crate::supnorm::Domain;
use crate::symfun::{distinct_permutations, partitions};

#[derive(Clone, Debug, PartialEq)]
pub struct SignedPointSet<C> {
    pub points: Vec<Vec<C>>,
    pub signs: Vec<i8>,
    pub weights: Option<Vec<C>>,
}

impl<C: Coeff> SignedPointSet<C> {
    pub fn new(points: Vec<Vec<C>>, signs: Vec<i8>, weights: Option<Vec<C>>) -> Result<Self> {
        if points.len() != signs.len() || weights.as_ref().is_some_and(|w| w.len() != points.len()) {
            return Err(Error::InvalidArgument("points, signs and weights differ in length".into()));
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidArgument("signs must be ±1".into()));
        }
        for (i, p) in points.iter().enumerate() {
            if points[..i].contains(p) {
                return Err(Error::InvalidArgument(format!("duplicate point at index {i}")));
            }
        }
        if let Some(w) = &weights {
            if let Some(i) = w.iter().position(|x| !x.is_positive()) {
                return Err(Error::InvalidArgument(format!("weight {i} is not positive")));
            }
        }
        Ok(SignedPointSet { points, signs, weights })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn weight(&self, i: usize) -> C {
        self.weights.as_ref().map_or_else(C::one, |w| w[i].clone())
    }

    fn total_weight(&self) -> f64 {
        (0..self.len()).map(|i| self.weight(i).to_f64().abs()).sum()
    }
}

/// All distinct coordinate permutations of `base`, in lexicographic order.
pub fn orbit<C: Coeff>(base: &[C]) -> Vec<Vec<C>> {
    distinct_permutations(base)
}

/// The ladders of points `(1/j, ..., 1/j, 0, ..., 0)` and their orbits:
/// `j ≡ d (mod 2)` goes to the positive set, the rest to the negative set.
pub fn build_extremal_sets(d: usize) -> Result<(Vec<Vec<Rational>>, Vec<Vec<Rational>>)> {
    if d < 3 {
        return Err(Error::InvalidArgument(format!("d must be ≥ 3, got {d}")));
    }
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for j in (1..=d).rev() {
        let pts = orbit(&uniform_point(j, d));
        if (d - j) % 2 == 0 {
            plus.extend(pts);
        } else {
            minus.extend(pts);
        }
    }
    Ok((plus, minus))
}

/// Weight `j^{d-1}` and sign `(-1)^{d-j}` on every point of the orbit of
/// `(1/j, ..., 1/j, 0, ..., 0)`, `j = d, ..., 1`.
pub fn build_l_functional(d: usize) -> Result<SignedPointSet<Rational>> {
    if d < 3 {
        return Err(Error::InvalidArgument(format!("d must be ≥ 3, got {d}")));
    }
    let mut points = Vec::new();
    let mut signs = Vec::new();
    let mut weights = Vec::new();
    for j in (1..=d).rev() {
        for p in orbit(&uniform_point(j, d)) {
            points.push(p);
            signs.push(if (d - j) % 2 == 0 { 1 } else { -1 });
            weights.push(Rational::from_integer(BigInt::from(j).pow((d - 1) as u32)));
        }
    }
    SignedPointSet::new(points, signs, Some(weights))
}

fn power_table<C: Coeff>(x: &[C], n: u32) -> Vec<Vec<C>> {
    x.iter()
        .map(|xi| {
            let mut row = vec![C::one()];
            for k in 1..=n as usize {
                let next = row[k - 1].clone() * xi.clone();
                row.push(next);
            }
            row
        })
        .collect()
}

fn monomial_at<C: Coeff>(table: &[Vec<C>], exps: &[u32]) -> C {
    exps.iter()
        .enumerate()
        .fold(C::one(), |acc, (i, &e)| acc * table[i][e as usize].clone())
}

/// `Σ_v λ_v σ(v) v^α` for every monomial `|α| <= n`.
pub fn functional_values<C: Coeff>(set: &SignedPointSet<C>, n: u32) -> Vec<(Monomial, C)> {
    let d = set.points.first().map_or(0, Vec::len);
    let tables: Vec<Vec<Vec<C>>> = set.points.iter().map(|p| power_table(p, n)).collect();
    Monomial::all_up_to(d, n)
        .into_iter()
        .map(|m| {
            let mut s = C::zero();
            for (i, t) in tables.iter().enumerate() {
                let term = set.weight(i) * monomial_at(t, m.exps());
                if set.signs[i] > 0 {
                    s = s + term;
                } else {
                    s = s - term;
                }
            }
            (m, s)
        })
        .collect()
}

/// Largest `|Σ λ_v σ(v) v^α|` over `|α| <= n`.
pub fn annihilation_residual<C: Coeff>(set: &SignedPointSet<C>, n: u32) -> C {
    functional_values(set, n)
        .into_iter()
        .map(|(_, v)| v.abs())
        .fold(C::zero(), |m, v| if v > m { v } else { m })
}

/// Exact for rational data; `residual <= tol · ‖λ‖_1` for floats.
pub fn check_annihilation<C: Coeff>(set: &SignedPointSet<C>, n: u32, tol: f64) -> bool {
    let r = annihilation_residual(set, n);
    match C::FIELD {
        crate::scalar::Field::Rational => r.is_zero(),
        crate::scalar::Field::Float64 => r.to_f64() <= tol * set.total_weight(),
    }
}

fn sorted<C: Coeff>(x: &[C]) -> Vec<C> {
    let mut v = x.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    v
}

fn same_point<C: Coeff>(a: &[C], b: &[C]) -> bool {
    a.iter().zip(b).all(|(x, y)| x.within(y, 1e-12))
}

#[derive(Clone, Debug)]
struct OrbitClass<C> {
    representative: Vec<C>,
    sign: i8,
    members: Vec<usize>,
}

fn orbit_classes<C: Coeff>(points: &[Vec<C>], signs: &[i8]) -> Vec<OrbitClass<C>> {
    let mut classes: Vec<OrbitClass<C>> = Vec::new();
    for (i, p) in points.iter().enumerate() {
        let key = sorted(p);
        match classes
            .iter_mut()
            .find(|c| c.sign == signs[i] && same_point(&c.representative, &key))
        {
            Some(c) => c.members.push(i),
            None => classes.push(OrbitClass { representative: key, sign: signs[i], members: vec![i] }),
        }
    }
    classes
}

/// The functional evaluated through orbit representatives: for each
/// partition `λ` with `|λ| <= n`,
/// `Σ_O λ_O σ_O |O| m_λ(rep_O) / |orbit(λ)|`. Requires weights constant on
/// orbits; returns `None` otherwise.
pub fn functional_values_by_orbits<C: Coeff>(set: &SignedPointSet<C>, n: u32) -> Option<Vec<(Vec<u32>, C)>> {
    let d = set.points.first().map_or(0, Vec::len);
    let classes = orbit_classes(&set.points, &set.signs);
    for c in &classes {
        let w = set.weight(c.members[0]);
        if c.members.iter().any(|&i| set.weight(i) != w) {
            return None;
        }
    }
    let mut out = Vec::new();
    for k in 0..=n {
        for lam in partitions(k, d) {
            let mut e = lam.clone();
            e.resize(d, 0);
            let lam_orbit = distinct_permutations(&e);
            let mut s = C::zero();
            for c in &classes {
                let t = power_table(&c.representative, n);
                let m_lam = lam_orbit.iter().fold(C::zero(), |acc, a| acc + monomial_at(&t, a));
                let term = set.weight(c.members[0]) * C::from_i64(c.members.len() as i64) * m_lam
                    / C::from_i64(lam_orbit.len() as i64);
                if c.sign > 0 {
                    s = s + term;
                } else {
                    s = s - term;
                }
            }
            out.push((e, s));
        }
    }
    Some(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitWeight {
    pub representative: Vec<f64>,
    pub sign: i8,
    pub size: usize,
    /// Weight of each point of the orbit.
    pub weight: f64,
}

#[derive(Clone, Debug)]
pub enum SignatureWeights<C> {
    Feasible { set: SignedPointSet<C>, orbits: Vec<OrbitWeight> },
    Infeasible { reason: String },
}

/// Positive weights, constant on orbits and normalized to `Σ λ_v = 1`, with
/// which the signed functional annihilates `Π_n`. A nullspace of dimension
/// above one is reported as `Error::Degenerate`.
pub fn solve_signature_weights<C: Coeff>(
    s_plus: &[Vec<C>],
    s_minus: &[Vec<C>],
    n: u32,
    d: usize,
) -> Result<SignatureWeights<C>> {
    let points: Vec<Vec<C>> = s_plus.iter().chain(s_minus).cloned().collect();
    if let Some(p) = points.iter().find(|p| p.len() != d) {
        return Err(Error::DimensionMismatch { expected: d, got: p.len() });
    }
    let signs: Vec<i8> = s_plus.iter().map(|_| 1).chain(s_minus.iter().map(|_| -1)).collect();
    let classes = orbit_classes(&points, &signs);
    let mut rows = Vec::new();
    for k in 0..=n {
        for lam in partitions(k, d) {
            let row: Vec<C> = classes
                .iter()
                .map(|c| {
                    let s = c.members.iter().fold(C::zero(), |acc, &i| {
                        let t = power_table(&points[i], n);
                        acc + monomial_at(&t, &lam)
                    });
                    if c.sign > 0 {
                        s
                    } else {
                        -s
                    }
                })
                .collect();
            rows.push(row);
        }
    }
    let null = C::nullspace(&rows, classes.len());
    match null.len() {
        0 => {
            return Ok(SignatureWeights::Infeasible {
                reason: "only the zero measure annihilates the space".into(),
            })
        }
        1 => {}
        k => return Err(Error::Degenerate { nullity: k }),
    }
    let mut v = null.into_iter().next().expect("nullity one");
    let scale = v.iter().fold(0.0f64, |m, x| m.max(x.to_f64().abs()));
    let floor = match C::FIELD {
        crate::scalar::Field::Rational => 0.0,
        crate::scalar::Field::Float64 => 1e-12 * scale,
    };
    if v.iter().map(|x| x.to_f64()).sum::<f64>() < 0.0 {
        v = v.into_iter().map(|x| -x).collect();
    }
    if v.iter().any(|x| x.to_f64() <= floor) {
        return Ok(SignatureWeights::Infeasible {
            reason: "the annihilating measure changes sign".into(),
        });
    }
    let total = classes
        .iter()
        .zip(&v)
        .fold(C::zero(), |acc, (c, x)| acc + x.clone() * C::from_i64(c.members.len() as i64));
    let mut weights = vec![C::zero(); points.len()];
    let mut orbits = Vec::new();
    for (c, x) in classes.iter().zip(&v) {
        let w = x.clone() / total.clone();
        for &i in &c.members {
            weights[i] = w.clone();
        }
        orbits.push(OrbitWeight {
            representative: c.representative.iter().map(Coeff::to_f64).collect(),
            sign: c.sign,
            size: c.members.len(),
            weight: w.to_f64(),
        });
    }
    Ok(SignatureWeights::Feasible {
        set: SignedPointSet::new(points, signs, Some(weights))?,
        orbits,
    })
}

/// Data of the sufficiency theorem: if `f - p*` equals `σ(v) r` on the
/// support and the weighted signed functional annihilates `Π_n`, then
/// `E_n(f; Ω) >= r`.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate<C: Coeff> {
    pub target: Poly<C>,
    pub candidate: Poly<C>,
    pub level: C,
    pub degree: u32,
    pub support: SignedPointSet<C>,
    pub domain: Domain,
}

impl<C: Coeff> Certificate<C> {
    pub fn to_json(&self) -> Value {
        json!({
            "target": self.target.to_json(),
            "candidate": self.candidate.to_json(),
            "level": self.level.to_json(),
            "degree": self.degree,
            "domain": serde_json::to_value(self.domain).expect("plain enum"),
            "points": self.support.points.iter().map(|p| p.iter().map(Coeff::to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "signs": self.support.signs,
            "weights": self.support.weights.as_ref().map(|w| w.iter().map(Coeff::to_json).collect::<Vec<_>>()),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let parse_vec = |x: &Value| -> Result<Vec<C>> {
            x.as_array()
                .ok_or_else(|| Error::Parse("expected an array".into()))?
                .iter()
                .map(C::from_json)
                .collect()
        };
        let points = v["points"]
            .as_array()
            .ok_or_else(|| Error::Parse("missing points".into()))?
            .iter()
            .map(parse_vec)
            .collect::<Result<Vec<_>>>()?;
        let signs = v["signs"]
            .as_array()
            .ok_or_else(|| Error::Parse("missing signs".into()))?
            .iter()
            .map(|s| s.as_i64().map(|s| s as i8).ok_or_else(|| Error::Parse("bad sign".into())))
            .collect::<Result<Vec<_>>>()?;
        let weights = match &v["weights"] {
            Value::Null => None,
            w => Some(parse_vec(w)?),
        };
        Ok(Certificate {
            target: Poly::from_json(&v["target"])?,
            candidate: Poly::from_json(&v["candidate"])?,
            level: C::from_json(&v["level"])?,
            degree: v["degree"].as_u64().ok_or_else(|| Error::Parse("missing degree".into()))? as u32,
            support: SignedPointSet::new(points, signs, weights)?,
            domain: serde_json::from_value(v["domain"].clone()).map_err(|e| Error::Parse(e.to_string()))?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum CertFailure {
    NonPositiveLevel,
    MissingWeights,
    NonPositiveWeight { index: usize },
    CandidateDegree { degree: u32, n: u32 },
    DimensionMismatch { index: usize },
    OutsideDomain { index: usize },
    SignMismatch { index: usize, residual: f64 },
    NotAnnihilating { residual: f64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificationOutcome {
    pub certified: bool,
    pub failures: Vec<CertFailure>,
    pub max_level_residual: f64,
    pub annihilation_residual: f64,
    /// `r` minus the slack admitted by `tol`; the certified lower bound.
    pub lower_bound: f64,
}

/// Checks every hypothesis of the sufficiency theorem separately. Rational
/// certificates are checked exactly and `tol` is ignored.
pub fn certify_lower_bound<C: Coeff>(cert: &Certificate<C>, tol: f64) -> CertificationOutcome {
    let mut failures = Vec::new();
    let exact = C::FIELD == crate::scalar::Field::Rational;
    if !cert.level.is_positive() {
        failures.push(CertFailure::NonPositiveLevel);
    }
    match &cert.support.weights {
        None => failures.push(CertFailure::MissingWeights),
        Some(w) => {
            for (i, x) in w.iter().enumerate() {
                if !x.is_positive() {
                    failures.push(CertFailure::NonPositiveWeight { index: i });
                }
            }
        }
    }
    let cand_deg = cert.candidate.degree().unwrap_or(0);
    if cand_deg > cert.degree {
        failures.push(CertFailure::CandidateDegree { degree: cand_deg, n: cert.degree });
    }
    let d = cert.target.nvars();
    let mut max_res = 0.0f64;
    for (i, v) in cert.support.points.iter().enumerate() {
        if v.len() != d || cert.candidate.nvars() != d {
            failures.push(CertFailure::DimensionMismatch { index: i });
            continue;
        }
        let xf: Vec<f64> = v.iter().map(Coeff::to_f64).collect();
        if !cert.domain.contains(&xf, 1e-12 + tol) {
            failures.push(CertFailure::OutsideDomain { index: i });
        }
        let fv = cert.target.eval(v).expect("dimension checked");
        let pv = cert.candidate.eval(v).expect("dimension checked");
        let sr = if cert.support.signs[i] > 0 { cert.level.clone() } else { -cert.level.clone() };
        let e = fv - pv - sr;
        let ef = e.to_f64().abs();
        max_res = max_res.max(ef);
        if !e.within(&C::zero(), tol) {
            failures.push(CertFailure::SignMismatch { index: i, residual: ef });
        }
    }
    let ann = annihilation_residual(&cert.support, cert.degree).to_f64();
    if !check_annihilation(&cert.support, cert.degree, tol) {
        failures.push(CertFailure::NotAnnihilating { residual: ann });
    }
    let slack = if exact { 0.0 } else { max_res };
    CertificationOutcome {
        certified: failures.is_empty(),
        failures,
        max_level_residual: max_res,
        annihilation_residual: ann,
        lower_bound: cert.level.to_f64() - slack,
    }
}

/// `x_1 ⋯ x_d` against `x_1 ⋯ x_d - T_d / r_d` at level `1 / r_d` on `T^d`,
/// supported on the ladder orbits with weights `j^{d-1}` normalized to
/// total mass one.
pub fn td_certificate(d: usize) -> Result<Certificate<Rational>> {
    let fam = build_td(d)?;
    let mut target = QPoly::one(d);
    for i in 0..d {
        target = &target * &QPoly::var(d, i);
    }
    let inv = Rational::one() / fam.r_value.clone();
    let candidate = &target - &fam.polynomial.scale(&inv);
    let mut support = build_l_functional(d)?;
    let w = support.weights.take().expect("weights present");
    let total = w.iter().fold(Rational::zero(), |a, x| a + x);
    support.weights = Some(w.into_iter().map(|x| x / total.clone()).collect());
    Ok(Certificate {
        target,
        candidate,
        level: inv,
        degree: (d - 1) as u32,
        support,
        domain: Domain::Simplex(d),
    })
}

/// Reported orbit weights of the degree-5 signature on `T^3`, in the order
/// center, vertices, edge midpoints, the edge orbit through
/// `((2-√2)/4, (2+√2)/4, 0)`, the diagonal orbit at `t_2` and the diagonal
/// orbit at `t_1`. Summed with orbit sizes they give total mass one.
pub const R5_REPORTED_WEIGHTS: [f64; 6] = [
    0.0997251873,
    0.0097228135,
    0.0621246411,
    0.0243979796,
    0.0615774830,
    0.1178707075,
];

/// Orbit representatives matching `R5_REPORTED_WEIGHTS`.
pub fn r5_orbit_bases(k: &R5Constants) -> Vec<Vec<f64>> {
    let (t1, t2) = diagonal_extremal_params(k);
    let s2 = 2f64.sqrt();
    let third = 1.0 / 3.0;
    vec![
        vec![third, third, third],
        vec![1.0, 0.0, 0.0],
        vec![0.5, 0.5, 0.0],
        vec![(2.0 - s2) / 4.0, (2.0 + s2) / 4.0, 0.0],
        vec![t2, t2, 1.0 - 2.0 * t2],
        vec![t1, t1, 1.0 - 2.0 * t1],
    ]
}

/// `(x_1x_2x_3)^2` against `f - R_5 / (27^2 b)` on `T^3` with the reported
/// orbit weights. Signs are read off `R_5` at each point.
pub fn r5_certificate(k: &R5Constants, degree: u32) -> Result<Certificate<f64>> {
    let r5 = build_r5(k);
    let mut target = Poly::<f64>::one(3);
    for i in 0..3 {
        target = &target * &Poly::var(3, i);
    }
    let target = target.pow(2);
    let level = 1.0 / k.leading;
    let candidate = &target - &r5.scale(&level);
    let mut points = Vec::new();
    let mut signs = Vec::new();
    let mut weights = Vec::new();
    for (base, &w) in r5_orbit_bases(k).iter().zip(&R5_REPORTED_WEIGHTS) {
        for p in orbit(base) {
            let v = r5.eval_f64(&p)?;
            signs.push(if v >= 0.0 { 1 } else { -1 });
            points.push(p);
            weights.push(w);
        }
    }
    Ok(Certificate {
        target,
        candidate,
        level,
        degree,
        support: SignedPointSet::new(points, signs, Some(weights))?,
        domain: Domain::Simplex(3),
    })
}

/// `Σ_{j=0}^d (-1)^j C(d,j) j^k`.
pub fn combi_identity(d: u32, k: u32) -> BigInt {
    let mut s = BigInt::zero();
    for j in 0..=d {
        let t = BigInt::from(binomial(d as u64, j as u64)) * BigInt::from(j).pow(k);
        if j % 2 == 0 {
            s += t;
        } else {
            s -= t;
        }
    }
    s
}

#[derive(Clone, Debug, Serialize)]
pub struct CubatureRow {
    pub exponent: [u32; 2],
    pub l1: String,
    pub l2: String,
    /// `2 ∫_{T^2} x^a y^b = 2 a! b! / (a+b+2)!`.
    pub integral: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CubatureReport {
    pub rows: Vec<CubatureRow>,
    pub exact_through_degree_2: bool,
    pub degree_3_witness: Option<[u32; 2]>,
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * BigInt::from(k))
}

/// The two positive parts of the degree-2 signature on the face `Σ x_i = 1`,
/// read in the chart `(x, y)`: `L_1 = 3/4 f(center) + 1/12 Σ f(vertices)`,
/// `L_2 = 1/3 Σ f(edge midpoints)`. Both integrate `Π_2` exactly against
/// twice Lebesgue measure on `T^2`; they separate at degree 3.
pub fn cubature_check() -> CubatureReport {
    let q = |n, d| Rational::new(BigInt::from(n), BigInt::from(d));
    let third = q(1, 3);
    let half = q(1, 2);
    let zero = Rational::zero();
    let one = Rational::one();
    let mono = |x: &Rational, y: &Rational, a: u32, b: u32| x.pow(a as i32) * y.pow(b as i32);
    let mut rows = Vec::new();
    let mut exact = true;
    let mut witness = None;
    for deg in 0..=3u32 {
        for a in (0..=deg).rev() {
            let b = deg - a;
            let l1 = q(3, 4) * mono(&third, &third, a, b)
                + q(1, 12) * (mono(&one, &zero, a, b) + mono(&zero, &one, a, b) + mono(&zero, &zero, a, b));
            let l2 = q(1, 3) * (mono(&half, &half, a, b) + mono(&half, &zero, a, b) + mono(&zero, &half, a, b));
            let integral = Rational::new(BigInt::from(2) * factorial(a) * factorial(b), factorial(a + b + 2));
            if deg <= 2 && !(l1 == l2 && l1 == integral) {
                exact = false;
            }
            if deg == 3 && l1 != l2 && witness.is_none() {
                witness = Some([a, b]);
            }
            rows.push(CubatureRow {
                exponent: [a, b],
                l1: l1.to_string(),
                l2: l2.to_string(),
                integral: integral.to_string(),
            });
        }
    }
    CubatureReport { rows, exact_through_degree_2: exact, degree_3_witness: witness }
}

#[derive(Clone, Debug, Serialize)]
pub struct R5CubatureReport {
    /// Largest `|L_+(m) - ∫ m|` over chart monomials of each total degree.
    pub error_by_degree: Vec<f64>,
    /// Lowest degree at which the positive part stops being exact.
    pub first_inexact_degree: Option<u32>,
}

/// Normalized positive part of the `R_5` signature, tested as a cubature
/// rule for twice Lebesgue measure on the face chart `T^2`.
pub fn r5_cubature_check(k: &R5Constants, tol: f64) -> Result<R5CubatureReport> {
    let cert = r5_certificate(k, 5)?;
    let set = &cert.support;
    let weights = set.weights.clone().unwrap_or_else(|| vec![1.0; set.len()]);
    let plus: Vec<(&Vec<f64>, f64)> = set
        .points
        .iter()
        .zip(&set.signs)
        .zip(&weights)
        .filter(|((_, &s), _)| s > 0)
        .map(|((p, _), &w)| (p, w))
        .collect();
    let mass: f64 = plus.iter().map(|(_, w)| w).sum();
    let mut error_by_degree = Vec::new();
    let mut first = None;
    for deg in 0..=5u32 {
        let mut worst = 0.0f64;
        for a in 0..=deg {
            let b = deg - a;
            let rule: f64 = plus.iter().map(|(p, w)| w * p[0].powi(a as i32) * p[1].powi(b as i32)).sum::<f64>() / mass;
            let exact = Rational::new(BigInt::from(2) * factorial(a) * factorial(b), factorial(a + b + 2)).to_f64();
            worst = worst.max((rule - exact).abs());
        }
        if worst > tol && first.is_none() {
            first = Some(deg);
        }
        error_by_degree.push(worst);
    }
    Ok(R5CubatureReport { error_by_degree, first_inexact_degree: first })
}

/// Groups the signed support by orbit, for reporting.
pub fn orbit_summary<C: Coeff>(set: &SignedPointSet<C>) -> BTreeMap<String, (i8, usize)> {
    orbit_classes(&set.points, &set.signs)
        .into_iter()
        .map(|c| {
            let key = c.representative.iter().map(|x| format!("{:.10}", x.to_f64())).collect::<Vec<_>>().join(",");
            (key, (c.sign, c.members.len()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::derive_r5_constants;
    use crate::scalar::rational;

    #[test]
    fn orbit_sizes() {
        assert_eq!(orbit(&[1.0, 0.0, 0.0]).len(), 3);
        assert_eq!(orbit(&[0.2, 0.2, 0.6]).len(), 3);
        assert_eq!(orbit(&[0.25; 4]).len(), 1);
    }

    #[test]
    fn extremal_sets_small() {
        let (p, m) = build_extremal_sets(3).unwrap();
        assert_eq!(p.len(), 4);
        assert_eq!(m.len(), 3);
        assert!(m.contains(&vec![rational(1, 2), rational(1, 2), rational(0, 1)]));
        let (p, m) = build_extremal_sets(4).unwrap();
        assert_eq!((p.len(), m.len()), (7, 8));
    }

    #[test]
    fn extremal_sets_take_unit_values() {
        for d in 3..=8 {
            let t = build_td(d).unwrap().polynomial;
            let (p, m) = build_extremal_sets(d).unwrap();
            assert!(p.iter().all(|x| t.eval(x).unwrap() == rational(1, 1)), "d={d}");
            assert!(m.iter().all(|x| t.eval(x).unwrap() == rational(-1, 1)), "d={d}");
        }
    }

    #[test]
    fn l_functional_annihilates() {
        for d in 3..=7 {
            let l = build_l_functional(d).unwrap();
            assert!(check_annihilation(&l, (d - 1) as u32, 0.0), "d={d}");
            assert!(!check_annihilation(&l, d as u32, 0.0));
        }
        let l = build_l_functional(3).unwrap();
        let mut dropped = l.clone();
        dropped.points.truncate(4);
        dropped.signs.truncate(4);
        dropped.weights.as_mut().unwrap().truncate(4);
        assert!(!check_annihilation(&dropped, 2, 0.0));
    }

    #[test]
    fn l_functional_on_e_d() {
        for d in 3..=6 {
            let l = build_l_functional(d).unwrap();
            let ones = vec![1; d];
            let v = functional_values(&l, d as u32)
                .into_iter()
                .find(|(m, _)| m.exps() == ones.as_slice())
                .unwrap()
                .1;
            assert_eq!(v, rational(1, d as i64));
        }
    }

    #[test]
    fn r3_weights_recovered() {
        let (p, m) = build_extremal_sets(3).unwrap();
        let SignatureWeights::Feasible { orbits, .. } = solve_signature_weights(&p, &m, 2, 3).unwrap() else {
            panic!("expected feasible")
        };
        let w: Vec<(usize, f64)> = orbits.iter().map(|o| (o.size, o.weight)).collect();
        // center 3/8, vertices 1/24 each, midpoints 1/6 each.
        assert_eq!(w.len(), 3);
        assert!(w.contains(&(1, 0.375)));
        assert!(w.iter().any(|&(s, x)| s == 3 && (x - 1.0 / 24.0).abs() < 1e-15));
        assert!(w.iter().any(|&(s, x)| s == 3 && (x - 1.0 / 6.0).abs() < 1e-15));
    }

    #[test]
    fn one_degree_too_high_is_infeasible() {
        for d in 3..=5 {
            let (p, m) = build_extremal_sets(d).unwrap();
            let r = solve_signature_weights(&p, &m, d as u32, d).unwrap();
            assert!(matches!(r, SignatureWeights::Infeasible { .. }));
        }
    }

    #[test]
    fn td_certificates_exact() {
        for d in 3..=6 {
            let c = td_certificate(d).unwrap();
            let out = certify_lower_bound(&c, 0.0);
            assert!(out.certified, "d={d} {:?}", out.failures);
        }
    }

    #[test]
    fn flipped_sign_fails() {
        let mut c = td_certificate(3).unwrap();
        c.support.signs[0] = -c.support.signs[0];
        let out = certify_lower_bound(&c, 0.0);
        assert!(!out.certified);
        assert!(out.failures.iter().any(|f| matches!(f, CertFailure::SignMismatch { index: 0, .. })));
    }

    #[test]
    fn r5_certificate_and_weights() {
        let k = derive_r5_constants().unwrap();
        let c = r5_certificate(&k, 5).unwrap();
        let out = certify_lower_bound(&c, 1e-8);
        assert!(out.certified, "{:?}", out.failures);
        let mass: f64 = c.support.weights.as_ref().unwrap().iter().sum();
        assert!((mass - 1.0).abs() < 1e-8);

        let (plus, minus): (Vec<_>, Vec<_>) = c
            .support
            .points
            .iter()
            .zip(&c.support.signs)
            .partition(|(_, &s)| s > 0);
        let plus: Vec<Vec<f64>> = plus.into_iter().map(|(p, _)| p.clone()).collect();
        let minus: Vec<Vec<f64>> = minus.into_iter().map(|(p, _)| p.clone()).collect();
        let SignatureWeights::Feasible { set, .. } = solve_signature_weights(&plus, &minus, 5, 3).unwrap() else {
            panic!("expected feasible")
        };
        let solved = set.weights.unwrap();
        for (i, p) in set.points.iter().enumerate() {
            let j = c.support.points.iter().position(|q| q == p).unwrap();
            let reported = c.support.weights.as_ref().unwrap()[j];
            assert!((solved[i] - reported).abs() < 1e-5, "{p:?}: {} vs {reported}", solved[i]);
        }
    }

    #[test]
    fn certificate_json_round_trip() {
        let c = td_certificate(4).unwrap();
        let back = Certificate::<Rational>::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
        let k = derive_r5_constants().unwrap();
        let c = r5_certificate(&k, 5).unwrap();
        let back = Certificate::<f64>::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn combi_values() {
        assert_eq!(combi_identity(4, 2), BigInt::zero());
        assert_eq!(combi_identity(5, 4), BigInt::zero());
        assert_eq!(combi_identity(3, 3), BigInt::from(-6));
    }

    #[test]
    fn cubature() {
        let r = cubature_check();
        assert!(r.exact_through_degree_2);
        assert_eq!(r.rows[0].l1, "1");
        assert_eq!(r.rows[1].l1, "1/3");
        assert!(r.degree_3_witness.is_some());
    }

    #[test]
    fn orbit_reduction_matches_full_sum() {
        let l = build_l_functional(4).unwrap();
        let full = functional_values(&l, 4);
        let by_orbit = functional_values_by_orbits(&l, 4).unwrap();
        for (m, v) in full {
            let mut key = m.exps().to_vec();
            key.sort_by(|a, b| b.cmp(a));
            let w = &by_orbit.iter().find(|(e, _)| *e == key).unwrap().1;
            assert_eq!(&v, w);
        }
    }

    #[test]
    fn r5_positive_part_is_not_degree_5_cubature() {
        let k = derive_r5_constants().unwrap();
        let rep = r5_cubature_check(&k, 1e-6).unwrap();
        assert!(rep.error_by_degree[0] < 1e-12);
        assert!(rep.error_by_degree[1] < 1e-12);
        assert_eq!(rep.first_inexact_degree, Some(2));
    }
}
