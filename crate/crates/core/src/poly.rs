//! Sparse multivariate polynomials.
//!
//! A [`Poly`] maps exponent vectors to nonzero coefficients. Terms are kept
//! in graded-lexicographic order so iteration, equality and serialization
//! are deterministic.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};


use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::{Coeff, Field, Rational};

/// Exponent vector of a monomial `x^α`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_even(&self) -> bool {
        self.0.iter().all(|e| e % 2 == 0)
    }

    /// Every monomial in `nvars` variables of total degree `<= n`, in graded
    /// order.
    pub fn all_up_to(nvars: usize, n: u32) -> Vec<Monomial> {
        fn rec(i: usize, rem: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if i == cur.len() {
                out.push(Monomial(cur.clone()));
                return;
            }
            for k in 0..=rem {
                cur[i] = k;
                rec(i + 1, rem - k, cur, out);
            }
            cur[i] = 0;
        }
        let mut out = Vec::new();
        rec(0, n, &mut vec![0; nvars], &mut out);
        out.sort();
        out
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Vec<u32>> for Monomial {
    fn from(v: Vec<u32>) -> Self {
        Monomial(v)
    }
}

/// Substitutions accepted by [`Poly::restrict_face`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Face {
    /// `x_i := 0`, dropping variable `i`.
    SetVarZero(usize),
    /// `x_d := 1 - x_1 - ... - x_{d-1}`.
    AffineLast,
}

#[derive(Clone, PartialEq)]
pub struct Poly<C> {
    nvars: usize,
    terms: BTreeMap<Monomial, C>,
}

pub type QPoly = Poly<Rational>;
pub type FPoly = Poly<f64>;

impl<C: Coeff> Poly<C> {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        Self::monomial(Monomial::one(nvars), c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, C::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(Monomial::var(nvars, i), C::one())
    }

    pub fn monomial(m: Monomial, c: C) -> Self {
        let mut p = Self::zero(m.nvars());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, merging
    /// repeated keys.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, C)>,
    {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    got: e.len(),
                });
            }
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> + '_ {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: &[u32]) -> C {
        self.terms
            .get(&Monomial(exps.to_vec()))
            .cloned()
            .unwrap_or_else(C::zero)
    }

    /// Total degree; `None` stands for the degree of the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.degree().map_or(true, |d| d == 0)
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&vec![0; self.nvars])
    }

    fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = v.clone() + c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: other.nvars,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = Self::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v.clone() * c.clone()))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = Self::one(self.nvars);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Exact evaluation in the coefficient field.
    pub fn eval(&self, x: &[C]) -> Result<C> {
        if x.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: x.len(),
            });
        }
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &e) in x.iter().zip(m.exps()) {
                for _ in 0..e {
                    t = t * xi.clone();
                }
            }
            acc = acc + t;
        }
        Ok(acc)
    }

    /// Floating-point evaluation; coefficients are rounded to `f64` first.
    pub fn eval_f64(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: x.len(),
            });
        }
        Ok(self
            .terms
            .iter()
            .map(|(m, c)| {
                m.exps()
                    .iter()
                    .zip(x)
                    .fold(c.to_f64(), |t, (&e, &xi)| t * xi.powi(e as i32))
            })
            .sum())
    }

    pub fn partial_derivative(&self, i: usize) -> Result<Self> {
        if i >= self.nvars {
            return Err(Error::IndexOutOfRange {
                index: i,
                nvars: self.nvars,
            });
        }
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut k = m.0.clone();
            k[i] -= 1;
            out.add_term(Monomial(k), c.clone() * C::from_i64(e as i64));
        }
        Ok(out)
    }

    pub fn gradient(&self) -> Vec<Self> {
        (0..self.nvars)
            .map(|i| self.partial_derivative(i).expect("index in range"))
            .collect()
    }

    pub fn laplacian(&self) -> Self {
        let mut out = Self::zero(self.nvars);
        for i in 0..self.nvars {
            let d2 = self
                .partial_derivative(i)
                .and_then(|d| d.partial_derivative(i))
                .expect("index in range");
            out = &out + &d2;
        }
        out
    }

    /// Composition `p(q_1(y), ..., q_d(y))`; every `q_i` must share one
    /// variable count, which becomes the result's.
    pub fn compose(&self, subs: &[Poly<C>]) -> Result<Self> {
        if subs.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: subs.len(),
            });
        }
        let m = subs.first().map_or(0, |q| q.nvars);
        if let Some(q) = subs.iter().find(|q| q.nvars != m) {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: q.nvars,
            });
        }
        // Cache powers of each substituted polynomial.
        let mut powers: Vec<Vec<Poly<C>>> = subs.iter().map(|q| vec![Poly::one(q.nvars), q.clone()]).collect();
        let mut out = Poly::zero(m);
        for (mono, c) in &self.terms {
            let mut t = Poly::constant(m, c.clone());
            for (i, &e) in mono.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = &powers[i][powers[i].len() - 1] * &subs[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            out = &out + &t;
        }
        Ok(out)
    }

    pub fn restrict_face(&self, face: Face) -> Result<Self> {
        let d = self.nvars;
        if d < 2 {
            return Err(Error::InvalidArgument(
                "face restriction needs at least two variables".into(),
            ));
        }
        match face {
            Face::SetVarZero(i) => {
                if i >= d {
                    return Err(Error::IndexOutOfRange { index: i, nvars: d });
                }
                let mut out = Self::zero(d - 1);
                for (m, c) in &self.terms {
                    if m.0[i] != 0 {
                        continue;
                    }
                    let mut k = m.0.clone();
                    k.remove(i);
                    out.add_term(Monomial(k), c.clone());
                }
                Ok(out)
            }
            Face::AffineLast => {
                let mut subs: Vec<Poly<C>> = (0..d - 1).map(|i| Poly::var(d - 1, i)).collect();
                let mut last = Poly::one(d - 1);
                for i in 0..d - 1 {
                    last = &last - &Poly::var(d - 1, i);
                }
                subs.push(last);
                self.compose(&subs)
            }
        }
    }

    /// Inverse of `SetVarZero(i)` on the variable layout: a new variable is
    /// inserted at position `i` that no term depends on.
    pub fn insert_var(&self, i: usize) -> Self {
        Poly {
            nvars: self.nvars + 1,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut k = m.0.clone();
                    k.insert(i, 0);
                    (Monomial(k), c.clone())
                })
                .collect(),
        }
    }

    /// `result(x) = self(x_{perm[0]}, ..., x_{perm[d-1]})`.
    pub fn permute_vars(&self, perm: &[usize]) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut k = vec![0; self.nvars];
            for (i, &e) in m.0.iter().enumerate() {
                k[perm[i]] += e;
            }
            out.add_term(Monomial(k), c.clone());
        }
        out
    }

    /// Exact fields compare term maps; floats compare coefficients within `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if self.nvars != other.nvars {
            return false;
        }
        let zero = C::zero();
        let keys = self.terms.keys().chain(other.terms.keys());
        for k in keys {
            let a = self.terms.get(k).unwrap_or(&zero);
            let b = other.terms.get(k).unwrap_or(&zero);
            if !a.within(b, tol) {
                return false;
            }
        }
        true
    }

    /// Largest coefficient difference, as `f64`.
    pub fn max_coeff_diff(&self, other: &Self) -> f64 {
        let zero = C::zero();
        self.terms
            .keys()
            .chain(other.terms.keys())
            .map(|k| {
                let a = self.terms.get(k).unwrap_or(&zero);
                let b = other.terms.get(k).unwrap_or(&zero);
                (a.to_f64() - b.to_f64()).abs()
            })
            .fold(0.0, f64::max)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.to_f64().abs()).fold(0.0, f64::max)
    }

    pub fn to_f64(&self) -> FPoly {
        let mut out = FPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.to_f64());
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(m, c)| json!({"exp": m.exps(), "coef": c.to_json()}))
            .collect();
        json!({
            "nvars": self.nvars,
            "field": C::FIELD.as_str(),
            "terms": terms,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |msg: &str| Error::Parse(format!("polynomial JSON: {msg}"));
        let nvars = v["nvars"].as_u64().ok_or_else(|| bad("missing nvars"))? as usize;
        let field = v["field"].as_str().ok_or_else(|| bad("missing field"))?;
        if field != C::FIELD.as_str() {
            return Err(bad(&format!("field {field:?}, expected {:?}", C::FIELD.as_str())));
        }
        let terms = v["terms"].as_array().ok_or_else(|| bad("missing terms"))?;
        let mut parsed = Vec::with_capacity(terms.len());
        for t in terms {
            let exp = t["exp"]
                .as_array()
                .ok_or_else(|| bad("term without exp"))?
                .iter()
                .map(|e| e.as_u64().map(|e| e as u32).ok_or_else(|| bad("bad exponent")))
                .collect::<Result<Vec<u32>>>()?;
            parsed.push((exp, C::from_json(&t["coef"])?));
        }
        Self::from_terms(nvars, parsed)
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        let mut out = Poly::<D>::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }
}

impl<C: Coeff> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]({})", self.nvars, self)
    }
}

impl<C: Coeff> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let is_const = m.degree() == 0;
            if is_const || !abs.is_one() {
                write!(f, "{abs}")?;
                if !is_const {
                    write!(f, "*")?;
                }
            }
            let mut first = true;
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "x{}", i + 1)?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<C: Coeff> $tr<&Poly<C>> for &Poly<C> {
            type Output = Poly<C>;

            /// Panics when the operands have different variable counts.
            fn $method(self, rhs: &Poly<C>) -> Poly<C> {
                self.$checked(rhs).expect("operands must share nvars")
            }
        }

        impl<C: Coeff> $tr for Poly<C> {
            type Output = Poly<C>;

            fn $method(self, rhs: Poly<C>) -> Poly<C> {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl<C: Coeff> Neg for &Poly<C> {
    type Output = Poly<C>;

    fn neg(self) -> Poly<C> {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl<C: Coeff> Neg for Poly<C> {
    type Output = Poly<C>;

    fn neg(self) -> Poly<C> {
        -&self
    }
}

impl<C: Coeff> Serialize for Poly<C> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de, C: Coeff> Deserialize<'de> for Poly<C> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        Poly::from_json(&v).map_err(de::Error::custom)
    }
}

/// Reads the field tag of a serialized polynomial without parsing it.
pub fn field_of(v: &Value) -> Option<Field> {
    match v["field"].as_str()? {
        "rational" => Some(Field::Rational),
        "float64" => Some(Field::Float64),
        _ => None,
    }
}

/// Dense evaluator for hot loops: gradient and Hessian are precomputed.
#[derive(Clone, Debug)]
pub struct Compiled {
    nvars: usize,
    max_exp: Vec<u32>,
    terms: Vec<(Vec<u32>, f64)>,
}

impl Compiled {
    pub fn new(p: &FPoly) -> Self {
        let nvars = p.nvars();
        let mut max_exp = vec![0; nvars];
        let terms: Vec<(Vec<u32>, f64)> = p
            .terms()
            .map(|(m, &c)| {
                for (mx, &e) in max_exp.iter_mut().zip(m.exps()) {
                    *mx = (*mx).max(e);
                }
                (m.exps().to_vec(), c)
            })
            .collect();
        Compiled { nvars, max_exp, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.nvars);
        let mut pows: Vec<Vec<f64>> = Vec::with_capacity(self.nvars);
        for (i, &m) in self.max_exp.iter().enumerate() {
            let mut v = Vec::with_capacity(m as usize + 1);
            v.push(1.0);
            for k in 1..=m as usize {
                v.push(v[k - 1] * x[i]);
            }
            pows.push(v);
        }
        self.terms
            .iter()
            .map(|(e, c)| e.iter().enumerate().fold(*c, |t, (i, &k)| t * pows[i][k as usize]))
            .sum()
    }
}

/// Value, gradient and Hessian evaluator.
#[derive(Clone, Debug)]
pub struct Differentiable {
    pub value: Compiled,
    pub grad: Vec<Compiled>,
    pub hess: Vec<Vec<Compiled>>,
}

impl Differentiable {
    pub fn new(p: &FPoly) -> Self {
        let g = p.gradient();
        let hess = g
            .iter()
            .map(|gi| gi.gradient().iter().map(Compiled::new).collect())
            .collect();
        Differentiable {
            value: Compiled::new(p),
            grad: g.iter().map(Compiled::new).collect(),
            hess,
        }
    }

    pub fn nvars(&self) -> usize {
        self.value.nvars
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.value.eval(x)
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        self.grad.iter().map(|g| g.eval(x)).collect()
    }

    pub fn hessian(&self, x: &[f64]) -> nalgebra::DMatrix<f64> {
        let n = self.nvars();
        nalgebra::DMatrix::from_fn(n, n, |i, j| self.hess[i][j].eval(x))
    }
}
