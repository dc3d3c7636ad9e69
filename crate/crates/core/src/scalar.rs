//! Coefficient fields.
//!
//! Polynomials are generic over [`Coeff`], implemented for arbitrary-precision
//! rationals and for `f64`. Construction-time algebra runs over [`Rational`];
//! search and LP layers run over `f64`.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Tag carried by serialized polynomials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Rational,
    Float64,
}

impl Field {
    pub fn as_str(self) -> &'static str {
        match self {
            Field::Rational => "rational",
            Field::Float64 => "float64",
        }
    }
}

pub trait Coeff:
    Clone + Debug + Display + PartialEq + PartialOrd + Signed + Send + Sync + 'static
{
    const FIELD: Field;

    fn from_i64(v: i64) -> Self;

    fn from_frac(num: i64, den: i64) -> Self;

    fn from_bigint(v: &BigInt) -> Self;

    fn to_f64(&self) -> f64;

    /// Exact equality for rationals; `|a - b| <= tol` for floats.
    fn within(&self, other: &Self, tol: f64) -> bool;

    fn to_json(&self) -> Value;

    fn from_json(v: &Value) -> Result<Self>;

    /// Nullspace basis of a dense row-major matrix with `ncols` columns.
    fn nullspace(rows: &[Vec<Self>], ncols: usize) -> Vec<Vec<Self>>;
}

impl Coeff for Rational {
    const FIELD: Field = Field::Rational;

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_frac(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_bigint(v: &BigInt) -> Self {
        Rational::from_integer(v.clone())
    }

    fn to_f64(&self) -> f64 {
        // BigRational::to_f64 rounds correctly even when numerator and
        // denominator overflow f64 individually.
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn within(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }

    fn to_json(&self) -> Value {
        Value::String(format!("{}/{}", self.numer(), self.denom()))
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => parse_rational(s),
            Value::Number(n) if n.is_i64() => Ok(Self::from_i64(n.as_i64().unwrap())),
            other => Err(Error::Parse(format!("expected rational string, got {other}"))),
        }
    }

    fn nullspace(rows: &[Vec<Self>], ncols: usize) -> Vec<Vec<Self>> {
        rref_nullspace(rows, ncols, |x| x.is_zero())
    }
}

impl Coeff for f64 {
    const FIELD: Field = Field::Float64;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_frac(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn from_bigint(v: &BigInt) -> Self {
        v.to_f64().unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn within(&self, other: &Self, tol: f64) -> bool {
        (self - other).abs() <= tol
    }

    fn to_json(&self) -> Value {
        serde_json::Number::from_f64(*self)
            .map(Value::Number)
            .unwrap_or(Value::Null)
    }

    fn from_json(v: &Value) -> Result<Self> {
        v.as_f64()
            .ok_or_else(|| Error::Parse(format!("expected number, got {v}")))
    }

    fn nullspace(rows: &[Vec<Self>], ncols: usize) -> Vec<Vec<Self>> {
        svd_nullspace(rows, ncols, 1e-10)
    }
}

/// Parses `p/q` or a bare integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

fn rref_nullspace<C: Coeff>(rows: &[Vec<C>], ncols: usize, is_zero: impl Fn(&C) -> bool) -> Vec<Vec<C>> {
    let mut m: Vec<Vec<C>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !is_zero(&m[i][c])) else {
            continue;
        };
        m.swap(r, p);
        let inv = C::one() / m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..m.len() {
            if i != r && !is_zero(&m[i][c]) {
                let f = m[i][c].clone();
                for j in 0..ncols {
                    let v = m[r][j].clone() * f.clone();
                    m[i][j] = m[i][j].clone() - v;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![C::zero(); ncols];
            v[f] = C::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[row][f].clone();
            }
            v
        })
        .collect()
}

fn svd_nullspace(rows: &[Vec<f64>], ncols: usize, rel_cutoff: f64) -> Vec<Vec<f64>> {
    if ncols == 0 {
        return Vec::new();
    }
    // Pad to at least ncols rows so the thin SVD yields a full right basis.
    let nrows = rows.len().max(ncols);
    let a = nalgebra::DMatrix::from_fn(nrows, ncols, |i, j| {
        rows.get(i).map_or(0.0, |r| r[j])
    });
    let svd = a.svd(false, true);
    let vt = svd.v_t.expect("v_t requested");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let cutoff = rel_cutoff * smax.max(f64::MIN_POSITIVE);
    (0..ncols)
        .filter(|&k| svd.singular_values[k] <= cutoff)
        .map(|k| vt.row(k).iter().cloned().collect())
        .collect()
}

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::from_frac(num, den)
}

pub fn is_integer(q: &Rational) -> bool {
    q.denom().is_one()
}
