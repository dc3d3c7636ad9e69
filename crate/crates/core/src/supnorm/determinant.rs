use std::collections::{BTreeMap, HashMap};

use crate::constructions::build_td;
use crate::error::{Error, Result};
use crate::poly::{Monomial, Poly, QPoly};
use crate::scalar::{Coeff, Rational};

/// Determinant by cofactor expansion along the last remaining row, memoized
/// on the set of columns already used.
pub fn det_laplace(m: &[Vec<QPoly>]) -> Result<QPoly> {
    let n = m.len();
    if n == 0 {
        return Err(Error::InvalidArgument("empty matrix".into()));
    }
    if n > 63 || m.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidArgument("matrix must be square".into()));
    }
    let nvars = m[0][0].nvars();
    let mut memo: HashMap<u64, QPoly> = HashMap::new();
    Ok(minor(m, 0, nvars, &mut memo))
}

fn minor(m: &[Vec<QPoly>], used: u64, nvars: usize, memo: &mut HashMap<u64, QPoly>) -> QPoly {
    let n = m.len();
    let depth = used.count_ones() as usize;
    if depth == n {
        return QPoly::one(nvars);
    }
    if let Some(v) = memo.get(&used) {
        return v.clone();
    }
    let row = n - 1 - depth;
    let size = n - depth;
    let mut out = QPoly::zero(nvars);
    let mut pos = 0;
    for c in 0..n {
        if used >> c & 1 == 1 {
            continue;
        }
        if !m[row][c].is_zero() {
            let sub = minor(m, used | 1 << c, nvars, memo);
            let term = &m[row][c] * &sub;
            if (size - 1 + pos) % 2 == 0 {
                out = &out + &term;
            } else {
                out = &out - &term;
            }
        }
        pos += 1;
    }
    memo.insert(used, out.clone());
    out
}

/// The `(d-1) x (d-1)` matrix with rows `x_j^k`, `k = 0..d-3`, and last row
/// `∂_j T_d`, over the columns `j = 1..d-1`.
pub fn dd_matrix(d: usize) -> Result<Vec<Vec<QPoly>>> {
    if d < 3 {
        return Err(Error::InvalidArgument(format!("d must be ≥ 3, got {d}")));
    }
    let td = build_td(d)?.polynomial;
    let mut rows: Vec<Vec<QPoly>> = (0..d - 2)
        .map(|k| (0..d - 1).map(|j| QPoly::var(d, j).pow(k as u32)).collect())
        .collect();
    rows.push((0..d - 1).map(|j| td.partial_derivative(j).expect("j < d")).collect());
    Ok(rows)
}

pub fn dd_determinant(d: usize) -> Result<QPoly> {
    det_laplace(&dd_matrix(d)?)
}

/// `Π_{0 <= i < j < m} (x_i - x_j)` in `nvars` variables.
pub fn vandermonde(m: usize, nvars: usize) -> QPoly {
    let mut out = QPoly::one(nvars);
    for i in 0..m {
        for j in i + 1..m {
            out = &out * &(&QPoly::var(nvars, i) - &QPoly::var(nvars, j));
        }
    }
    out
}

/// Exact quotient `p / (x_i - x_j)`, or `None` if the division leaves a
/// remainder.
pub fn divide_by_difference<C: Coeff>(p: &Poly<C>, i: usize, j: usize) -> Option<Poly<C>> {
    let d = p.nvars();
    if i >= d || j >= d || i == j {
        return None;
    }
    // Coefficients of p as a polynomial in x_i.
    let mut coeffs: BTreeMap<u32, Poly<C>> = BTreeMap::new();
    for (m, c) in p.terms() {
        let mut e = m.exps().to_vec();
        let k = e[i];
        e[i] = 0;
        let t = Poly::monomial(Monomial::new(e), c.clone());
        let slot = coeffs.entry(k).or_insert_with(|| Poly::zero(d));
        *slot = &*slot + &t;
    }
    let n = match coeffs.keys().next_back() {
        Some(&n) => n,
        None => return Some(Poly::zero(d)),
    };
    if n == 0 {
        return p.is_zero().then(|| Poly::zero(d));
    }
    let xj = Poly::var(d, j);
    let coef = |k: u32| coeffs.get(&k).cloned().unwrap_or_else(|| Poly::zero(d));
    // Synthetic division by (x_i - x_j).
    let mut q: Vec<Poly<C>> = vec![Poly::zero(d); n as usize];
    q[n as usize - 1] = coef(n);
    for k in (1..n).rev() {
        q[k as usize - 1] = &coef(k) + &(&xj * &q[k as usize]);
    }
    let rem = &coef(0) + &(&xj * &q[0]);
    if !rem.is_zero() {
        return None;
    }
    let mut out = Poly::zero(d);
    for (k, qk) in q.iter().enumerate() {
        let mut e = vec![0; d];
        e[i] = k as u32;
        out = &out + &(qk * &Poly::monomial(Monomial::new(e), C::one()));
    }
    Some(out)
}

#[derive(Clone, Debug)]
pub struct VandermondeDivision {
    pub d: usize,
    /// Every `(x_i - x_j)`, `i < j <= d-1`, divides `D_d` exactly.
    pub divides: bool,
    pub quotient: Option<QPoly>,
}

impl VandermondeDivision {
    pub fn of(d: usize) -> Result<Self> {
        let mut cur = dd_determinant(d)?;
        for i in 0..d - 1 {
            for j in i + 1..d - 1 {
                match divide_by_difference(&cur, i, j) {
                    Some(q) => cur = q,
                    None => {
                        return Ok(VandermondeDivision { d, divides: false, quotient: None });
                    }
                }
            }
        }
        Ok(VandermondeDivision { d, divides: true, quotient: Some(cur) })
    }
}

/// `-64 Π_{i<j<=4} (x_i - x_j) (-14 + 225 x_5)`.
pub fn d5_claimed_factorization() -> QPoly {
    let lin = &QPoly::var(5, 4).scale(&Rational::from_i64(225)) - &QPoly::constant(5, Rational::from_i64(14));
    (&vandermonde(4, 5) * &lin).scale(&Rational::from_i64(-64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;
    use num_traits::Zero;

    #[test]
    fn numeric_determinant() {
        let c = |v: i64| QPoly::constant(1, rational(v, 1));
        let m = vec![vec![c(2), c(1), c(0)], vec![c(1), c(3), c(1)], vec![c(0), c(1), c(4)]];
        assert_eq!(det_laplace(&m).unwrap(), c(18));
    }

    #[test]
    fn d5_factorization() {
        assert_eq!(dd_determinant(5).unwrap(), d5_claimed_factorization());
    }

    #[test]
    fn d4_has_vandermonde_factor() {
        let div = VandermondeDivision::of(4).unwrap();
        assert!(div.divides);
        let dd = dd_determinant(4).unwrap();
        let mut pt = vec![rational(1, 7), rational(1, 7), rational(2, 7), rational(1, 5)];
        assert!(dd.eval(&pt).unwrap().is_zero());
        pt[1] = rational(3, 7);
        assert!(!dd.eval(&pt).unwrap().is_zero() || dd.is_zero());
    }

    #[test]
    fn exact_division() {
        let x = |i| QPoly::var(3, i);
        let p = &(&x(0) - &x(1)) * &(&x(2).pow(2) + &x(0));
        let q = divide_by_difference(&p, 0, 1).unwrap();
        assert_eq!(q, &x(2).pow(2) + &x(0));
        assert!(divide_by_difference(&(&x(0) + &x(1)), 0, 1).is_none());
    }
}
