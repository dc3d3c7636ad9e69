use serde::{Deserialize, Serialize};

use crate::poly::{Monomial, Poly};
use crate::scalar::Coeff;
use crate::symfun::{monomial_symmetric, partitions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasisKind {
    Full,
    Symmetric,
    Even,
    EvenSymmetric,
}

impl BasisKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BasisKind::Full => "full",
            BasisKind::Symmetric => "symmetric",
            BasisKind::Even => "even",
            BasisKind::EvenSymmetric => "even-symmetric",
        }
    }
}

impl std::str::FromStr for BasisKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "full" => Ok(BasisKind::Full),
            "symmetric" => Ok(BasisKind::Symmetric),
            "even" => Ok(BasisKind::Even),
            "even-symmetric" => Ok(BasisKind::EvenSymmetric),
            other => Err(format!("unknown basis kind {other}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BasisFunction<C: Coeff> {
    pub name: String,
    pub poly: Poly<C>,
}

fn monomial_name(e: &[u32]) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| if k == 1 { format!("x{}", i + 1) } else { format!("x{}^{k}", i + 1) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// Spanning functions of the invariant subspace of `Π_n^d`: monomials
/// (`full`), monomial symmetric functions `m_λ` (`symmetric`), monomials
/// with even exponents (`even`), or `m_λ` with even parts
/// (`even-symmetric`). Graded order.
pub fn invariant_basis<C: Coeff>(n: u32, d: usize, kind: BasisKind) -> Vec<BasisFunction<C>> {
    match kind {
        BasisKind::Full | BasisKind::Even => Monomial::all_up_to(d, n)
            .into_iter()
            .filter(|m| kind == BasisKind::Full || m.is_even())
            .map(|m| BasisFunction {
                name: monomial_name(m.exps()),
                poly: Poly::monomial(m, C::one()),
            })
            .collect(),
        BasisKind::Symmetric | BasisKind::EvenSymmetric => (0..=n)
            .flat_map(|k| partitions(k, d))
            .filter(|lam| kind == BasisKind::Symmetric || lam.iter().all(|p| p % 2 == 0))
            .map(|lam| BasisFunction {
                name: format!("m{lam:?}"),
                poly: monomial_symmetric(&lam, d).expect("at most d parts"),
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn sizes() {
        assert_eq!(invariant_basis::<f64>(4, 3, BasisKind::Symmetric).len(), 11);
        assert_eq!(invariant_basis::<f64>(2, 3, BasisKind::Full).len(), 10);
        let even5 = invariant_basis::<Rational>(5, 3, BasisKind::Even);
        let even4 = invariant_basis::<Rational>(4, 3, BasisKind::Even);
        assert_eq!(even5, even4);
        assert_eq!(invariant_basis::<f64>(5, 3, BasisKind::EvenSymmetric).len(), 4);
    }

    #[test]
    fn names() {
        let b = invariant_basis::<f64>(2, 2, BasisKind::Full);
        let names: Vec<&str> = b.iter().map(|f| f.name.as_str()).collect();
        assert_eq!(names, ["1", "x1", "x2", "x1^2", "x1*x2", "x2^2"]);
    }
}
