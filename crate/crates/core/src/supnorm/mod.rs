//! Sup norms over the simplex, the ball and the sphere.
//!
//! Everything here is heuristic-numerical: a lattice scan, multi-start
//! Newton on every face, and a projected-gradient pass from the best lattice
//! points. None of it is an enclosure.

mod determinant;
mod level;
mod sample;
mod search;
mod td_bound;

use serde::{Deserialize, Serialize};

pub use determinant::{
    d5_claimed_factorization, dd_determinant, dd_matrix, det_laplace, divide_by_difference, vandermonde,
    VandermondeDivision,
};
pub use level::level_set;
pub use sample::sample_domain;
pub(crate) use search::candidate_points;
pub use search::{critical_points, locate, sup_norm, CriticalPoint, FaceChart};
pub use td_bound::{max_principle_check, verify_td_bound, MaxPrincipleReport, TdBoundReport};

/// `Simplex(d)` is `T^d`, `Ball(d)` is `B^d` (with `Ball(1) = [-1, 1]`),
/// `Sphere(d)` is the unit sphere in `R^d` and `SimplexFace(d)` is the facet
/// `Σ x_i = 1` of `T^d`. The number is always the ambient dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "dimension", rename_all = "snake_case")]
pub enum Domain {
    Simplex(usize),
    Ball(usize),
    Sphere(usize),
    SimplexFace(usize),
}

impl Domain {
    pub fn dimension(&self) -> usize {
        match *self {
            Domain::Simplex(d) | Domain::Ball(d) | Domain::Sphere(d) | Domain::SimplexFace(d) => d,
        }
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        if x.len() != self.dimension() {
            return false;
        }
        let sum: f64 = x.iter().sum();
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        match self {
            Domain::Simplex(_) => x.iter().all(|&v| v >= -tol) && sum <= 1.0 + tol,
            Domain::SimplexFace(_) => x.iter().all(|&v| v >= -tol) && (sum - 1.0).abs() <= tol,
            Domain::Ball(_) => norm <= 1.0 + tol,
            Domain::Sphere(_) => (norm - 1.0).abs() <= tol,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Domain::Simplex(d) => format!("simplex({d})"),
            Domain::Ball(d) => format!("ball({d})"),
            Domain::Sphere(d) => format!("sphere({})", d - 1),
            Domain::SimplexFace(d) => format!("simplex_face({d})"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Newton starts per unit of face dimension.
    pub starts_per_dim: usize,
    pub seed: u64,
    pub dedupe_tol: f64,
    pub zero_tol: f64,
    pub max_newton_iter: usize,
    /// Lattice points handed to projected-gradient refinement.
    pub refine_top: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            starts_per_dim: 50,
            seed: 20_240_501,
            dedupe_tol: 1e-8,
            zero_tol: 1e-10,
            max_newton_iter: 60,
            refine_top: 16,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SupNormReport {
    pub value: f64,
    pub argmax: Vec<f64>,
    /// `interior` or a face id such as `x3=0` or `x1=0,sum=1`.
    pub location: String,
    pub critical_points: Vec<CriticalPoint>,
    pub grid_resolution: usize,
    pub grid_value: f64,
    /// Refinement starts that failed to converge; the lattice value stands
    /// in for them.
    pub refinement_failures: usize,
}
