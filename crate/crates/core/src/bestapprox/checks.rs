use nalgebra::DMatrix;

/// Indices of columns of `phi` that depend on earlier columns, by modified
/// Gram-Schmidt with relative cutoff `tol`.
pub fn dependent_columns(phi: &DMatrix<f64>, tol: f64) -> Vec<usize> {
    let mut kept: Vec<nalgebra::DVector<f64>> = Vec::new();
    let mut dependent = Vec::new();
    for j in 0..phi.ncols() {
        let orig = phi.column(j).clone_owned();
        let norm0 = orig.norm();
        let mut v = orig;
        for q in &kept {
            let c = q.dot(&v);
            v.axpy(-c, q, 1.0);
        }
        let n = v.norm();
        if norm0 == 0.0 || n <= tol * norm0 {
            dependent.push(j);
        } else {
            kept.push(v / n);
        }
    }
    dependent
}

/// Points whose residual sits within `tol` of `±level`.
pub fn equioscillation_count(residuals: &[f64], level: f64, tol: f64) -> usize {
    residuals.iter().filter(|r| (r.abs() - level).abs() <= tol).count()
}
