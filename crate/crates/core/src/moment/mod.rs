//! Moment maps Υ, Ψ = ι* ∘ Υ and the convex Newton retraction onto Ψ^{-1}(0).

mod solver;

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub use solver::{RetractionProblem, RetractionResult, SolverConfig};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::polytope::{zero_set, FaceLattice, FacetSet, Polytope};
use crate::scalars::{NumberField, Scalar};

/// Float data for the moment maps of a polyhedron given by normals and offsets,
/// together with the supports whose torus orbits are closed.
#[derive(Debug, Clone)]
pub struct MomentData {
    field: Arc<NumberField>,
    n: usize,
    d: usize,
    normals_exact: Vec<Vec<Scalar>>,
    kernel_exact: Matrix,
    normals: DMatrix<f64>,
    offsets: DVector<f64>,
    kernel: DMatrix<f64>,
    kernel_orthonormal: DMatrix<f64>,
    closed_supports: Vec<FacetSet>,
    shadow_error: f64,
}

fn shadow(s: &Scalar, precision: u32, err: &mut f64) -> f64 {
    let sh = s.float_shadow(precision);
    *err = err.max(sh.error_bound);
    sh.value
}

/// Orthonormal basis (as columns) of the column space of `a`, whose rank is known to be `rank`.
pub(crate) fn orthonormal_columns(a: &DMatrix<f64>, rank: usize) -> DMatrix<f64> {
    let rows = a.nrows();
    if rank == 0 || a.ncols() == 0 {
        return DMatrix::zeros(rows, 0);
    }
    // eigenvectors of A·Aᵀ: the thin SVD's left vectors lose accuracy on rank-deficient input
    let eig = (a * a.transpose()).symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let cols: Vec<DVector<f64>> = order[..rank].iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect();
    DMatrix::from_columns(&cols)
}

impl MomentData {
    /// Moment data of a polytope; every face index set is a closed support.
    pub fn new(p: &Polytope, lat: &FaceLattice, precision: u32) -> Result<Self> {
        let supports = lat.faces().iter().map(|f| f.index_set).collect();
        Self::from_parts(p.field(), p.n(), p.normals().to_vec(), p.offsets().to_vec(), supports, precision)
    }

    pub fn from_parts(
        field: &Arc<NumberField>,
        n: usize,
        normals: Vec<Vec<Scalar>>,
        offsets: Vec<Scalar>,
        closed_supports: Vec<FacetSet>,
        precision: u32,
    ) -> Result<Self> {
        let d = normals.len();
        let pi = linalg::transpose(&normals);
        if linalg::rank(&pi)? != n {
            return Err(Error::Validation("normals do not span".into()));
        }
        let kernel_exact = linalg::nullspace(&pi, d, field)?;
        let mut err = 0.0f64;
        let normals_f = DMatrix::from_fn(n, d, |i, j| shadow(&normals[j][i], precision, &mut err));
        let offsets_f = DVector::from_fn(d, |j, _| shadow(&offsets[j], precision, &mut err));
        let k = kernel_exact.len();
        let kernel_f = DMatrix::from_fn(k, d, |i, j| shadow(&kernel_exact[i][j], precision, &mut err));
        let kernel_orthonormal = orthonormal_columns(&kernel_f.transpose(), k);
        Ok(MomentData {
            field: field.clone(),
            n,
            d,
            normals_exact: normals,
            kernel_exact,
            normals: normals_f,
            offsets: offsets_f,
            kernel: kernel_f,
            kernel_orthonormal,
            closed_supports,
            shadow_error: err,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// dim 𝔫 = d − n.
    pub fn kernel_dim(&self) -> usize {
        self.kernel_exact.len()
    }

    pub fn kernel_exact(&self) -> &Matrix {
        &self.kernel_exact
    }

    pub fn kernel(&self) -> &DMatrix<f64> {
        &self.kernel
    }

    pub fn normals(&self) -> &DMatrix<f64> {
        &self.normals
    }

    pub fn offsets(&self) -> &DVector<f64> {
        &self.offsets
    }

    pub fn closed_supports(&self) -> &[FacetSet] {
        &self.closed_supports
    }

    /// Largest error bound among the float shadows used.
    pub fn shadow_error(&self) -> f64 {
        self.shadow_error
    }

    /// α_k = −2π ι*(e_k*), as the columns of a (d − n) × d matrix.
    pub fn alpha_vectors(&self) -> DMatrix<f64> {
        &self.kernel * (-2.0 * PI)
    }

    /// ι*(Σ λ_k e_k*).
    pub fn lambda_vector(&self) -> DVector<f64> {
        &self.kernel * &self.offsets
    }

    /// Υ(z)_j = |z_j|² + λ_j.
    pub fn upsilon(&self, z: &[Complex64]) -> DVector<f64> {
        DVector::from_fn(self.d, |j, _| z[j].norm_sqr() + self.offsets[j])
    }

    /// Ψ(z) = ι*(Υ(z)) in the coordinates of the kernel basis.
    pub fn psi(&self, z: &[Complex64]) -> DVector<f64> {
        &self.kernel * self.upsilon(z)
    }

    pub fn residual(&self, z: &[Complex64]) -> f64 {
        self.psi(z).norm()
    }

    /// Orthonormal basis of 𝔯, the complement of 𝔫 ∩ R^{I_z} in 𝔫.
    pub fn reduced_subspace(&self, zeros: FacetSet) -> Result<DMatrix<f64>> {
        let idx = zeros.indices();
        let s_exact: Matrix = if idx.is_empty() {
            Vec::new()
        } else {
            let cols: Matrix = idx.iter().map(|&j| self.normals_exact[j].clone()).collect();
            linalg::nullspace(&linalg::transpose(&cols), idx.len(), &self.field)?
        };
        let r = self.kernel_dim() - s_exact.len();
        if s_exact.is_empty() {
            return Ok(self.kernel_orthonormal.clone());
        }
        let s = DMatrix::from_fn(self.d, s_exact.len(), |i, c| match idx.iter().position(|&j| j == i) {
            Some(pos) => s_exact[c][pos].to_f64(),
            None => 0.0,
        });
        let qs = orthonormal_columns(&s, s_exact.len());
        let proj = &self.kernel_orthonormal - &qs * (qs.transpose() * &self.kernel_orthonormal);
        Ok(orthonormal_columns(&proj, r))
    }

    fn check_closed(&self, z: &[Complex64]) -> Result<FacetSet> {
        if z.len() != self.d {
            return Err(Error::Precondition(format!("point has {} coordinates, expected {}", z.len(), self.d)));
        }
        let zeros = zero_set(z);
        if !self.closed_supports.contains(&zeros) {
            return Err(Error::Precondition(format!(
                "orbit with zero set {zeros} is not closed; classify it first"
            )));
        }
        Ok(zeros)
    }

    /// The objective F_z restricted to 𝔯.
    pub fn problem(&self, z: &[Complex64]) -> Result<RetractionProblem> {
        let zeros = self.check_closed(z)?;
        let basis = self.reduced_subspace(zeros)?;
        Ok(RetractionProblem::new(basis, z, &self.offsets))
    }

    /// Newton retraction from Y = 0 or the logarithmic start [`RetractionProblem::log_start`],
    /// whichever has the smaller objective value.
    pub fn retract(&self, z: &[Complex64], cfg: &SolverConfig) -> Result<RetractionResult> {
        self.retract_from(z, cfg, None)
    }

    /// Newton retraction from the projection of `start` ∈ R^d onto 𝔯.
    pub fn retract_from(&self, z: &[Complex64], cfg: &SolverConfig, start: Option<&[f64]>) -> Result<RetractionResult> {
        cfg.validate()?;
        let problem = self.problem(z)?;
        let v0 = match start {
            Some(y) => problem.basis().transpose() * DVector::from_column_slice(y),
            None => {
                let zero = DVector::zeros(problem.dim());
                let log = problem.log_start();
                if problem.value(&log) < problem.value(&zero) {
                    log
                } else {
                    zero
                }
            }
        };
        let (v, iterations) = solver::newton(&problem, v0, cfg, |x| self.residual(x))?;
        let y = problem.basis() * &v;
        let x = problem.scaled_point(&y);
        let residual = self.residual(&x);
        let xi = self.polytope_point_of(&x, cfg.tolerance.max(residual))?;
        Ok(RetractionResult { x, y_star: y.iter().copied().collect(), residual, iterations, xi })
    }

    /// The ξ with ⟨ξ, X_j⟩ = |x_j|² + λ_j, by normal equations.
    pub fn polytope_point_of(&self, x: &[Complex64], tolerance: f64) -> Result<Vec<f64>> {
        let res = self.residual(x);
        if res > tolerance {
            return Err(Error::Precondition(format!(
                "point is off the zero level (residual {res:e} > {tolerance:e})"
            )));
        }
        let ups = self.upsilon(x);
        let gram = &self.normals * self.normals.transpose();
        let rhs = &self.normals * ups;
        let chol = gram
            .cholesky()
            .ok_or_else(|| Error::Internal("normal equations are singular".into()))?;
        Ok(chol.solve(&rhs).iter().copied().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;
    use crate::polytope::enumerate_faces;

    fn interval_data() -> MomentData {
        let p = instances::interval();
        let lat = enumerate_faces(&p).unwrap();
        MomentData::new(&p, &lat, 53).unwrap()
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn upsilon_and_psi_examples() {
        let m = interval_data();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(m.upsilon(&[c(0.0), c(0.0)]).as_slice(), &[0.0, -1.0]);
        assert_eq!(m.upsilon(&[c(1.0), c(1.0)]).as_slice(), &[1.0, 0.0]);
        let u = m.upsilon(&[c(h), c(h)]);
        assert!((u[0] - 0.5).abs() < 1e-15 && (u[1] + 0.5).abs() < 1e-15);
        assert!(m.psi(&[c(h), c(h)])[0].abs() < 1e-15);
        assert_eq!(m.psi(&[c(1.0), c(1.0)])[0], 1.0);
        assert_eq!(m.psi(&[c(0.0), c(0.0)])[0], -1.0);
    }

    #[test]
    fn interval_retraction() {
        let m = interval_data();
        let r = m.retract(&[c(1.0), c(1.0)], &SolverConfig::default()).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((r.x[0].re - h).abs() < 1e-8 && (r.x[1].re - h).abs() < 1e-8);
        assert!((r.xi[0] - 0.5).abs() < 1e-8);
        // y with 2e^{−4πy} = 1
        let y = (2.0f64).ln() / (4.0 * PI);
        assert!((r.y_star[0] - y).abs() < 1e-8 && (r.y_star[1] - y).abs() < 1e-8);
    }

    #[test]
    fn already_on_level() {
        let m = interval_data();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let r = m.retract(&[c(h), c(h)], &SolverConfig::default()).unwrap();
        assert_eq!(r.iterations, 0);
        assert_eq!(r.x, vec![c(h), c(h)]);
    }

    #[test]
    fn vertex_orbits() {
        let m = interval_data();
        let r = m.retract(&[c(1.0), c(0.0)], &SolverConfig::default()).unwrap();
        assert!((r.x[0].norm_sqr() - 1.0).abs() < 1e-9);
        assert!((r.xi[0] - 1.0).abs() < 1e-8);
        let r = m.retract(&[c(0.0), c(3.0)], &SolverConfig::default()).unwrap();
        assert!(r.xi[0].abs() < 1e-8);
        assert_eq!(r.x[0], c(0.0));
    }

    #[test]
    fn nonclosed_rejected() {
        let p = instances::pyramid();
        let lat = enumerate_faces(&p).unwrap();
        let m = MomentData::new(&p, &lat, 53).unwrap();
        let z = [c(0.0), c(0.0), c(0.0), c(1.0), c(1.0)];
        assert!(matches!(m.retract(&z, &SolverConfig::default()), Err(Error::Precondition(_))));
    }

    #[test]
    fn off_level_point_rejected() {
        let m = interval_data();
        assert!(matches!(m.polytope_point_of(&[c(1.0), c(1.0)], 1e-9), Err(Error::Precondition(_))));
    }
}
