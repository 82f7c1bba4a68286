use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Iterates with some |Y_k| beyond this are treated as a divergence.
const ITERATE_BOUND: f64 = 1e4;
const ARMIJO: f64 = 1e-4;
/// Largest change of any Y_k in one Newton step.
const MAX_STEP: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// Threshold on ‖Ψ(x)‖.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Backtracking factor in (0, 1).
    pub line_search_shrink: f64,
    /// Bits used for float shadows of exact data.
    pub precision: u32,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { tolerance: 1e-9, max_iterations: 200, line_search_shrink: 0.5, precision: 53 }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return Err(Error::Validation("solver tolerance must be positive".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::Validation("max_iterations must be at least 1".into()));
        }
        if !(self.line_search_shrink > 0.0 && self.line_search_shrink < 1.0) {
            return Err(Error::Validation("line_search_shrink must lie in (0, 1)".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RetractionResult {
    /// The point of the orbit closure on Ψ^{-1}(0).
    pub x: Vec<Complex64>,
    /// Minimizer Y* ∈ 𝔯 ⊂ R^d.
    pub y_star: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
    /// ξ with ⟨ξ, X_j⟩ − λ_j = |x_j|².
    pub xi: Vec<f64>,
}

/// F_z(Y) = (1/4π) Σ_k |z_k|² e^{−4πY_k} − Σ_k λ_k Y_k on 𝔯, in coordinates v with Y = R v.
/// Its gradient in Y is −Υ(x) with x_k = e^{−2πY_k} z_k.
#[derive(Debug, Clone)]
pub struct RetractionProblem {
    basis: DMatrix<f64>,
    z: Vec<Complex64>,
    zsq: DVector<f64>,
    lambda: DVector<f64>,
}

impl RetractionProblem {
    pub(crate) fn new(basis: DMatrix<f64>, z: &[Complex64], lambda: &DVector<f64>) -> Self {
        let zsq = DVector::from_iterator(z.len(), z.iter().map(|c| c.norm_sqr()));
        RetractionProblem { basis, z: z.to_vec(), zsq, lambda: lambda.clone() }
    }

    /// Orthonormal columns spanning 𝔯.
    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    fn weights(&self, y: &DVector<f64>) -> DVector<f64> {
        DVector::from_fn(y.len(), |k, _| self.zsq[k] * (-4.0 * PI * y[k]).exp())
    }

    pub fn value(&self, v: &DVector<f64>) -> f64 {
        let y = &self.basis * v;
        self.weights(&y).sum() / (4.0 * PI) - self.lambda.dot(&y)
    }

    pub fn gradient(&self, v: &DVector<f64>) -> DVector<f64> {
        let y = &self.basis * v;
        let ups = self.weights(&y) + &self.lambda;
        -(self.basis.transpose() * ups)
    }

    pub fn hessian(&self, v: &DVector<f64>) -> DMatrix<f64> {
        let y = &self.basis * v;
        let w = self.weights(&y) * (4.0 * PI);
        let scaled = DMatrix::from_fn(self.basis.nrows(), self.basis.ncols(), |i, j| self.basis[(i, j)] * w[i]);
        self.basis.transpose() * scaled
    }

    /// Coordinates in 𝔯 of the projection of (ln|z_k|²)/4π, which removes the scale of an
    /// A-translate before Newton starts.
    pub fn log_start(&self) -> DVector<f64> {
        let l = self.zsq.map(|w| if w > 0.0 { w.ln() / (4.0 * PI) } else { 0.0 });
        self.basis.transpose() * l
    }

    /// x_k = e^{−2πY_k} z_k.
    pub fn scaled_point(&self, y: &DVector<f64>) -> Vec<Complex64> {
        self.z.iter().zip(y.iter()).map(|(z, yk)| z * (-2.0 * PI * yk).exp()).collect()
    }
}

/// −H⁻¹g with the eigenvalues of H floored, for Hessians that lost definiteness to rounding.
fn regularized_step(h: &DMatrix<f64>, g: &DVector<f64>) -> Result<DVector<f64>> {
    let eig = h.clone().symmetric_eigen();
    let top = eig.eigenvalues.amax();
    if !(top > 0.0) {
        return Err(Error::Internal("Hessian is not positive definite".into()));
    }
    let floor = top * 1e-14;
    let coords = eig.eigenvectors.transpose() * g;
    let scaled = DVector::from_fn(coords.len(), |i, _| coords[i] / eig.eigenvalues[i].max(floor));
    Ok(-(&eig.eigenvectors * scaled))
}

/// Damped Newton with Armijo backtracking; stops on the supplied residual.
pub(crate) fn newton<F>(
    p: &RetractionProblem,
    mut v: DVector<f64>,
    cfg: &SolverConfig,
    residual: F,
) -> Result<(DVector<f64>, usize)>
where
    F: Fn(&[Complex64]) -> f64,
{
    let mut last = f64::INFINITY;
    for it in 0..=cfg.max_iterations {
        let y = &p.basis * &v;
        last = residual(&p.scaled_point(&y));
        if last <= cfg.tolerance {
            log::debug!("newton converged in {it} iterations, residual {last:e}");
            return Ok((v, it));
        }
        if it == cfg.max_iterations || p.dim() == 0 {
            break;
        }
        let g = p.gradient(&v);
        let h = p.hessian(&v);
        let step = match h.clone().cholesky() {
            Some(ch) => -ch.solve(&g),
            None => regularized_step(&h, &g)?,
        };
        // far from the optimum the exponentials make full steps useless; cap them
        let longest = (&p.basis * &step).amax();
        let step = if longest > MAX_STEP { step * (MAX_STEP / longest) } else { step };
        let f0 = p.value(&v);
        let slope = g.dot(&step);
        let mut t = 1.0;
        let mut accepted = false;
        while t > 1e-14 {
            let cand = &v + &step * t;
            let f = p.value(&cand);
            if f.is_finite() && f < f0 && f <= f0 + ARMIJO * t * slope {
                v = cand;
                accepted = true;
                break;
            }
            t *= cfg.line_search_shrink;
        }
        if !accepted {
            // Near the optimum F is flat to rounding; fall back to the gradient norm.
            let cand = &v + &step;
            if p.gradient(&cand).norm() < g.norm() {
                v = cand;
            } else {
                break;
            }
        }
        let ybound = (&p.basis * &v).amax();
        if !ybound.is_finite() || ybound > ITERATE_BOUND {
            return Err(Error::Internal(format!("Newton iterates left the bounded region (|Y| = {ybound:e})")));
        }
    }
    Err(Error::NonConvergence { iterations: cfg.max_iterations, residual: last })
}
