use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lattice::Quasilattice;
use crate::linalg::{self, Matrix};
use crate::polytope::Polytope;
use crate::scalars::{NumberField, Scalar};

/// The exact sequence 0 → 𝔫 → R^d → 𝔡 → 0 with π(e_j) = X_j, and its dual.
#[derive(Debug, Clone)]
pub struct SequenceData {
    field: Arc<NumberField>,
    n: usize,
    d: usize,
    pi: Matrix,
    kernel: Matrix,
}

impl SequenceData {
    pub fn new(p: &Polytope) -> Result<Self> {
        Self::from_normals(p.field(), p.n(), p.normals())
    }

    pub fn from_normals(field: &Arc<NumberField>, n: usize, normals: &[Vec<Scalar>]) -> Result<Self> {
        let d = normals.len();
        let pi = linalg::transpose(normals);
        if linalg::rank(&pi)? != n {
            return Err(Error::Validation("normals do not span the ambient space".into()));
        }
        let kernel = linalg::nullspace(&pi, d, field)?;
        let seq = SequenceData { field: field.clone(), n, d, pi, kernel };
        for k in &seq.kernel {
            if seq.apply_pi(k).iter().any(|s| !s.is_zero()) {
                return Err(Error::Internal("π ∘ ι is not zero".into()));
            }
        }
        if linalg::rank(&seq.kernel)? != d - n && d > n {
            return Err(Error::Internal("kernel basis has the wrong rank".into()));
        }
        Ok(seq)
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// n × d matrix whose column j is X_j.
    pub fn pi_matrix(&self) -> &Matrix {
        &self.pi
    }

    /// (d − n) vectors spanning 𝔫 ⊂ R^d.
    pub fn kernel_basis(&self) -> &Matrix {
        &self.kernel
    }

    /// ι*: (R^d)* → 𝔫*, as the (d − n) × d matrix pairing with the kernel basis.
    pub fn iota_star(&self) -> &Matrix {
        &self.kernel
    }

    /// π*: 𝔡* → (R^d)*, as the d × n matrix with rows X_j.
    pub fn pi_star(&self) -> Matrix {
        linalg::transpose(&self.pi)
    }

    pub fn apply_pi(&self, theta: &[Scalar]) -> Vec<Scalar> {
        linalg::mat_vec(&self.pi, theta)
    }

    pub fn apply_iota_star(&self, v: &[Scalar]) -> Vec<Scalar> {
        linalg::mat_vec(&self.kernel, v)
    }
}

pub fn kernel_data(p: &Polytope) -> Result<SequenceData> {
    SequenceData::new(p)
}

/// Whether exp(2πiθ) lies in N, i.e. π(θ) ∈ Q.
pub fn n_membership(seq: &SequenceData, q: &Quasilattice, theta: &[Scalar]) -> bool {
    q.contains(&seq.apply_pi(theta))
}
