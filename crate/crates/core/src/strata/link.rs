use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lattice::Quasilattice;
use crate::linalg::{self, Matrix};
use crate::moment::MomentData;
use crate::polytope::{enumerate_faces, Face, FaceId, FaceLattice, FacetSet, Polytope};
use crate::scalars::{dot, NumberField, Scalar};

use super::{build_stratification, StratificationReport};

/// The cone Σ_F, its slice Δ_F and the groups N^F, N^F_0 of a singular face F.
#[derive(Debug, Clone)]
pub struct LinkData {
    pub face: FaceId,
    pub index_set: FacetSet,
    pub face_dim: usize,
    /// Facets j whose normals X_j form the chosen basis of 𝔡_F.
    pub d_f_basis: Vec<usize>,
    /// Q_F = 𝔡_F ∩ Q in the coordinates of that basis.
    pub q_f: Quasilattice,
    /// Σ_F = {ξ : ⟨ξ, a_j⟩ ≥ λ_j, j ∈ I_F}; a_j are the coordinates of X_j.
    pub sigma_normals: Matrix,
    pub sigma_offsets: Vec<Scalar>,
    pub s_coefficients: Vec<Scalar>,
    /// X_0 = Σ s_j X_j in 𝔡_F coordinates.
    pub x0: Vec<Scalar>,
    /// Σ s_j λ_j + 1.
    pub slice_level: Scalar,
    pub xi0: Vec<Scalar>,
    /// Basis of ann(X_0) ⊂ 𝔡_F*.
    pub ann_basis: Matrix,
    /// Δ_F in ann(X_0) with normals k_F*(X_j), offsets λ_j − ⟨ξ_0, X_j⟩ and quasilattice Q_{F,0}.
    pub delta_f: Polytope,
    pub n_f_dim: usize,
    pub n_f0_dim: usize,
    /// Real dimension of the link, 2(n − p) − 1.
    pub link_real_dim: usize,
    pub report: Box<StratificationReport>,
}

fn coordinates_in(field: &Arc<NumberField>, basis_rows: &Matrix, v: &[Scalar]) -> Result<Vec<Scalar>> {
    let a = linalg::transpose(basis_rows);
    linalg::solve_any(&a, v, field)?.ok_or_else(|| Error::Internal("vector is not in the span".into()))
}

pub fn build_link(p: &Polytope, lat: &FaceLattice, face: &Face) -> Result<LinkData> {
    if face.regular {
        return Err(Error::Precondition(format!("face {} is regular; links are built for singular faces", face.index_set)));
    }
    let field = p.field();
    let n = p.n();
    let idx = face.index_set.indices();
    let rows: Matrix = idx.iter().map(|&j| p.normals()[j].clone()).collect();
    let (_, pivots) = linalg::rref(&linalg::transpose(&rows))?;
    let d_f_basis: Vec<usize> = pivots.iter().map(|&k| idx[k]).collect();
    let m = d_f_basis.len();
    if m != n - face.dim {
        return Err(Error::Internal("dim 𝔡_F differs from n − p".into()));
    }
    let basis_rows: Matrix = d_f_basis.iter().map(|&j| p.normals()[j].clone()).collect();
    let sigma_normals: Matrix =
        rows.iter().map(|x| coordinates_in(field, &basis_rows, x)).collect::<Result<_>>()?;
    let sigma_offsets: Vec<Scalar> = idx.iter().map(|&j| p.offsets()[j].clone()).collect();

    let annihilators = linalg::nullspace(&rows, n, field)?;
    let q_f_ambient = p.quasilattice().intersect_subspace(&annihilators);
    let q_f_coords: Matrix =
        q_f_ambient.iter().map(|v| coordinates_in(field, &basis_rows, v)).collect::<Result<_>>()?;
    let q_f = Quasilattice::new(field, m, q_f_coords.clone())?;

    let s_coefficients = vec![Scalar::one(field); idx.len()];
    let mut x0 = vec![Scalar::zero(field); m];
    for a in &sigma_normals {
        for (x, y) in x0.iter_mut().zip(a) {
            *x = &*x + y;
        }
    }
    let lambda_sum = sigma_offsets.iter().fold(Scalar::zero(field), |acc, l| &acc + l);
    let slice_level = &lambda_sum + &Scalar::one(field);
    let t = x0.iter().position(|c| !c.is_zero()).ok_or_else(|| Error::Internal("X_0 vanishes".into()))?;
    let mut xi0 = vec![Scalar::zero(field); m];
    xi0[t] = slice_level.div(&x0[t])?;
    let ann_basis: Matrix = (0..m)
        .filter(|&i| i != t)
        .map(|i| {
            let mut w = vec![Scalar::zero(field); m];
            w[i] = Scalar::one(field);
            w[t] = -x0[i].div(&x0[t])?;
            Ok(w)
        })
        .collect::<Result<_>>()?;
    let project = |c: &Vec<Scalar>| -> Vec<Scalar> { ann_basis.iter().map(|w| dot(w, c)).collect() };
    let delta_normals: Matrix = sigma_normals.iter().map(project).collect();
    let delta_offsets: Vec<Scalar> =
        sigma_normals.iter().zip(&sigma_offsets).map(|(a, l)| l - &dot(&xi0, a)).collect();
    let q_f0 = Quasilattice::new(field, m - 1, q_f_coords.iter().map(project).collect())?;
    let delta_f = Polytope::new(field, m - 1, delta_normals, delta_offsets, Some(q_f0))
        .map_err(|e| Error::Internal(format!("link polytope of {} is invalid: {e}", face.index_set)))?;
    let sub = enumerate_faces(&delta_f)?;
    let report = build_stratification(&delta_f, &sub)?;
    if report.depth >= lat.polytope_depth() {
        return Err(Error::Internal("link depth did not decrease".into()));
    }
    let n_f_dim = face.r_f - m;
    Ok(LinkData {
        face: face.id,
        index_set: face.index_set,
        face_dim: face.dim,
        d_f_basis,
        q_f,
        sigma_normals,
        sigma_offsets,
        s_coefficients,
        x0,
        slice_level,
        xi0,
        ann_basis,
        delta_f,
        n_f_dim,
        n_f0_dim: n_f_dim + 1,
        link_real_dim: 2 * m - 1,
        report: Box::new(report),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkKind {
    /// Ψ_{Σ_F}: offsets zero, group N^F.
    Sigma,
    /// Ψ_{Δ_F}: shifted offsets, group N^F_0.
    Delta,
}

/// Moment data on C^F for the cone Σ_F or the link polytope Δ_F.
pub fn derived_moment_data(kind: LinkKind, link: &LinkData, lat: &FaceLattice, precision: u32) -> Result<MomentData> {
    let field = link.delta_f.field();
    match kind {
        LinkKind::Sigma => {
            let idx = link.index_set.indices();
            let supports: Vec<FacetSet> = lat
                .faces()
                .iter()
                .filter(|g| g.index_set.is_subset(link.index_set))
                .map(|g| FacetSet::from_indices((0..idx.len()).filter(|&k| g.index_set.contains(idx[k]))))
                .collect();
            let zeros = vec![Scalar::zero(field); idx.len()];
            MomentData::from_parts(field, link.sigma_normals[0].len(), link.sigma_normals.clone(), zeros, supports, precision)
        }
        LinkKind::Delta => {
            let sub = enumerate_faces(&link.delta_f)?;
            MomentData::new(&link.delta_f, &sub, precision)
        }
    }
}
