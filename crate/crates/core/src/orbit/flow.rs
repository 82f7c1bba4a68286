use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::polytope::{subsets_of_size, Face, FacetSet, Polytope};
use crate::scalars::{dot, Scalar};

/// An exact Y ∈ 𝔫 with Y_j = 0 off I_E and Y_j ≥ 1 on I_E \ I_z. Flowing z by
/// e^{−2πtY} fixes the coordinates off I_E and sends those in I_E \ I_z to zero.
pub fn closing_direction(p: &Polytope, zeros: FacetSet, face: &Face) -> Result<Vec<Scalar>> {
    let field = p.field();
    let e_idx = face.index_set.indices();
    let moving: Vec<usize> = face.index_set.difference(zeros).indices();
    if moving.is_empty() {
        return Ok(vec![Scalar::zero(field); p.d()]);
    }
    let cols: Matrix = e_idx.iter().map(|&j| p.normals()[j].clone()).collect();
    let basis = linalg::nullspace(&linalg::transpose(&cols), e_idx.len(), field)?;
    let pos = |j: usize| e_idx.iter().position(|&k| k == j).expect("moving index lies in I_E");
    // A[r][i] = coordinate of basis vector i at the r-th moving index.
    let a: Matrix = moving.iter().map(|&j| basis.iter().map(|b| b[pos(j)].clone()).collect()).collect();
    let (_, indep) = linalg::rref(&linalg::transpose(&a))?;
    let rows: Matrix = indep.iter().map(|&r| a[r].clone()).collect();
    let m: Matrix = a.iter().map(|row| rows.iter().map(|r| dot(row, r)).collect()).collect();
    let rank = rows.len();
    if rank == 0 {
        return Err(Error::Internal(format!("no closing direction for zero set {zeros}")));
    }
    let one = Scalar::one(field);
    for subset in subsets_of_size(moving.len(), rank) {
        let sys: Matrix = subset.iter().map(|&s| m[s].clone()).collect();
        let rhs = vec![one.clone(); rank];
        let Some(w) = linalg::solve_unique(&sys, &rhs, field)? else { continue };
        let mut feasible = true;
        for row in &m {
            if (&dot(row, &w) - &one).sign()? < 0 {
                feasible = false;
                break;
            }
        }
        if !feasible {
            continue;
        }
        let c = linalg::mat_vec(&linalg::transpose(&rows), &w);
        let mut y = vec![Scalar::zero(field); p.d()];
        for (k, &j) in e_idx.iter().enumerate() {
            let coords: Vec<Scalar> = basis.iter().map(|b| b[k].clone()).collect();
            y[j] = dot(&coords, &c);
        }
        return Ok(y);
    }
    Err(Error::Internal(format!("no closing direction for zero set {zeros} in face {}", face.index_set)))
}
