//! Exact linear algebra over a number field. Matrices are row-major `Vec<Vec<Scalar>>`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalars::{NumberField, Scalar};

pub type Matrix = Vec<Vec<Scalar>>;

pub fn transpose(m: &[Vec<Scalar>]) -> Matrix {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len()).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn mat_vec(m: &[Vec<Scalar>], v: &[Scalar]) -> Vec<Scalar> {
    m.iter().map(|r| crate::scalars::dot(r, v)).collect()
}

/// Reduced row echelon form and pivot columns.
pub fn rref(m: &[Vec<Scalar>]) -> Result<(Matrix, Vec<usize>)> {
    let mut a: Matrix = m.to_vec();
    let rows = a.len();
    if rows == 0 {
        return Ok((a, Vec::new()));
    }
    let cols = a[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].inv()?;
        for x in a[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    if !a[r][j].is_zero() {
                        a[i][j] = &a[i][j] - &(&f * &a[r][j]);
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    Ok((a, pivots))
}

pub fn rank(m: &[Vec<Scalar>]) -> Result<usize> {
    Ok(rref(m)?.1.len())
}

/// Basis of {x : m x = 0}; one vector per free column, with a 1 in that column.
pub fn nullspace(m: &[Vec<Scalar>], cols: usize, field: &Arc<NumberField>) -> Result<Matrix> {
    if m.is_empty() {
        return Ok((0..cols).map(|i| unit(field, cols, i)).collect());
    }
    let (r, pivots) = rref(m)?;
    let mut out = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Scalar::zero(field); cols];
        v[free] = Scalar::one(field);
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -&r[row][free];
        }
        out.push(v);
    }
    Ok(out)
}

pub fn unit(field: &Arc<NumberField>, len: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(field); len];
    v[i] = Scalar::one(field);
    v
}

/// Some solution of `a x = b`, free variables set to zero; `None` if inconsistent.
pub fn solve_any(a: &[Vec<Scalar>], b: &[Scalar], field: &Arc<NumberField>) -> Result<Option<Vec<Scalar>>> {
    let cols = a.first().map_or(0, |r| r.len());
    let aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut row = r.clone();
            row.push(bi.clone());
            row
        })
        .collect();
    let (r, pivots) = rref(&aug)?;
    if pivots.last() == Some(&cols) {
        return Ok(None);
    }
    let mut x = vec![Scalar::zero(field); cols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = r[row][cols].clone();
    }
    Ok(Some(x))
}

/// The unique solution of a square nonsingular system.
pub fn solve_unique(a: &[Vec<Scalar>], b: &[Scalar], field: &Arc<NumberField>) -> Result<Option<Vec<Scalar>>> {
    let cols = a.first().map_or(0, |r| r.len());
    if rank(a)? != cols {
        return Ok(None);
    }
    solve_any(a, b, field)
}

/// Inverse of a square matrix.
pub fn inverse(a: &[Vec<Scalar>], field: &Arc<NumberField>) -> Result<Matrix> {
    let n = a.len();
    let aug: Matrix = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend(unit(field, n, i));
            row
        })
        .collect();
    let (r, pivots) = rref(&aug)?;
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(Error::Precondition("matrix is singular".into()));
    }
    Ok(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(f: &Arc<NumberField>, rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| Scalar::from_int(f, x)).collect()).collect()
    }

    #[test]
    fn square_kernel() {
        let f = NumberField::rationals();
        let pi = ints(&f, &[&[1, 0, -1, 0], &[0, 1, 0, -1]]);
        let k = nullspace(&pi, 4, &f).unwrap();
        assert_eq!(k, ints(&f, &[&[1, 0, 1, 0], &[0, 1, 0, 1]]));
    }

    #[test]
    fn inverse_round_trip() {
        let f = NumberField::rationals();
        let a = ints(&f, &[&[2, 1], &[1, 1]]);
        let inv = inverse(&a, &f).unwrap();
        let prod: Matrix = a.iter().map(|r| mat_vec(&transpose(&inv), r)).collect();
        assert_eq!(prod, ints(&f, &[&[1, 0], &[0, 1]]));
        assert!(inverse(&ints(&f, &[&[1, 2], &[2, 4]]), &f).is_err());
    }

    #[test]
    fn inconsistent_system() {
        let f = NumberField::rationals();
        let a = ints(&f, &[&[1, 1], &[2, 2]]);
        let b = vec![Scalar::from_int(&f, 1), Scalar::from_int(&f, 3)];
        assert!(solve_any(&a, &b, &f).unwrap().is_none());
    }
}
