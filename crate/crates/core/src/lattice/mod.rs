//! Quasilattices, the exact sequence 0 → 𝔫 → R^d → 𝔡 → 0, and the discrete groups Γ_I.

mod groups;
pub mod intmat;
mod sequence;

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

pub use groups::{chart_index_sets, gamma_check, gamma_group, GroupOrder, GroupPresentation};
pub use sequence::{kernel_data, n_membership, SequenceData};

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalars::{NumberField, Scalar};
use intmat::IntMatrix;

/// Rational coordinates of a field vector: entry i contributes `degree` coefficients.
pub(crate) fn expand(v: &[Scalar]) -> Vec<BigRational> {
    v.iter().flat_map(|s| s.coeffs().iter().cloned()).collect()
}

fn contract(field: &Arc<NumberField>, flat: &[BigRational]) -> Vec<Scalar> {
    flat.chunks(field.degree())
        .map(|c| Scalar::from_coeffs(field, c.to_vec()).expect("chunk has field degree"))
        .collect()
}

fn scaled_integers(v: &[BigRational], denom: &BigInt) -> Option<Vec<BigInt>> {
    v.iter()
        .map(|x| {
            let y = x * BigRational::from_integer(denom.clone());
            y.is_integer().then(|| y.to_integer())
        })
        .collect()
}

/// The integer span of finitely many field vectors, held as a Hermite basis of
/// the denominator-cleared coefficient expansions.
#[derive(Debug, Clone)]
pub struct ZSpan {
    field: Arc<NumberField>,
    dim: usize,
    denom: BigInt,
    basis: IntMatrix,
}

impl ZSpan {
    pub fn new(field: &Arc<NumberField>, dim: usize, generators: &[Vec<Scalar>]) -> Self {
        let flat: Vec<Vec<BigRational>> = generators.iter().map(|g| expand(g)).collect();
        let denom = intmat::common_denominator(flat.iter().flatten());
        let rows: IntMatrix = flat
            .iter()
            .map(|r| scaled_integers(r, &denom).expect("denominator clears all entries"))
            .collect();
        let basis = if rows.is_empty() { Vec::new() } else { intmat::hnf(&rows) };
        ZSpan { field: field.clone(), dim, denom, basis }
    }

    /// Rank as a free abelian group.
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        if v.iter().all(|x| x.is_zero()) {
            return true;
        }
        match scaled_integers(&expand(v), &self.denom) {
            Some(iv) => intmat::hnf_contains(&self.basis, &iv),
            None => false,
        }
    }

    /// A Z-basis as field vectors.
    pub fn basis_vectors(&self) -> Vec<Vec<Scalar>> {
        let d = BigRational::from_integer(self.denom.clone());
        self.basis
            .iter()
            .map(|r| {
                let flat: Vec<BigRational> = r.iter().map(|x| BigRational::from_integer(x.clone()) / &d).collect();
                contract(&self.field, &flat)
            })
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// A finitely generated subgroup Q of 𝔡 = field^n spanning 𝔡 over R.
#[derive(Debug, Clone)]
pub struct Quasilattice {
    field: Arc<NumberField>,
    ambient_dim: usize,
    generators: Vec<Vec<Scalar>>,
    span: ZSpan,
}

impl Quasilattice {
    pub fn new(field: &Arc<NumberField>, ambient_dim: usize, generators: Vec<Vec<Scalar>>) -> Result<Self> {
        if generators.iter().any(|g| g.len() != ambient_dim) {
            return Err(Error::Validation(format!(
                "quasilattice generators must have length {ambient_dim}"
            )));
        }
        if linalg::rank(&generators)? != ambient_dim {
            return Err(Error::Validation("quasilattice generators do not span the ambient space".into()));
        }
        let span = ZSpan::new(field, ambient_dim, &generators);
        Ok(Quasilattice { field: field.clone(), ambient_dim, generators, span })
    }

    /// The standard lattice Z^n.
    pub fn standard(field: &Arc<NumberField>, n: usize) -> Self {
        let gens = (0..n).map(|i| linalg::unit(field, n, i)).collect();
        Self::new(field, n, gens).expect("unit vectors span")
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn generators(&self) -> &[Vec<Scalar>] {
        &self.generators
    }

    pub fn z_rank(&self) -> usize {
        self.span.rank()
    }

    pub fn is_lattice(&self) -> bool {
        self.z_rank() == self.ambient_dim
    }

    /// A Z-basis of Q, certifying the rank.
    pub fn basis_certificate(&self) -> Vec<Vec<Scalar>> {
        self.span.basis_vectors()
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.span.contains(v)
    }

    /// Generators of Q ∩ {v : ⟨φ, v⟩ = 0 for every φ in `annihilators`}.
    pub fn intersect_subspace(&self, annihilators: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
        if annihilators.is_empty() {
            return self.basis_certificate();
        }
        let basis = self.basis_certificate();
        let rows: Vec<Vec<BigRational>> = basis
            .iter()
            .map(|q| {
                let vals: Vec<Scalar> = annihilators.iter().map(|phi| crate::scalars::dot(phi, q)).collect();
                expand(&vals)
            })
            .collect();
        let denom = intmat::common_denominator(rows.iter().flatten());
        let irows: IntMatrix = rows.iter().map(|r| scaled_integers(r, &denom).expect("cleared")).collect();
        let kernel = intmat::left_kernel(&irows);
        kernel
            .iter()
            .map(|c| {
                let mut v = vec![Scalar::zero(&self.field); self.ambient_dim];
                for (ci, q) in c.iter().zip(&basis) {
                    if ci.is_zero() {
                        continue;
                    }
                    let s = Scalar::from_rational(&self.field, BigRational::from_integer(ci.clone()));
                    for (vi, qi) in v.iter_mut().zip(q) {
                        *vi = &*vi + &(&s * qi);
                    }
                }
                v
            })
            .collect()
    }
}

/// Z-rank and basis certificate.
pub fn quasilattice_rank(q: &Quasilattice) -> (usize, Vec<Vec<Scalar>>) {
    (q.z_rank(), q.basis_certificate())
}

pub fn quasilattice_membership(q: &Quasilattice, v: &[Scalar]) -> bool {
    q.contains(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::tests_support::{q, sqrt2};

    #[test]
    fn rank_examples() {
        let f = NumberField::rationals();
        let z2 = Quasilattice::standard(&f, 2);
        assert_eq!(z2.z_rank(), 2);
        assert!(z2.is_lattice());

        let g = sqrt2();
        let one_root2 =
            Quasilattice::new(&g, 1, vec![vec![Scalar::one(&g)], vec![Scalar::generator(&g)]]).unwrap();
        assert_eq!(one_root2.z_rank(), 2);
        assert!(!one_root2.is_lattice());

        let half = Quasilattice::new(
            &f,
            1,
            vec![vec![Scalar::one(&f)], vec![Scalar::from_rational(&f, q(1, 2))]],
        )
        .unwrap();
        assert_eq!(half.z_rank(), 1);
        assert!(half.is_lattice());
        assert_eq!(half.basis_certificate(), vec![vec![Scalar::from_rational(&f, q(1, 2))]]);
    }

    #[test]
    fn membership_examples() {
        let g = sqrt2();
        let r2 = Scalar::generator(&g);
        let ql = Quasilattice::new(&g, 1, vec![vec![Scalar::one(&g)], vec![r2.clone()]]).unwrap();
        assert!(ql.contains(&[Scalar::zero(&g)]));
        let v = &Scalar::from_int(&g, 3) - &(&Scalar::from_int(&g, 2) * &r2);
        assert!(ql.contains(&[v]));
        let two = Scalar::from_int(&g, 2);
        let even = Quasilattice::new(&g, 1, vec![vec![two.clone()], vec![&two * &r2]]).unwrap();
        assert!(!even.contains(&[Scalar::one(&g)]));
        assert!(!ql.contains(&[Scalar::from_rational(&g, q(1, 2))]));
    }

    #[test]
    fn non_spanning_rejected() {
        let f = NumberField::rationals();
        let r = Quasilattice::new(&f, 2, vec![vec![Scalar::one(&f), Scalar::zero(&f)]]);
        assert!(matches!(r, Err(Error::Validation(_))));
    }

    #[test]
    fn saturation_into_line() {
        // Q = Z², subspace x = y: Q ∩ V = Z(1,1).
        let f = NumberField::rationals();
        let z2 = Quasilattice::standard(&f, 2);
        let phi = vec![vec![Scalar::one(&f), Scalar::from_int(&f, -1)]];
        let gens = z2.intersect_subspace(&phi);
        assert_eq!(gens.len(), 1);
        let span = ZSpan::new(&f, 2, &gens);
        assert!(span.contains(&[Scalar::one(&f), Scalar::one(&f)]));
        assert!(!span.contains(&[Scalar::from_rational(&f, q(1, 2)), Scalar::from_rational(&f, q(1, 2))]));
    }
}
