use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::intmat::{self, IntMatrix};
use crate::error::{Error, Result};
use crate::linalg;
use crate::polytope::{subsets_of_size, Face, FaceLattice, FacetSet, Polytope};
use crate::scalars::{NumberField, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupOrder {
    Finite(BigInt),
    Infinite,
}

impl fmt::Display for GroupOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupOrder::Finite(n) => write!(f, "{n}"),
            GroupOrder::Infinite => write!(f, "infinite"),
        }
    }
}

/// Γ_I (or Γ̌_I) presented by images of the quasilattice generators in T^I = R^I / Z^I.
#[derive(Debug, Clone)]
pub struct GroupPresentation {
    pub chart: FacetSet,
    /// Coordinates carrying the images: I for Γ_I, I \ I_F for Γ̌_I.
    pub coordinates: FacetSet,
    /// d-vectors with entries in [0, 1), zero outside `coordinates`; nonzero and distinct.
    pub generator_images: Vec<Vec<Scalar>>,
    pub finite: bool,
    /// Nontrivial invariant factors when finite.
    pub invariant_factors: Vec<BigInt>,
    pub order: GroupOrder,
}

impl GroupPresentation {
    pub fn is_trivial(&self) -> bool {
        self.order == GroupOrder::Finite(BigInt::one())
    }
}

/// All I with {X_j : j ∈ I} a basis and I ⊆ I_μ for a vertex μ, in lexicographic order.
pub fn chart_index_sets(p: &Polytope, lat: &FaceLattice) -> Result<Vec<FacetSet>> {
    let mut out: Vec<FacetSet> = Vec::new();
    for v in lat.faces().iter().filter(|f| f.dim == 0) {
        let idx = v.index_set.indices();
        for sub in subsets_of_size(idx.len(), p.n()) {
            let set = FacetSet::from_indices(sub.iter().map(|&k| idx[k]));
            if !out.contains(&set) && p.normal_rank(set)? == p.n() {
                out.push(set);
            }
        }
    }
    out.sort_by(|a, b| a.lex_cmp(*b));
    Ok(out)
}

fn check_chart(p: &Polytope, chart: FacetSet) -> Result<()> {
    if chart.len() != p.n() || chart.indices().iter().any(|&j| j >= p.d()) {
        return Err(Error::Precondition(format!("{chart} does not have {} facet indices", p.n())));
    }
    if p.normal_rank(chart)? != p.n() {
        return Err(Error::Precondition(format!("normals of {chart} are not a basis")));
    }
    if !p.vertices().iter().any(|v| chart.is_subset(v.tight)) {
        return Err(Error::Precondition(format!("{chart} is not contained in any vertex's tight set")));
    }
    Ok(())
}

/// π_I^{-1}(q_g) for each quasilattice generator, as coordinate vectors on I.
fn chart_preimages(p: &Polytope, chart: FacetSet) -> Result<Vec<Vec<Scalar>>> {
    let idx = chart.indices();
    let a = linalg::transpose(&idx.iter().map(|&j| p.normals()[j].clone()).collect::<Vec<_>>());
    p.quasilattice()
        .generators()
        .iter()
        .map(|g| {
            linalg::solve_unique(&a, g, p.field())?
                .ok_or_else(|| Error::Internal("chart normals are singular".into()))
        })
        .collect()
}

/// Γ_I = N ∩ T^I ≅ (π_I^{-1}(Q) + Z^I) / Z^I.
pub fn gamma_group(p: &Polytope, chart: FacetSet) -> Result<GroupPresentation> {
    check_chart(p, chart)?;
    let pre = chart_preimages(p, chart)?;
    present(p, chart, chart, &pre, &chart.indices())
}

/// Γ̌_I = Γ_I / (Γ_I ∩ T^F): images restricted to the coordinates I \ I_F.
pub fn gamma_check(p: &Polytope, chart: FacetSet, face: &Face) -> Result<GroupPresentation> {
    check_chart(p, chart)?;
    let common = chart.intersection(face.index_set).len();
    if common != p.n() - face.dim {
        return Err(Error::Precondition(format!(
            "|I ∩ I_F| = {common} but n − p = {}",
            p.n() - face.dim
        )));
    }
    let pre = chart_preimages(p, chart)?;
    let idx = chart.indices();
    let keep = chart.difference(face.index_set);
    let positions: Vec<usize> = (0..idx.len()).filter(|&k| keep.contains(idx[k])).collect();
    let restricted: Vec<Vec<Scalar>> = pre.iter().map(|c| positions.iter().map(|&k| c[k].clone()).collect()).collect();
    present(p, chart, keep, &restricted, &keep.indices())
}

fn present(
    p: &Polytope,
    chart: FacetSet,
    coordinates: FacetSet,
    images: &[Vec<Scalar>],
    coord_idx: &[usize],
) -> Result<GroupPresentation> {
    let field = p.field();
    let mut reduced: Vec<Vec<Scalar>> = Vec::new();
    for c in images {
        let mut full = vec![Scalar::zero(field); p.d()];
        for (k, x) in c.iter().enumerate() {
            let fl = Scalar::from_rational(field, BigRational::from_integer(x.floor()?));
            full[coord_idx[k]] = x - &fl;
        }
        if full.iter().any(|s| !s.is_zero()) && !reduced.contains(&full) {
            reduced.push(full);
        }
    }
    let finite = images.iter().flatten().all(|x| x.as_rational().is_some());
    let (invariant_factors, order) = if finite {
        let rat: Vec<Vec<BigRational>> =
            images.iter().map(|c| c.iter().map(|x| x.as_rational().unwrap().clone()).collect()).collect();
        let inv = finite_quotient(&rat, coord_idx.len());
        let order = inv.iter().fold(BigInt::one(), |a, b| a * b);
        (inv, GroupOrder::Finite(order))
    } else {
        (Vec::new(), GroupOrder::Infinite)
    };
    Ok(GroupPresentation { chart, coordinates, generator_images: reduced, finite, invariant_factors, order })
}

/// Nontrivial invariant factors of (Z^k + Σ Z c_g) / Z^k for rational vectors c_g.
pub fn finite_quotient(images: &[Vec<BigRational>], k: usize) -> Vec<BigInt> {
    if k == 0 {
        return Vec::new();
    }
    let denom = intmat::common_denominator(images.iter().flatten());
    if denom.is_one() {
        return Vec::new();
    }
    let mut rows: IntMatrix = (0..k)
        .map(|i| (0..k).map(|j| if i == j { denom.clone() } else { BigInt::zero() }).collect())
        .collect();
    for c in images {
        rows.push(c.iter().map(|x| (x * BigRational::from_integer(denom.clone())).to_integer()).collect());
    }
    let b = intmat::hnf(&rows);
    debug_assert_eq!(b.len(), k);
    // M = D·B^{-1}: coordinates of D·e_i in the basis B.
    let q = NumberField::rationals();
    let to_scalar = |x: &BigInt| Scalar::from_rational(&q, BigRational::from_integer(x.clone()));
    let bs: Vec<Vec<Scalar>> = b.iter().map(|r| r.iter().map(to_scalar).collect()).collect();
    let binv = linalg::inverse(&bs, &q).expect("Hermite basis of a full-rank lattice is invertible");
    let m: IntMatrix = binv
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| {
                    let v = x.as_rational().unwrap() * BigRational::from_integer(denom.clone());
                    debug_assert!(v.is_integer());
                    v.to_integer()
                })
                .collect()
        })
        .collect();
    let (inv, _) = intmat::smith_invariants(&m);
    inv.into_iter().map(|x| x.abs()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;
    use crate::polytope::enumerate_faces;

    #[test]
    fn triangle_charts_trivial() {
        let p = instances::triangle();
        let lat = enumerate_faces(&p).unwrap();
        let charts = chart_index_sets(&p, &lat).unwrap();
        assert_eq!(charts.len(), 3);
        for c in charts {
            assert!(gamma_group(&p, c).unwrap().is_trivial());
        }
    }

    #[test]
    fn weighted_triangle_order_two() {
        let p = instances::weighted_triangle();
        let g = gamma_group(&p, FacetSet::from_indices([0, 2])).unwrap();
        assert!(g.finite);
        assert_eq!(g.invariant_factors, vec![BigInt::from(2)]);
        assert_eq!(g.order, GroupOrder::Finite(BigInt::from(2)));
        assert!(gamma_group(&p, FacetSet::from_indices([0, 1])).unwrap().is_trivial());
        assert!(gamma_group(&p, FacetSet::from_indices([1, 2])).unwrap().is_trivial());
    }

    #[test]
    fn sqrt2_interval_infinite() {
        let p = instances::interval_sqrt2();
        let g = gamma_group(&p, FacetSet::from_indices([0])).unwrap();
        assert!(!g.finite);
        assert_eq!(g.order, GroupOrder::Infinite);
    }

    #[test]
    fn invalid_chart_rejected() {
        let p = instances::pyramid();
        assert!(matches!(gamma_group(&p, FacetSet::from_indices([0, 1])), Err(Error::Precondition(_))));
        // {0, 1, 4}: rank 3 but no vertex lies on facets 0, 1 and 4 together
        assert!(matches!(gamma_group(&p, FacetSet::from_indices([0, 1, 4])), Err(Error::Precondition(_))));
    }

    #[test]
    fn pyramid_apex_charts() {
        let p = instances::pyramid();
        let lat = enumerate_faces(&p).unwrap();
        let charts = chart_index_sets(&p, &lat).unwrap();
        let apex = FacetSet::from_indices([0, 1, 2, 3]);
        let at_apex: Vec<_> = charts.iter().filter(|c| c.is_subset(apex)).collect();
        assert_eq!(at_apex.len(), 4);
        let f = lat.by_index_set(apex).unwrap();
        for c in at_apex {
            let g = gamma_group(&p, *c).unwrap();
            let gc = gamma_check(&p, *c, f).unwrap();
            assert!(gc.is_trivial());
            assert!(g.finite);
        }
    }

    #[test]
    fn vertex_check_group_is_trivial() {
        let p = instances::weighted_triangle();
        let lat = enumerate_faces(&p).unwrap();
        let v = lat.by_index_set(FacetSet::from_indices([0, 2])).unwrap();
        let gc = gamma_check(&p, FacetSet::from_indices([0, 2]), v).unwrap();
        assert!(gc.is_trivial());
        assert!(gc.generator_images.is_empty());
    }

    #[test]
    fn sqrt2_pyramid_check_group_infinite() {
        let p = instances::pyramid_sqrt2();
        let lat = enumerate_faces(&p).unwrap();
        let edge = lat.by_index_set(FacetSet::from_indices([0, 3])).expect("apex edge");
        assert_eq!(edge.dim, 1);
        let gc = gamma_check(&p, FacetSet::from_indices([0, 1, 3]), edge).unwrap();
        assert_eq!(gc.order, GroupOrder::Infinite);
    }
}
