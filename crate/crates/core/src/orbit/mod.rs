//! Closed-orbit classification, P-functions and the orbit equivalence test.

mod equivalence;
mod flow;
mod pfunction;

use num_complex::Complex64;
use serde::Serialize;

pub use equivalence::{canonical_witness, equivalent, n_orbit_equal, Equivalence, Verdict};
pub use pfunction::{p_function, PFunction};

use crate::error::{Error, Result};
use crate::moment::RetractionResult;
use crate::polytope::{zero_set, FaceId, FacetSet};
use crate::scalars::Scalar;
use crate::space::ToricSpace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Exactness {
    Exact,
    Approximate,
}

/// A point of C^d, optionally with exact phases (in full turns) and exact squared moduli.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitPoint {
    pub z: Vec<Complex64>,
    pub turns: Option<Vec<Scalar>>,
    pub modulus_sq: Option<Vec<Scalar>>,
}

impl OrbitPoint {
    pub fn from_complex(z: Vec<Complex64>) -> Self {
        OrbitPoint { z, turns: None, modulus_sq: None }
    }

    /// z_j = √m_j · e^{2πi t_j}.
    pub fn from_exact(modulus_sq: Vec<Scalar>, turns: Vec<Scalar>) -> Self {
        let z = modulus_sq
            .iter()
            .zip(&turns)
            .map(|(m, t)| {
                if m.is_zero() {
                    Complex64::new(0.0, 0.0)
                } else {
                    Complex64::from_polar(m.to_f64().sqrt(), 2.0 * std::f64::consts::PI * t.to_f64())
                }
            })
            .collect();
        OrbitPoint { z, turns: Some(turns), modulus_sq: Some(modulus_sq) }
    }

    /// With exact phases and float moduli.
    pub fn with_turns(moduli: &[f64], turns: Vec<Scalar>) -> Self {
        let z = moduli
            .iter()
            .zip(&turns)
            .map(|(r, t)| Complex64::from_polar(*r, 2.0 * std::f64::consts::PI * t.to_f64()))
            .collect();
        OrbitPoint { z, turns: Some(turns), modulus_sq: None }
    }

    /// I_z, from exact moduli when present.
    pub fn zeros(&self) -> FacetSet {
        match &self.modulus_sq {
            Some(m) => FacetSet::from_indices(m.iter().enumerate().filter(|(_, s)| s.is_zero()).map(|(j, _)| j)),
            None => zero_set(&self.z),
        }
    }

    fn is_exact(&self) -> bool {
        self.turns.is_some() && self.modulus_sq.is_some()
    }

    fn zeroed(&self, set: FacetSet) -> OrbitPoint {
        let mut out = self.clone();
        for j in set.indices() {
            out.z[j] = Complex64::new(0.0, 0.0);
            if let Some(m) = out.modulus_sq.as_mut() {
                m[j] = Scalar::zero(m[j].field());
            }
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct OrbitClass {
    pub input: OrbitPoint,
    /// I_z.
    pub zeros: FacetSet,
    pub closed: bool,
    /// E: the smallest face with I_E ⊇ I_z.
    pub face: FaceId,
    /// The input with the coordinates in I_E set to zero.
    pub closed_rep: OrbitPoint,
    pub retracted: RetractionResult,
    pub exactness: Exactness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "face")]
pub enum StratumLabel {
    Maximal,
    Singular(FaceId),
}

fn locate(space: &ToricSpace, point: &OrbitPoint) -> Result<(FacetSet, FaceId)> {
    if point.z.len() != space.polytope.d() {
        return Err(Error::Parse(format!(
            "point has {} coordinates, expected {}",
            point.z.len(),
            space.polytope.d()
        )));
    }
    let zeros = point.zeros();
    let face = space
        .faces
        .face_of_active_set(zeros)
        .ok_or_else(|| Error::OutsideDomain(format!("no face carries the zero set {zeros}")))?;
    Ok((zeros, face.id))
}

/// Classifies the A-orbit of z and retracts its closed representative onto Ψ^{-1}(0).
pub fn classify_orbit(space: &ToricSpace, point: &OrbitPoint) -> Result<OrbitClass> {
    let (zeros, face) = locate(space, point)?;
    let e = space.faces.face(face).index_set;
    let closed = zeros == e;
    let closed_rep = point.zeroed(e);
    let retracted = space.moment.retract(&closed_rep.z, &space.config)?;
    let exactness = if point.is_exact() { Exactness::Exact } else { Exactness::Approximate };
    Ok(OrbitClass { input: point.clone(), zeros, closed, face, closed_rep, retracted, exactness })
}

/// For a nonclosed orbit, an exact Y ∈ 𝔫 whose flow z ↦ e^{−2πtY}z fixes the coordinates
/// off I_E and drives those in I_E \ I_z to zero; `None` for closed orbits.
pub fn closing_flow_direction(space: &ToricSpace, point: &OrbitPoint) -> Result<Option<Vec<Scalar>>> {
    let (zeros, face) = locate(space, point)?;
    let f = space.faces.face(face);
    if f.index_set == zeros {
        return Ok(None);
    }
    flow::closing_direction(&space.polytope, zeros, f).map(Some)
}

/// The stratum containing the class of z.
pub fn stratum_of(space: &ToricSpace, point: &OrbitPoint) -> Result<StratumLabel> {
    let (_, face) = locate(space, point)?;
    Ok(if space.faces.face(face).singular() { StratumLabel::Singular(face) } else { StratumLabel::Maximal })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn pyramid() -> ToricSpace {
        ToricSpace::with_defaults(instances::pyramid()).unwrap()
    }

    #[test]
    fn classification_examples() {
        let s = pyramid();
        let all = OrbitPoint::from_complex(vec![c(1.0), c(0.5), c(2.0), c(1.0), c(1.0)]);
        let k = classify_orbit(&s, &all).unwrap();
        assert!(k.closed);
        assert_eq!(k.closed_rep, all);

        let z = OrbitPoint::from_complex(vec![c(0.0), c(0.0), c(0.0), c(1.0), c(1.0)]);
        let k = classify_orbit(&s, &z).unwrap();
        assert!(!k.closed);
        assert_eq!(s.faces.face(k.face).index_set, FacetSet::from_indices([0, 1, 2, 3]));
        assert_eq!(k.closed_rep.z, vec![c(0.0), c(0.0), c(0.0), c(0.0), c(1.0)]);

        let apex = OrbitPoint::from_complex(vec![c(0.0), c(0.0), c(0.0), c(0.0), c(1.0)]);
        let k = classify_orbit(&s, &apex).unwrap();
        assert!(k.closed);
        // ξ is the apex (0, 0, 1)
        assert!((k.retracted.xi[2] - 1.0).abs() < 1e-8);

        let outside = OrbitPoint::from_complex(vec![c(0.0); 5]);
        assert!(matches!(classify_orbit(&s, &outside), Err(Error::OutsideDomain(_))));
    }

    #[test]
    fn flow_closes_opposite_facets() {
        let s = pyramid();
        let z = OrbitPoint::from_complex(vec![c(0.0), c(0.0), c(1.0), c(1.0), c(1.0)]);
        let y = closing_flow_direction(&s, &z).unwrap().unwrap();
        assert!(y[2].to_f64() >= 1.0 && y[3].to_f64() >= 1.0);
        assert!(y[4].is_zero());
        assert!(s.sequence.apply_pi(&y).iter().all(|v| v.is_zero()));
    }

    #[test]
    fn strata_examples() {
        let s = pyramid();
        let all = OrbitPoint::from_complex(vec![c(1.0); 5]);
        assert_eq!(stratum_of(&s, &all).unwrap(), StratumLabel::Maximal);
        let apex = OrbitPoint::from_complex(vec![c(0.0), c(0.0), c(0.0), c(0.0), c(1.0)]);
        assert!(matches!(stratum_of(&s, &apex).unwrap(), StratumLabel::Singular(_)));
        let facet = OrbitPoint::from_complex(vec![c(0.0), c(1.0), c(1.0), c(1.0), c(1.0)]);
        assert_eq!(stratum_of(&s, &facet).unwrap(), StratumLabel::Maximal);
    }

    #[test]
    fn idempotent_closed_rep() {
        let s = pyramid();
        let z = OrbitPoint::from_complex(vec![c(0.0), c(0.0), c(0.0), c(1.0), c(1.0)]);
        let k = classify_orbit(&s, &z).unwrap();
        let k2 = classify_orbit(&s, &k.closed_rep).unwrap();
        assert_eq!(k2.closed_rep, k.closed_rep);
    }
}
