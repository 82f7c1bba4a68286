use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::polytope::{FaceId, FacetSet};
use crate::scalars::{dot, Scalar};
use crate::space::ToricSpace;

/// P(w) = Π_j |w_j|^{c_j} with c_j = ⟨ξ − η, X_j⟩.
#[derive(Debug, Clone)]
pub struct PFunction {
    pub exponents_exact: Vec<Scalar>,
    pub exponents: Vec<f64>,
    /// The face G of η; P is defined on C^G × (C*)^{G^c}.
    pub domain_face: FaceId,
}

pub fn p_function(space: &ToricSpace, xi: &[Scalar], eta: &[Scalar]) -> Result<PFunction> {
    let p = &space.polytope;
    for (name, pt) in [("xi", xi), ("eta", eta)] {
        if pt.len() != p.n() || !p.contains(pt)? {
            return Err(Error::Precondition(format!("{name} is not a point of the polytope")));
        }
    }
    let diff: Vec<Scalar> = xi.iter().zip(eta).map(|(a, b)| a - b).collect();
    let exponents_exact: Vec<Scalar> = p.normals().iter().map(|x| dot(&diff, x)).collect();
    let exponents = exponents_exact.iter().map(|c| c.to_f64()).collect();
    let tight = FacetSet::from_indices(p.slacks(eta).iter().enumerate().filter(|(_, s)| s.is_zero()).map(|(j, _)| j));
    let domain_face = space
        .faces
        .face_of_active_set(tight)
        .ok_or_else(|| Error::Internal("a point of the polytope has no face".into()))?
        .id;
    Ok(PFunction { exponents_exact, exponents, domain_face })
}

impl PFunction {
    /// ln P(w), or `None` when P(w) = 0.
    pub fn log_eval(&self, w: &[Complex64]) -> Result<Option<f64>> {
        let mut acc = 0.0;
        let mut vanishes = false;
        for (j, (c, z)) in self.exponents_exact.iter().zip(w).enumerate() {
            if c.is_zero() {
                continue;
            }
            let r = z.norm();
            if r == 0.0 {
                if c.sign()? < 0 {
                    return Err(Error::Domain(format!("w_{j} = 0 where the exponent is negative")));
                }
                vanishes = true;
                continue;
            }
            acc += self.exponents[j] * r.ln();
        }
        Ok(if vanishes { None } else { Some(acc) })
    }

    pub fn eval(&self, w: &[Complex64]) -> Result<f64> {
        Ok(self.log_eval(w)?.map_or(0.0, f64::exp))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;
    use crate::scalars::tests_support::q;

    #[test]
    fn equal_points_give_one() {
        let s = ToricSpace::with_defaults(instances::pyramid()).unwrap();
        let f = s.polytope.field().clone();
        let xi = vec![Scalar::zero(&f), Scalar::zero(&f), Scalar::from_rational(&f, q(1, 2))];
        let p = p_function(&s, &xi, &xi).unwrap();
        assert!(p.exponents_exact.iter().all(|c| c.is_zero()));
        assert_eq!(p.eval(&[Complex64::new(3.0, 1.0); 5]).unwrap(), 1.0);
    }

    #[test]
    fn interval_example() {
        let s = ToricSpace::with_defaults(instances::interval()).unwrap();
        let f = s.polytope.field().clone();
        let p = p_function(&s, &[Scalar::one(&f)], &[Scalar::zero(&f)]).unwrap();
        assert_eq!(p.exponents, vec![1.0, -1.0]);
        let w = [Complex64::new(2.0, 0.0), Complex64::new(0.0, 4.0)];
        assert!((p.eval(&w).unwrap() - 0.5).abs() < 1e-15);
        let tw = [w[0] * 3.0, w[1] * 3.0];
        assert!((p.eval(&tw).unwrap() - 0.5).abs() < 1e-15);
        assert!(matches!(p.eval(&[w[0], Complex64::new(0.0, 0.0)]), Err(Error::Domain(_))));
        assert_eq!(p.eval(&[Complex64::new(0.0, 0.0), w[1]]).unwrap(), 0.0);
    }

    #[test]
    fn pyramid_apex_base_exponents() {
        // ξ = apex, η = base centre: slanted facets get −1, the base +1.
        let s = ToricSpace::with_defaults(instances::pyramid()).unwrap();
        let f = s.polytope.field().clone();
        let apex = vec![Scalar::zero(&f), Scalar::zero(&f), Scalar::one(&f)];
        let base = vec![Scalar::zero(&f); 3];
        let p = p_function(&s, &apex, &base).unwrap();
        assert_eq!(p.exponents, vec![-1.0, -1.0, -1.0, -1.0, 1.0]);
        let rev = p_function(&s, &base, &apex).unwrap();
        assert!(rev.exponents_exact[..4].iter().all(|c| c.is_one()));
    }

    #[test]
    fn outside_point_rejected() {
        let s = ToricSpace::with_defaults(instances::interval()).unwrap();
        let f = s.polytope.field().clone();
        let r = p_function(&s, &[Scalar::from_int(&f, 2)], &[Scalar::zero(&f)]);
        assert!(matches!(r, Err(Error::Precondition(_))));
    }
}
