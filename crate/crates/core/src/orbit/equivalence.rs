use num_complex::Complex64;
use num_traits::Zero;

use super::{classify_orbit, Exactness, OrbitClass, OrbitPoint};
use crate::error::{Error, Result};
use crate::lattice::ZSpan;
use crate::linalg;
use crate::polytope::FacetSet;
use crate::scalars::{dot, Scalar};
use crate::space::ToricSpace;

/// Maximum ‖Ψ‖ accepted for float points said to lie on the zero level.
pub const LEVEL_TOLERANCE: f64 = 1e-7;
/// Relative tolerance when comparing float squared moduli.
pub const MODULUS_TOLERANCE: f64 = 1e-7;
/// Distance to the nearest integer accepted in float phase tests.
pub const PHASE_TOLERANCE: f64 = 1e-6;
/// Coefficient bound of the box search over surplus quasilattice generators.
pub const BOX_BOUND: i64 = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub equal: bool,
    pub exactness: Exactness,
    pub reason: String,
}

impl Verdict {
    fn new(equal: bool, exact: bool, reason: impl Into<String>) -> Self {
        let exactness = if exact { Exactness::Exact } else { Exactness::Approximate };
        Verdict { equal, exactness, reason: reason.into() }
    }
}

fn on_level(space: &ToricSpace, p: &OrbitPoint) -> Result<()> {
    match &p.modulus_sq {
        Some(m) => {
            let ups: Vec<Scalar> = m.iter().zip(space.polytope.offsets()).map(|(a, l)| a + l).collect();
            if space.sequence.apply_iota_star(&ups).iter().any(|s| !s.is_zero()) {
                return Err(Error::Precondition("exact point is not on the zero level".into()));
            }
        }
        None => {
            let r = space.moment.residual(&p.z);
            if r > LEVEL_TOLERANCE {
                return Err(Error::Precondition(format!("point is off the zero level (residual {r:e})")));
            }
        }
    }
    Ok(())
}

fn float_turns(z: &[Complex64]) -> Vec<f64> {
    z.iter().map(|c| c.arg() / (2.0 * std::f64::consts::PI)).collect()
}

/// Whether two zero-level points differ by an element of N.
pub fn n_orbit_equal(space: &ToricSpace, x: &OrbitPoint, y: &OrbitPoint) -> Result<Verdict> {
    on_level(space, x)?;
    on_level(space, y)?;
    let zx = x.zeros();
    if zx != y.zeros() {
        return Ok(Verdict::new(false, true, "supports differ"));
    }
    let support = FacetSet::full(space.polytope.d()).difference(zx).indices();
    let mut exact = true;
    match (&x.modulus_sq, &y.modulus_sq) {
        (Some(a), Some(b)) => {
            if a != b {
                return Ok(Verdict::new(false, true, "moduli differ"));
            }
        }
        _ => {
            for &j in &support {
                let (a, b) = (x.z[j].norm_sqr(), y.z[j].norm_sqr());
                if a != b {
                    exact = false;
                }
                if (a - b).abs() > MODULUS_TOLERANCE * a.abs().max(1.0) {
                    return Ok(Verdict::new(false, false, format!("moduli differ at coordinate {j}")));
                }
            }
        }
    }
    if x.turns.is_none() && y.turns.is_none() && support.iter().all(|&j| x.z[j] == y.z[j]) {
        return Ok(Verdict::new(true, exact, "identical points"));
    }
    let p = &space.polytope;
    let field = p.field();
    let face = space
        .faces
        .face_of_active_set(zx)
        .ok_or_else(|| Error::OutsideDomain(format!("no face carries the zero set {zx}")))?;
    let e_rows: Vec<Vec<Scalar>> = face.index_set.indices().iter().map(|&j| p.normals()[j].clone()).collect();
    let phis = if e_rows.is_empty() {
        (0..p.n()).map(|i| linalg::unit(field, p.n(), i)).collect()
    } else {
        linalg::nullspace(&e_rows, p.n(), field)?
    };
    if phis.is_empty() {
        return Ok(Verdict::new(true, exact, "face directions span 𝔡"));
    }
    let images: Vec<Vec<Scalar>> =
        p.quasilattice().generators().iter().map(|q| phis.iter().map(|phi| dot(phi, q)).collect()).collect();
    let span = ZSpan::new(field, phis.len(), &images);
    if let (Some(tx), Some(ty)) = (&x.turns, &y.turns) {
        let mut u = vec![Scalar::zero(field); p.n()];
        for &j in &support {
            let t = &ty[j] - &tx[j];
            for (ui, xi) in u.iter_mut().zip(&p.normals()[j]) {
                *ui = &*ui + &(&t * xi);
            }
        }
        let target: Vec<Scalar> = phis.iter().map(|phi| dot(phi, &u)).collect();
        let inside = span.contains(&target);
        let reason = if inside { "phase difference lies in N" } else { "phase difference is not in N" };
        return Ok(Verdict::new(inside, exact, reason));
    }
    let (tx, ty) = (float_turns(&x.z), float_turns(&y.z));
    let mut u = vec![0.0; p.n()];
    for &j in &support {
        let t = ty[j] - tx[j];
        for (ui, xi) in u.iter_mut().zip(&p.normals()[j]) {
            *ui += t * xi.to_f64();
        }
    }
    let target: Vec<f64> =
        phis.iter().map(|phi| phi.iter().zip(&u).map(|(a, b)| a.to_f64() * b).sum()).collect();
    let inside = approx_member(&span, &target)?;
    let reason = if inside { "phase difference lies in N within tolerance" } else { "phase difference is not in N" };
    Ok(Verdict::new(inside, false, reason))
}

/// Float membership in a Z-span: exact when the span is a lattice, otherwise a bounded box
/// search over the surplus generators.
fn approx_member(span: &ZSpan, target: &[f64]) -> Result<bool> {
    let basis = span.basis_vectors();
    let s = span.dim();
    let mut chosen: Vec<Vec<Scalar>> = Vec::new();
    let mut extra: Vec<Vec<Scalar>> = Vec::new();
    for b in basis {
        let mut trial = chosen.clone();
        trial.push(b.clone());
        if chosen.len() < s && linalg::rank(&trial)? == trial.len() {
            chosen = trial;
        } else {
            extra.push(b);
        }
    }
    if chosen.len() < s {
        return Ok(false);
    }
    let to_f = |v: &Vec<Scalar>| v.iter().map(|x| x.to_f64()).collect::<Vec<f64>>();
    let base = nalgebra::DMatrix::from_fn(s, s, |i, j| chosen[j][i].to_f64());
    let lu = base.lu();
    let extra_f: Vec<Vec<f64>> = extra.iter().map(to_f).collect();
    let mut bound = BOX_BOUND;
    while extra_f.len() > 0 && (2 * bound + 1).pow(extra_f.len() as u32) > 200_000 && bound > 1 {
        bound /= 2;
    }
    let m = extra_f.len();
    let mut coeffs = vec![-bound; m];
    loop {
        let mut r = nalgebra::DVector::from_column_slice(target);
        for (c, e) in coeffs.iter().zip(&extra_f) {
            for i in 0..s {
                r[i] -= *c as f64 * e[i];
            }
        }
        if let Some(sol) = lu.solve(&r) {
            if sol.iter().all(|c| (c - c.round()).abs() <= PHASE_TOLERANCE) {
                return Ok(true);
            }
        }
        let mut k = 0;
        loop {
            if k == m {
                return Ok(false);
            }
            coeffs[k] += 1;
            if coeffs[k] <= bound {
                break;
            }
            coeffs[k] = -bound;
            k += 1;
        }
    }
}

/// The retracted point with every phase divided by the phase of its first nonzero coordinate.
pub fn canonical_witness(x: &[Complex64]) -> Vec<Complex64> {
    match x.iter().find(|c| !c.is_zero()) {
        Some(first) => {
            let u = first / first.norm();
            x.iter().map(|c| c / u).collect()
        }
        None => x.to_vec(),
    }
}

#[derive(Debug, Clone)]
pub struct Equivalence {
    pub equivalent: bool,
    pub exactness: Exactness,
    pub reason: String,
    pub left: OrbitClass,
    pub right: OrbitClass,
}

fn retracted_point(c: &OrbitClass) -> OrbitPoint {
    OrbitPoint { z: c.retracted.x.clone(), turns: c.input.turns.clone(), modulus_sq: None }
}

/// z ∼ w: same face E and N-equal retracted representatives.
pub fn equivalent(space: &ToricSpace, z: &OrbitPoint, w: &OrbitPoint) -> Result<Equivalence> {
    let left = classify_orbit(space, z)?;
    let right = classify_orbit(space, w)?;
    if left.face != right.face {
        return Ok(Equivalence {
            equivalent: false,
            exactness: Exactness::Exact,
            reason: "closures meet different faces".into(),
            left,
            right,
        });
    }
    let v = n_orbit_equal(space, &retracted_point(&left), &retracted_point(&right))?;
    Ok(Equivalence { equivalent: v.equal, exactness: v.exactness, reason: v.reason, left, right })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;
    use crate::scalars::tests_support::q;

    fn interval() -> ToricSpace {
        ToricSpace::with_defaults(instances::interval()).unwrap()
    }

    fn level_point(s: &ToricSpace, turns: [BigQ; 2]) -> OrbitPoint {
        let f = s.polytope.field().clone();
        let half = Scalar::from_rational(&f, q(1, 2));
        let t = turns.iter().map(|&(a, b)| Scalar::from_rational(&f, q(a, b))).collect();
        OrbitPoint::from_exact(vec![half.clone(), half], t)
    }

    type BigQ = (i64, i64);

    #[test]
    fn identical_points_equal() {
        let s = interval();
        let x = level_point(&s, [(0, 1), (0, 1)]);
        let v = n_orbit_equal(&s, &x, &x).unwrap();
        assert!(v.equal);
        assert_eq!(v.exactness, Exactness::Exact);
    }

    #[test]
    fn diagonal_phase_is_in_n() {
        let s = interval();
        let x = level_point(&s, [(0, 1), (0, 1)]);
        let y = level_point(&s, [(1, 3), (1, 3)]);
        let v = n_orbit_equal(&s, &x, &y).unwrap();
        assert!(v.equal);
        assert_eq!(v.exactness, Exactness::Exact);
        let y = level_point(&s, [(1, 3), (0, 1)]);
        let v = n_orbit_equal(&s, &x, &y).unwrap();
        assert!(!v.equal);
        assert_eq!(v.exactness, Exactness::Exact);
    }

    #[test]
    fn float_phases_are_approximate() {
        let s = interval();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let x = OrbitPoint::from_complex(vec![Complex64::new(h, 0.0); 2]);
        let rot = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        let y = OrbitPoint::from_complex(vec![x.z[0] * rot, x.z[1] * rot]);
        let v = n_orbit_equal(&s, &x, &y).unwrap();
        assert!(v.equal);
        assert_eq!(v.exactness, Exactness::Approximate);
        let y = OrbitPoint::from_complex(vec![x.z[0] * rot, x.z[1]]);
        assert!(!n_orbit_equal(&s, &x, &y).unwrap().equal);
    }

    #[test]
    fn off_level_rejected() {
        let s = interval();
        let x = OrbitPoint::from_complex(vec![Complex64::new(1.0, 0.0); 2]);
        assert!(matches!(n_orbit_equal(&s, &x, &x), Err(Error::Precondition(_))));
    }

    #[test]
    fn equivalence_examples() {
        let s = interval();
        let c = |r: f64| Complex64::new(r, 0.0);
        let z = OrbitPoint::from_complex(vec![c(1.0), c(1.0)]);
        let w = OrbitPoint::from_complex(vec![c(2.0), c(2.0)]);
        let e = equivalent(&s, &z, &z).unwrap();
        assert!(e.equivalent);
        assert_eq!(e.exactness, Exactness::Exact);
        assert!(equivalent(&s, &z, &w).unwrap().equivalent);
        let a = OrbitPoint::from_complex(vec![c(1.0), c(0.0)]);
        let b = OrbitPoint::from_complex(vec![c(0.0), c(1.0)]);
        let e = equivalent(&s, &a, &b).unwrap();
        assert!(!e.equivalent);
        assert_eq!(e.exactness, Exactness::Exact);
    }

    #[test]
    fn witness_normalizes_first_phase() {
        let x = [Complex64::new(0.0, 0.0), Complex64::new(0.0, 2.0), Complex64::new(1.0, 0.0)];
        let w = canonical_witness(&x);
        assert!((w[1] - Complex64::new(2.0, 0.0)).norm() < 1e-15);
        assert!((w[2] - Complex64::new(0.0, -1.0)).norm() < 1e-15);
    }
}
