use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg;
use crate::orbit::OrbitPoint;
use crate::polytope::{FaceId, FacetSet, Polytope};
use crate::scalars::Scalar;
use crate::space::ToricSpace;

/// Phases are drawn from multiples of 1/TURN_DENOMINATOR.
const TURN_DENOMINATOR: i64 = 64;

/// Seeded source of points, polytope points and N_C elements.
#[derive(Debug, Clone)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

/// exp(2πi(θ + i a)) ∈ N_C: exact turns θ with π(θ) ∈ Q, and a ∈ 𝔫.
#[derive(Debug, Clone)]
pub struct NcElement {
    pub turns: Vec<Scalar>,
    pub imaginary: Vec<f64>,
}

fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl NcElement {
    pub fn identity(space: &ToricSpace) -> Self {
        let f = space.polytope.field();
        NcElement { turns: vec![Scalar::zero(f); space.polytope.d()], imaginary: vec![0.0; space.polytope.d()] }
    }

    /// z_j ↦ e^{2πiθ_j} e^{−2πa_j} z_j; exact turns are carried along when present.
    pub fn act(&self, point: &OrbitPoint) -> OrbitPoint {
        let scale: Vec<f64> = self.imaginary.iter().map(|a| (-2.0 * std::f64::consts::PI * a).exp()).collect();
        match &point.turns {
            Some(t) => {
                let moduli: Vec<f64> = point.z.iter().zip(&scale).map(|(z, s)| z.norm() * s).collect();
                let turns = t.iter().zip(&self.turns).map(|(a, b)| a + b).collect();
                OrbitPoint::with_turns(&moduli, turns)
            }
            None => OrbitPoint::from_complex(
                point
                    .z
                    .iter()
                    .zip(&self.turns)
                    .zip(&scale)
                    .map(|((z, t), s)| z * Complex64::from_polar(*s, 2.0 * std::f64::consts::PI * t.to_f64()))
                    .collect(),
            ),
        }
    }
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..hi)
    }

    pub fn turn(&mut self, space: &ToricSpace) -> Scalar {
        let k = self.rng.random_range(0..TURN_DENOMINATOR);
        Scalar::from_rational(space.polytope.field(), rational(k, TURN_DENOMINATOR))
    }

    pub fn face(&mut self, space: &ToricSpace) -> FaceId {
        self.rng.random_range(0..space.faces.faces().len())
    }

    /// A point with zero set exactly `zeros`, exact phases and float moduli in [0.3, 2].
    pub fn point_with_zeros(&mut self, space: &ToricSpace, zeros: FacetSet) -> OrbitPoint {
        let d = space.polytope.d();
        let moduli: Vec<f64> =
            (0..d).map(|j| if zeros.contains(j) { 0.0 } else { self.uniform(0.3, 2.0) }).collect();
        let turns = (0..d).map(|_| self.turn(space)).collect();
        OrbitPoint::with_turns(&moduli, turns)
    }

    /// A point of C^d_Δ: zeros on a random subset of I_F for a random face F.
    pub fn domain_point(&mut self, space: &ToricSpace) -> OrbitPoint {
        let f = space.faces.face(self.face(space)).index_set;
        let zeros = FacetSet::from_indices(f.indices().into_iter().filter(|_| self.rng.random_bool(0.5)));
        self.point_with_zeros(space, zeros)
    }

    /// A point whose orbit is closed: its zero set is I_F for a random face F.
    pub fn closed_point(&mut self, space: &ToricSpace) -> OrbitPoint {
        let f = space.faces.face(self.face(space)).index_set;
        self.point_with_zeros(space, f)
    }

    /// A point of the relative interior of a random face, as a rational convex combination of its vertices.
    pub fn polytope_point(&mut self, space: &ToricSpace) -> Vec<Scalar> {
        let face = space.faces.face(self.face(space));
        convex_combination(&space.polytope, &face.vertices, &mut self.rng)
    }

    /// Integer combination of quasilattice generators (coefficients in [−3, 3]) lifted through π,
    /// plus a rational element of 𝔫 in [−2, 2]; the A-part has float coefficients in [−2, 2] on
    /// the exact kernel basis.
    pub fn nc_element(&mut self, space: &ToricSpace) -> Result<NcElement> {
        let p = &space.polytope;
        let field = p.field();
        let mut q = vec![Scalar::zero(field); p.n()];
        for g in p.quasilattice().generators() {
            let m = Scalar::from_int(field, self.rng.random_range(-3..=3));
            for (qi, gi) in q.iter_mut().zip(g) {
                *qi = &*qi + &(&m * gi);
            }
        }
        let mut theta = linalg::solve_any(space.sequence.pi_matrix(), &q, field)?
            .ok_or_else(|| Error::Internal("π is not onto".into()))?;
        let kernel = space.sequence.kernel_basis();
        let mut imaginary = vec![0.0; p.d()];
        for k in kernel {
            let r = Scalar::from_rational(field, rational(self.rng.random_range(-16..=16), 8));
            let s = self.uniform(-2.0, 2.0);
            for j in 0..p.d() {
                theta[j] = &theta[j] + &(&r * &k[j]);
                imaginary[j] += s * k[j].to_f64();
            }
        }
        Ok(NcElement { turns: theta, imaginary })
    }

    /// An element of A = exp(i𝔫) alone.
    pub fn a_element(&mut self, space: &ToricSpace) -> NcElement {
        let mut g = NcElement::identity(space);
        for k in space.sequence.kernel_basis() {
            let s = self.uniform(-2.0, 2.0);
            for (a, kj) in g.imaginary.iter_mut().zip(k) {
                *a += s * kj.to_f64();
            }
        }
        g
    }
}

fn convex_combination(p: &Polytope, vertices: &[usize], rng: &mut ChaCha8Rng) -> Vec<Scalar> {
    let field = p.field();
    let weights: Vec<i64> = vertices.iter().map(|_| rng.random_range(1..=8)).collect();
    let total: i64 = weights.iter().sum();
    let mut out = vec![Scalar::zero(field); p.n()];
    for (&v, &w) in vertices.iter().zip(&weights) {
        let c = Scalar::from_rational(field, rational(w, total));
        for (o, x) in out.iter_mut().zip(&p.vertices()[v].coords) {
            *o = &*o + &(&c * x);
        }
    }
    out
}
