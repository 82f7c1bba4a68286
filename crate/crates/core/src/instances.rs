//! Small standard polytopes used in tests, benchmarks and documentation.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::lattice::Quasilattice;
use crate::polytope::Polytope;
use crate::scalars::{NumberField, Scalar};

fn build(field: &Arc<NumberField>, n: usize, normals: &[&[i64]], offsets: &[i64], q: Option<Quasilattice>) -> Polytope {
    let i = |x: i64| Scalar::from_int(field, x);
    let normals = normals.iter().map(|r| r.iter().map(|&x| i(x)).collect()).collect();
    let offsets = offsets.iter().map(|&x| i(x)).collect();
    Polytope::new(field, n, normals, offsets, q).expect("standard instance is valid")
}

fn rational(n: usize, normals: &[&[i64]], offsets: &[i64]) -> Polytope {
    let f = NumberField::rationals();
    let q = Quasilattice::standard(&f, n);
    build(&f, n, normals, offsets, Some(q))
}

/// Q(√2) with root interval [1, 2].
pub fn sqrt2_field() -> Arc<NumberField> {
    let one = BigRational::from_integer(BigInt::from(1));
    let two = BigRational::from_integer(BigInt::from(2));
    NumberField::new(vec![BigInt::from(-2), BigInt::from(0), BigInt::from(1)], (one, two)).expect("x²−2 is irreducible")
}

/// [0, 1] with X = (1, −1), λ = (0, −1), Q = Z.
pub fn interval() -> Polytope {
    rational(1, &[&[1], &[-1]], &[0, -1])
}

/// [0, 1] with X = (1, −1) and the quasilattice Z + √2·Z.
pub fn interval_sqrt2() -> Polytope {
    let f = sqrt2_field();
    let q = Quasilattice::new(&f, 1, vec![vec![Scalar::one(&f)], vec![Scalar::generator(&f)]]).unwrap();
    build(&f, 1, &[&[1], &[-1]], &[0, -1], Some(q))
}

/// The unit square.
pub fn square() -> Polytope {
    rational(2, &[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]], &[0, 0, -1, -1])
}

/// The standard triangle (CP²).
pub fn triangle() -> Polytope {
    rational(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[0, 0, -1])
}

/// Triangle with normals (1,0), (0,1), (−1,−2); the vertex with chart {0, 2} has Γ of order 2.
pub fn weighted_triangle() -> Polytope {
    rational(2, &[&[1, 0], &[0, 1], &[-1, -2]], &[0, 0, -2])
}

/// The unit cube.
pub fn cube() -> Polytope {
    rational(
        3,
        &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[-1, 0, 0], &[0, -1, 0], &[0, 0, -1]],
        &[0, 0, 0, -1, -1, -1],
    )
}

/// conv{(±1, ±1, 0), (0, 0, 1)}: slanted facets 0–3, base facet 4.
pub fn pyramid() -> Polytope {
    rational(
        3,
        &[&[-1, 0, -1], &[1, 0, -1], &[0, -1, -1], &[0, 1, -1], &[0, 0, 1]],
        &[-1, -1, -1, -1, 0],
    )
}

/// The pyramid with facet 3 replaced by y − √2 z ≥ −√2, and Q = Z{e1, e2, e3, √2 e3}.
pub fn pyramid_sqrt2() -> Polytope {
    let f = sqrt2_field();
    let i = |x: i64| Scalar::from_int(&f, x);
    let r2 = Scalar::generator(&f);
    let normals = vec![
        vec![i(-1), i(0), i(-1)],
        vec![i(1), i(0), i(-1)],
        vec![i(0), i(-1), i(-1)],
        vec![i(0), i(1), -&r2],
        vec![i(0), i(0), i(1)],
    ];
    let offsets = vec![i(-1), i(-1), i(-1), -&r2, i(0)];
    let mut gens: Vec<Vec<Scalar>> = (0..3).map(|k| crate::linalg::unit(&f, 3, k)).collect();
    gens.push(vec![i(0), i(0), r2.clone()]);
    let q = Quasilattice::new(&f, 3, gens).unwrap();
    Polytope::new(&f, 3, normals, offsets, Some(q)).expect("valid")
}

/// The octahedron |x| + |y| + |z| ≤ 1; every vertex lies on four facets.
pub fn octahedron() -> Polytope {
    let mut normals: Vec<Vec<i64>> = Vec::new();
    for a in [1, -1] {
        for b in [1, -1] {
            for c in [1, -1] {
                normals.push(vec![a, b, c]);
            }
        }
    }
    let refs: Vec<&[i64]> = normals.iter().map(|v| v.as_slice()).collect();
    rational(3, &refs, &[-1; 8])
}

/// Pyramid in R⁴ over the square pyramid (at w = 0) with apex (0, 0, 1/3, 1).
/// Facets 0–3 are over the slanted facets, 4 over the base, 5 is the bottom w ≥ 0.
pub fn pyramid_over_pyramid() -> Polytope {
    rational(
        4,
        &[
            &[-3, 0, -3, -2],
            &[3, 0, -3, -2],
            &[0, -3, -3, -2],
            &[0, 3, -3, -2],
            &[0, 0, 3, -1],
            &[0, 0, 0, 1],
        ],
        &[-3, -3, -3, -3, 0, 0],
    )
}

/// Names accepted by [`by_name`].
pub const NAMES: &[&str] = &[
    "interval",
    "interval_sqrt2",
    "square",
    "triangle",
    "weighted_triangle",
    "cube",
    "pyramid",
    "pyramid_sqrt2",
    "octahedron",
    "pyramid_over_pyramid",
];

pub fn by_name(name: &str) -> Option<Polytope> {
    Some(match name {
        "interval" => interval(),
        "interval_sqrt2" => interval_sqrt2(),
        "square" => square(),
        "triangle" => triangle(),
        "weighted_triangle" => weighted_triangle(),
        "cube" => cube(),
        "pyramid" => pyramid(),
        "pyramid_sqrt2" => pyramid_sqrt2(),
        "octahedron" => octahedron(),
        "pyramid_over_pyramid" => pyramid_over_pyramid(),
        _ => return None,
    })
}
