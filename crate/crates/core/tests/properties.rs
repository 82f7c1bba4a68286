use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use proptest::prelude::*;

use toricq_core::instances;
use toricq_core::io;
use toricq_core::lattice::intmat::{det, hnf, hnf_contains, smith_invariants};
use toricq_core::polytope::{enumerate_faces, FacetSet, Polytope};
use toricq_core::verify::{
    check_closed_orbit, check_equivalence_triple, check_retraction_orbit, p_relative_change, Sampler, P_TOLERANCE,
};
use toricq_core::{NumberField, Scalar, ToricSpace};

fn rational() -> impl Strategy<Value = BigRational> {
    (-20i64..20, 1i64..9).prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

/// a + b√2 with small rational a, b.
fn scalar() -> impl Strategy<Value = Scalar> {
    (rational(), rational()).prop_map(|(a, b)| Scalar::from_coeffs(&instances::sqrt2_field(), vec![a, b]).unwrap())
}

fn int_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<BigInt>>> {
    prop::collection::vec(prop::collection::vec((-6i64..6).prop_map(BigInt::from), cols), rows)
}

proptest! {
    #[test]
    fn facet_set_operations_match_bit_operations(a in 0u64..1 << 12, b in 0u64..1 << 12) {
        let (x, y) = (FacetSet(a), FacetSet(b));
        prop_assert_eq!(x.union(y).0, a | b);
        prop_assert_eq!(x.intersection(y).0, a & b);
        prop_assert_eq!(x.difference(y).0, a & !b);
        prop_assert_eq!(x.is_subset(y), a & !b == 0);
        prop_assert_eq!(x.len(), a.count_ones() as usize);
        prop_assert_eq!(FacetSet::from_indices(x.indices()), x);
    }

    #[test]
    fn scalar_arithmetic_is_a_field(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn scalar_sign_agrees_with_float_value(a in scalar()) {
        let v = a.to_f64();
        let s = a.sign().unwrap();
        if v.abs() > 1e-9 {
            prop_assert_eq!(s, if v > 0.0 { 1 } else { -1 });
        }
        prop_assert_eq!(s == 0, a.is_zero());
        prop_assert_eq!(a.abs().unwrap().sign().unwrap() >= 0, true);
    }

    #[test]
    fn scalar_serialization_round_trips(a in scalar()) {
        let f = a.field().clone();
        prop_assert_eq!(io::scalar_from_json(&f, &io::scalar_json(&a)).unwrap(), a.clone());
        prop_assert_eq!(Scalar::from_strings(&f, &a.to_strings()).unwrap(), a);
    }

    #[test]
    fn hermite_form_is_idempotent_and_spans(m in int_matrix(3, 4)) {
        let h = hnf(&m);
        prop_assert_eq!(hnf(&h), h.clone());
        for row in &m {
            prop_assert!(hnf_contains(&h, row));
        }
        for row in &h {
            let first = row.iter().find(|x| **x != BigInt::from(0));
            prop_assert!(first.is_some_and(|x| x.is_positive()));
        }
    }

    #[test]
    fn smith_invariants_multiply_to_the_determinant(m in int_matrix(3, 3)) {
        let (factors, rank) = smith_invariants(&m);
        let d = det(&m).abs();
        if d != BigInt::from(0) {
            prop_assert_eq!(rank, 3);
            prop_assert_eq!(factors.iter().product::<BigInt>(), d);
            for w in factors.windows(2) {
                prop_assert_eq!(&w[1] % &w[0], BigInt::from(0));
            }
        } else {
            prop_assert!(rank < 3);
        }
    }

    #[test]
    fn box_polytopes_round_trip_through_json(lo in prop::collection::vec(-5i64..5, 2), len in prop::collection::vec(1i64..5, 2)) {
        let f = NumberField::rationals();
        let i = |x: i64| Scalar::from_int(&f, x);
        let normals = vec![vec![i(1), i(0)], vec![i(0), i(1)], vec![i(-1), i(0)], vec![i(0), i(-1)]];
        let offsets = vec![i(lo[0]), i(lo[1]), i(-lo[0] - len[0]), i(-lo[1] - len[1])];
        let p = Polytope::new(&f, 2, normals, offsets, None).unwrap();
        let text = serde_json::to_string(&io::polytope_json(&p)).unwrap();
        let back = io::polytope_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert_eq!(back.normals(), p.normals());
        prop_assert_eq!(back.offsets(), p.offsets());
        prop_assert_eq!(back.vertices().len(), 4);
        let faces = enumerate_faces(&back).unwrap();
        prop_assert_eq!(faces.faces().len(), 9);
        prop_assert_eq!(faces.singular_faces().count(), 0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn retraction_is_independent_of_start_and_translate(seed in any::<u64>()) {
        for p in [instances::pyramid(), instances::pyramid_sqrt2()] {
            let space = ToricSpace::with_defaults(p).unwrap();
            let outcome = check_retraction_orbit(&space, &mut Sampler::new(seed), 2, 4).unwrap();
            prop_assert!(outcome.is_ok(), "{:?}", outcome);
        }
    }

    #[test]
    fn p_function_is_nc_invariant(seed in any::<u64>()) {
        let space = ToricSpace::with_defaults(instances::octahedron()).unwrap();
        let mut s = Sampler::new(seed);
        let xi = s.polytope_point(&space);
        let eta = s.polytope_point(&space);
        let w = s.point_with_zeros(&space, FacetSet::default());
        for _ in 0..10 {
            let g = s.nc_element(&space).unwrap();
            let change = p_relative_change(&space, &xi, &eta, &w, &g).unwrap().unwrap();
            prop_assert!(change <= P_TOLERANCE, "{change:e}");
        }
    }

    #[test]
    fn orbit_classification_and_equivalence_hold(seed in any::<u64>()) {
        let space = ToricSpace::with_defaults(instances::pyramid_sqrt2()).unwrap();
        let mut s = Sampler::new(seed);
        let z = s.domain_point(&space);
        let closed = check_closed_orbit(&space, &z).unwrap();
        prop_assert!(closed.is_ok(), "{:?}", closed);
        let triple = check_equivalence_triple(&space, &mut s).unwrap();
        prop_assert!(triple.is_ok(), "{:?}", triple);
    }
}
