//! Fixtures shared by the benchmarks.

use toricq_core::instances;
use toricq_core::orbit::OrbitPoint;
use toricq_core::verify::Sampler;
use toricq_core::ToricSpace;

/// Instances used across benchmarks, smallest first.
pub const BENCH_INSTANCES: &[&str] = &["triangle", "cube", "pyramid", "pyramid_sqrt2", "octahedron", "pyramid_over_pyramid"];

pub fn space(name: &str) -> ToricSpace {
    let p = instances::by_name(name).unwrap_or_else(|| panic!("unknown instance {name}"));
    ToricSpace::with_defaults(p).expect("built-in instances are valid")
}

/// Seeded points of C^d_Δ with closed orbits.
pub fn closed_points(space: &ToricSpace, count: usize, seed: u64) -> Vec<OrbitPoint> {
    let mut s = Sampler::new(seed);
    (0..count).map(|_| s.closed_point(space)).collect()
}

/// Seeded points of C^d_Δ with arbitrary zero sets.
pub fn domain_points(space: &ToricSpace, count: usize, seed: u64) -> Vec<OrbitPoint> {
    let mut s = Sampler::new(seed);
    (0..count).map(|_| s.domain_point(space)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_reproducible() {
        for name in BENCH_INSTANCES {
            let sp = space(name);
            let a = closed_points(&sp, 4, 1);
            let b = closed_points(&sp, 4, 1);
            assert_eq!(a.iter().map(|p| p.z.clone()).collect::<Vec<_>>(), b.iter().map(|p| p.z.clone()).collect::<Vec<_>>());
            assert_eq!(domain_points(&sp, 3, 2).len(), 3);
        }
    }
}
