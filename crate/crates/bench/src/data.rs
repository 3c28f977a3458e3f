//! Seeded uniform point clouds.
//!
//! Points come from ChaCha8 (`rand_chacha::ChaCha8Rng::seed_from_u64(seed)`),
//! drawing x, y, z in that order per point as `min + u·(max − min)` with
//! `u` uniform in `[0, 1)`. The stream is fixed by the algorithm, so the
//! same `(n, seed, domain)` gives bit-identical points on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spatial_trees::{Aabb, Point3};

pub fn generate_uniform(n: usize, seed: u64, domain: &Aabb) -> Vec<Point3> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lerp = |lo: f64, hi: f64, u: f64| lo + u * (hi - lo);
    (0..n)
        .map(|_| {
            let (u, v, w): (f64, f64, f64) = (rng.gen(), rng.gen(), rng.gen());
            Point3::new(
                lerp(domain.min.x, domain.max.x, u),
                lerp(domain.min.y, domain.max.y, v),
                lerp(domain.min.z, domain.max.z, w),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_and_deterministic() {
        assert!(generate_uniform(0, 1, &Aabb::unit()).is_empty());
        let a = generate_uniform(500, 77, &Aabb::unit());
        let b = generate_uniform(500, 77, &Aabb::unit());
        let bits = |v: &[Point3]| {
            v.iter()
                .map(|p| [p.x.to_bits(), p.y.to_bits(), p.z.to_bits()])
                .collect::<Vec<_>>()
        };
        assert_eq!(bits(&a), bits(&b));
        assert_ne!(bits(&a), bits(&generate_uniform(500, 78, &Aabb::unit())));
    }

    #[test]
    fn respects_domain() {
        let domain = Aabb::new(Point3::new(-2.0, 10.0, 0.0), Point3::new(-1.0, 30.0, 0.5));
        assert!(generate_uniform(2000, 3, &domain)
            .iter()
            .all(|p| domain.contains(p)));
    }

    #[test]
    fn uniform_moments_and_octants() {
        let n = 100_000;
        let pts = generate_uniform(n, 2024, &Aabb::unit());
        for axis in spatial_trees::Axis::ALL {
            let mean = pts.iter().map(|p| p.coord(axis)).sum::<f64>() / n as f64;
            assert!((mean - 0.5).abs() < 0.005, "{axis:?} mean {mean}");
        }
        // octant counts are Binomial(n, 1/8): sd = sqrt(n · 1/8 · 7/8) ≈ 104.6
        let sd = (n as f64 * 0.125 * 0.875).sqrt();
        let mut counts = [0usize; 8];
        for p in &pts {
            counts[spatial_trees::octree::child_index(&Aabb::unit(), p).unwrap()] += 1;
        }
        for c in counts {
            assert!((c as f64 - n as f64 / 8.0).abs() < 4.0 * sd, "{counts:?}");
        }
    }
}
