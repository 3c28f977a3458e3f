#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spatial_trees::{PayloadId, Point3, SplitStrategy, TreeConfig};

pub fn uniform(n: usize, seed: u64) -> Vec<Point3> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| Point3::new(rng.gen(), rng.gen(), rng.gen()))
        .collect()
}

pub fn id_pairs(pairs: &[spatial_trees::NeighborPair]) -> Vec<(PayloadId, PayloadId)> {
    let mut v: Vec<_> = pairs.iter().map(|p| p.ids()).collect();
    v.sort_unstable();
    v
}

/// Every family and strategy at the given depth, capacity and R-tree degree.
pub fn all_configs(depth: u32, capacity: usize, degree: usize) -> Vec<TreeConfig> {
    let mut out = vec![TreeConfig::octree(depth, capacity)];
    out.extend(
        SplitStrategy::ALL
            .iter()
            .map(|&s| TreeConfig::kdtree(s, depth, capacity)),
    );
    out.push(TreeConfig::rtree(degree));
    out
}
