//! One benchmark cell: build a tree from fresh uniform data, time the inserts
//! and the self-search, repeat, average.

use std::time::Instant;

use spatial_trees::oracle::brute_force_pairs;
use spatial_trees::{
    self_search, Aabb, Family, NeighborPair, PayloadId, Point3, SplitStrategy, Tree, TreeConfig,
};

use crate::data::generate_uniform;
use crate::error::BenchError;

pub const DEFAULT_RUNS: usize = 5;
pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_VERIFY_CAP: usize = 5000;

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub tree: TreeConfig,
    pub n: usize,
    pub radius: f64,
    pub runs: usize,
    pub seed: u64,
    pub verify: bool,
    /// Largest `n` that verify mode checks against the quadratic oracle.
    pub verify_cap: usize,
}

impl ScenarioSpec {
    pub fn new(tree: TreeConfig, n: usize, radius: f64) -> Self {
        ScenarioSpec {
            tree,
            n,
            radius,
            runs: DEFAULT_RUNS,
            seed: DEFAULT_SEED,
            verify: false,
            verify_cap: DEFAULT_VERIFY_CAP,
        }
    }

    #[must_use]
    pub fn runs(mut self, runs: usize) -> Self {
        self.runs = runs;
        self
    }

    #[must_use]
    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    #[must_use]
    pub fn verify(mut self, verify: bool) -> Self {
        self.verify = verify;
        self
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        if self.n < 1 {
            return Err(BenchError::InvalidSpec("n must be at least 1".into()));
        }
        if self.runs < 1 {
            return Err(BenchError::InvalidSpec("runs must be at least 1".into()));
        }
        if !self.radius.is_finite() || self.radius < 0.0 {
            return Err(BenchError::InvalidSpec(format!(
                "radius must be finite and non-negative, got {}",
                self.radius
            )));
        }
        self.tree.validate()?;
        Ok(())
    }

    /// Seed of run `run`; run 0 uses `seed` itself.
    pub fn run_seed(&self, run: usize) -> u64 {
        self.seed.wrapping_add(run as u64)
    }

    /// Row label in the style of the result tables, e.g. `k-d tree(100, 10) MMAS`.
    pub fn label(&self) -> String {
        config_label(&self.tree)
    }
}

pub fn config_label(tree: &TreeConfig) -> String {
    match tree.family {
        Family::Octree => format!("Octree({}, {})", tree.max_depth, tree.node_capacity),
        Family::KdTree => format!(
            "k-d tree({}, {}) {}",
            tree.max_depth,
            tree.node_capacity,
            tree.split.name().to_uppercase()
        ),
        Family::RTree => format!("R-tree({})", tree.degree),
    }
}

/// Timings of a cell that was run.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    /// Mean insert time over runs, milliseconds.
    pub insert_ms: f64,
    /// Mean search time over runs, milliseconds.
    pub search_ms: f64,
    /// Pairs found in run 0 (the data generated from `seed` itself).
    pub pair_count: usize,
    pub raw_insert_ms: Vec<f64>,
    pub raw_search_ms: Vec<f64>,
    pub raw_pair_counts: Vec<usize>,
}

impl Measurement {
    pub fn total_ms(&self) -> f64 {
        self.insert_ms + self.search_ms
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub spec: ScenarioSpec,
    /// `None` for cells deliberately left blank.
    pub measurement: Option<Measurement>,
}

impl BenchRecord {
    pub fn not_run(spec: ScenarioSpec) -> Self {
        BenchRecord {
            spec,
            measurement: None,
        }
    }
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn ms_since(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

pub fn build_tree(config: TreeConfig, points: &[Point3]) -> Result<Tree, BenchError> {
    let mut tree = Tree::new(config)?;
    tree.reserve(points.len());
    for (i, p) in points.iter().enumerate() {
        tree.insert(*p, PayloadId(i as u64))?;
    }
    Ok(tree)
}

fn sorted_ids(pairs: &[NeighborPair]) -> Vec<(PayloadId, PayloadId)> {
    let mut ids: Vec<_> = pairs.iter().map(NeighborPair::ids).collect();
    ids.sort_unstable();
    ids
}

fn check_against_oracle(
    spec: &ScenarioSpec,
    run: usize,
    points: &[Point3],
    pairs: &[NeighborPair],
) -> Result<(), BenchError> {
    let tagged: Vec<_> = points
        .iter()
        .enumerate()
        .map(|(i, p)| (*p, PayloadId(i as u64)))
        .collect();
    let expected = sorted_ids(&brute_force_pairs(&tagged, spec.radius)?);
    let found = sorted_ids(pairs);
    if expected != found {
        return Err(BenchError::OracleMismatch {
            label: spec.label(),
            run,
            expected: expected.len(),
            found: found.len(),
        });
    }
    Ok(())
}

/// Runs one cell. Each run gets fresh data from `seed + run`; only the insert
/// loop and the search call are inside the clock.
pub fn run_scenario(spec: &ScenarioSpec) -> Result<BenchRecord, BenchError> {
    spec.validate()?;
    let mut raw_insert_ms = Vec::with_capacity(spec.runs);
    let mut raw_search_ms = Vec::with_capacity(spec.runs);
    let mut raw_pair_counts = Vec::with_capacity(spec.runs);
    for run in 0..spec.runs {
        let points = generate_uniform(spec.n, spec.run_seed(run), &spec.tree.domain);

        let start = Instant::now();
        let tree = build_tree(spec.tree, &points)?;
        raw_insert_ms.push(ms_since(start));

        let start = Instant::now();
        let pairs = self_search(&tree, spec.radius)?;
        raw_search_ms.push(ms_since(start));
        raw_pair_counts.push(pairs.len());

        if spec.verify && spec.n <= spec.verify_cap {
            check_against_oracle(spec, run, &points, &pairs)?;
        }
    }
    Ok(BenchRecord {
        spec: spec.clone(),
        measurement: Some(Measurement {
            insert_ms: mean(&raw_insert_ms),
            search_ms: mean(&raw_search_ms),
            pair_count: raw_pair_counts[0],
            raw_insert_ms,
            raw_search_ms,
            raw_pair_counts,
        }),
    })
}

/// Neighbor pairs of run 0, sorted by `(a, b)`.
pub fn first_run_pairs(spec: &ScenarioSpec) -> Result<Vec<NeighborPair>, BenchError> {
    spec.validate()?;
    let points = generate_uniform(spec.n, spec.run_seed(0), &spec.tree.domain);
    let tree = build_tree(spec.tree, &points)?;
    let mut pairs = self_search(&tree, spec.radius)?;
    pairs.sort_unstable_by_key(|p| (p.a, p.b));
    Ok(pairs)
}

/// Tree configuration from the loose fields used on the command line and in grid files.
pub fn tree_config(
    family: Family,
    strategy: Option<SplitStrategy>,
    depth: Option<u32>,
    capacity: Option<usize>,
    degree: Option<usize>,
    domain: Aabb,
) -> Result<TreeConfig, BenchError> {
    let missing = |what: &str| BenchError::InvalidSpec(format!("{family} needs {what}"));
    let config = match family {
        Family::Octree => TreeConfig::octree(
            depth.ok_or_else(|| missing("a depth"))?,
            capacity.ok_or_else(|| missing("a capacity"))?,
        ),
        Family::KdTree => TreeConfig::kdtree(
            strategy.ok_or_else(|| missing("a split strategy"))?,
            depth.ok_or_else(|| missing("a depth"))?,
            capacity.ok_or_else(|| missing("a capacity"))?,
        ),
        Family::RTree => TreeConfig::rtree(degree.ok_or_else(|| missing("a degree"))?),
    };
    Ok(config.with_domain(domain))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verified_octree_cell() {
        let spec = ScenarioSpec::new(TreeConfig::octree(10, 10), 1000, 0.05)
            .runs(2)
            .verify(true);
        let rec = run_scenario(&spec).unwrap();
        let m = rec.measurement.unwrap();
        let points = generate_uniform(1000, spec.seed, &Aabb::unit());
        let oracle = spatial_trees::oracle::brute_force_ids(&points, 0.05).unwrap();
        assert_eq!(m.pair_count, oracle.len());
        assert!(m.pair_count > 0);
    }

    #[test]
    fn raw_times_and_means() {
        let spec = ScenarioSpec::new(TreeConfig::rtree(5), 300, 0.1);
        let m = run_scenario(&spec).unwrap().measurement.unwrap();
        assert_eq!(m.raw_insert_ms.len(), 5);
        assert_eq!(m.raw_search_ms.len(), 5);
        assert_eq!(m.insert_ms, mean(&m.raw_insert_ms));
        assert_eq!(m.search_ms, mean(&m.raw_search_ms));
    }

    #[test]
    fn repeatable_pair_count() {
        let spec =
            ScenarioSpec::new(TreeConfig::kdtree(SplitStrategy::Sahs, 20, 8), 2000, 0.04).runs(3);
        let a = run_scenario(&spec).unwrap().measurement.unwrap();
        let b = run_scenario(&spec).unwrap().measurement.unwrap();
        assert_eq!(a.raw_pair_counts, b.raw_pair_counts);
    }

    #[test]
    fn rejects_bad_specs() {
        let base = ScenarioSpec::new(TreeConfig::octree(4, 4), 10, 0.1);
        assert!(run_scenario(&ScenarioSpec {
            n: 0,
            ..base.clone()
        })
        .is_err());
        assert!(run_scenario(&base.clone().runs(0)).is_err());
        assert!(run_scenario(&ScenarioSpec {
            radius: -1.0,
            ..base.clone()
        })
        .is_err());
        let bad_tree = ScenarioSpec::new(TreeConfig::rtree(1), 10, 0.1);
        assert!(matches!(run_scenario(&bad_tree), Err(BenchError::Tree(_))));
    }

    #[test]
    fn labels() {
        assert_eq!(
            config_label(&TreeConfig::octree(10, 100)),
            "Octree(10, 100)"
        );
        assert_eq!(
            config_label(&TreeConfig::kdtree(SplitStrategy::Msas, 1000, 10)),
            "k-d tree(1000, 10) MSAS"
        );
        assert_eq!(config_label(&TreeConfig::rtree(25)), "R-tree(25)");
    }

    #[test]
    fn pairs_are_sorted() {
        let spec = ScenarioSpec::new(TreeConfig::octree(8, 4), 500, 0.1);
        let pairs = first_run_pairs(&spec).unwrap();
        assert!(pairs
            .windows(2)
            .all(|w| (w[0].a, w[0].b) < (w[1].a, w[1].b)));
    }
}
