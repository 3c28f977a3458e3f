//! Oracle-equivalence and structural audit suites.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use spatial_trees::oracle::brute_force_ids;
use spatial_trees::{self_search, Aabb, PayloadId, SplitStrategy, Tree, TreeConfig};

use crate::data::generate_uniform;
use crate::error::BenchError;
use crate::scenario::{build_tree, config_label};

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyMatrix {
    pub depths: Vec<u32>,
    pub capacities: Vec<usize>,
    pub rtree_degrees: Vec<usize>,
    pub radii: Vec<f64>,
    pub sizes: Vec<usize>,
    pub seeds: Vec<u64>,
}

impl Default for VerifyMatrix {
    fn default() -> Self {
        VerifyMatrix {
            depths: vec![1, 4, 32],
            capacities: vec![1, 8, 64],
            rtree_degrees: vec![3, 5, 25],
            radii: vec![0.001, 0.05, 0.3],
            sizes: vec![1, 2, 100, 2000],
            seeds: (0..10).collect(),
        }
    }
}

impl VerifyMatrix {
    /// Every family and split strategy over the depth × capacity (or degree) axes.
    pub fn configs(&self) -> Vec<TreeConfig> {
        let mut out = Vec::new();
        for &d in &self.depths {
            for &c in &self.capacities {
                out.push(TreeConfig::octree(d, c));
                out.extend(SplitStrategy::ALL.map(|s| TreeConfig::kdtree(s, d, c)));
            }
        }
        out.extend(self.rtree_degrees.iter().map(|&m| TreeConfig::rtree(m)));
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mismatch {
    pub label: String,
    pub n: usize,
    pub seed: u64,
    pub radius: f64,
    pub expected: usize,
    pub found: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerifyReport {
    /// Tree searches compared against the oracle.
    pub cases: usize,
    pub mismatches: Vec<Mismatch>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Runs `work(i)` for `i in 0..count` on up to `jobs` threads.
fn parallel_for<T: Send>(count: usize, jobs: usize, work: impl Fn(usize) -> T + Sync) -> Vec<T> {
    let next = AtomicUsize::new(0);
    let results = Mutex::new(Vec::with_capacity(count));
    std::thread::scope(|scope| {
        for _ in 0..jobs.clamp(1, count.max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= count {
                    break;
                }
                let out = work(i);
                results.lock().expect("worker panicked").push((i, out));
            });
        }
    });
    let mut results = results.into_inner().expect("worker panicked");
    results.sort_by_key(|(i, _)| *i);
    results.into_iter().map(|(_, t)| t).collect()
}

/// Compares every configuration's self-search with the brute-force oracle.
pub fn run_verify_matrix(matrix: &VerifyMatrix, jobs: usize) -> Result<VerifyReport, BenchError> {
    let configs = matrix.configs();
    let units: Vec<(u64, usize)> = matrix
        .seeds
        .iter()
        .flat_map(|&s| matrix.sizes.iter().map(move |&n| (s, n)))
        .collect();
    let partials = parallel_for(units.len(), jobs, |i| -> Result<VerifyReport, BenchError> {
        let (seed, n) = units[i];
        let points = generate_uniform(n, seed, &Aabb::unit());
        let trees = configs
            .iter()
            .map(|&c| build_tree(c, &points))
            .collect::<Result<Vec<Tree>, _>>()?;
        let mut report = VerifyReport::default();
        for &radius in &matrix.radii {
            let expected = brute_force_ids(&points, radius)?;
            for tree in &trees {
                let mut found: Vec<(PayloadId, PayloadId)> =
                    self_search(tree, radius)?.iter().map(|p| p.ids()).collect();
                found.sort_unstable();
                report.cases += 1;
                if found != expected {
                    report.mismatches.push(Mismatch {
                        label: config_label(tree.config()),
                        n,
                        seed,
                        radius,
                        expected: expected.len(),
                        found: found.len(),
                    });
                }
            }
        }
        Ok(report)
    });
    let mut total = VerifyReport::default();
    for part in partials {
        let part = part?;
        total.cases += part.cases;
        total.mismatches.extend(part.mismatches);
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StructuralFailure {
    pub label: String,
    pub message: String,
}

/// Builds each configuration from `n` uniform points and audits its structure.
pub fn run_structural_suite(
    configs: &[TreeConfig],
    n: usize,
    seed: u64,
    jobs: usize,
) -> Result<Vec<StructuralFailure>, BenchError> {
    let points = generate_uniform(n, seed, &Aabb::unit());
    let outcomes = parallel_for(
        configs.len(),
        jobs,
        |i| -> Result<Option<StructuralFailure>, BenchError> {
            let tree = build_tree(configs[i], &points)?;
            let stats = tree.stats();
            let failure = if stats.entry_count != n {
                Some(format!(
                    "{} entries stored, {n} inserted",
                    stats.entry_count
                ))
            } else {
                tree.check_invariants().err().map(|e| e.to_string())
            };
            Ok(failure.map(|message| StructuralFailure {
                label: config_label(&configs[i]),
                message,
            }))
        },
    );
    let mut failures = Vec::new();
    for outcome in outcomes {
        failures.extend(outcome?);
    }
    Ok(failures)
}
