//! Benchmark grids: the built-in table layout and user-supplied grid files.

use serde::Deserialize;
use spatial_trees::{Aabb, Family, SplitStrategy, TreeConfig};

use crate::error::BenchError;
use crate::scenario::{
    run_scenario, tree_config, BenchRecord, ScenarioSpec, DEFAULT_RUNS, DEFAULT_SEED,
    DEFAULT_VERIFY_CAP,
};

pub const PAPER_DEPTHS: [u32; 3] = [10, 100, 1000];
pub const PAPER_CAPACITIES: [usize; 3] = [10, 100, 1000];
pub const PAPER_CS_SAHS_CAPACITIES: [usize; 2] = [100, 1000];
pub const PAPER_RTREE_DEGREES: [usize; 3] = [5, 25, 125];
pub const PAPER_SIZES: [usize; 3] = [10_000, 100_000, 1_000_000];
pub const PAPER_RADII: [f64; 2] = [0.001, 0.00001];
/// Largest `n` of the default grid.
pub const DEFAULT_MAX_N: usize = 100_000;
/// CS, SAHS and R-tree rows are only filled up to this size unless asked otherwise.
pub const SPARSE_ROW_MAX_N: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct GridCell {
    pub spec: ScenarioSpec,
    pub run: bool,
}

/// The tree rows of the result tables, in table order.
pub fn paper_tree_rows() -> Vec<TreeConfig> {
    let mut rows = Vec::new();
    let dense =
        |rows: &mut Vec<TreeConfig>, make: &dyn Fn(u32, usize) -> TreeConfig, caps: &[usize]| {
            for &c in caps {
                for d in PAPER_DEPTHS {
                    rows.push(make(d, c));
                }
            }
        };
    dense(&mut rows, &TreeConfig::octree, &PAPER_CAPACITIES);
    for (strategy, caps) in [
        (SplitStrategy::Mmas, &PAPER_CAPACITIES[..]),
        (SplitStrategy::Msas, &PAPER_CAPACITIES[..]),
        (SplitStrategy::Cs, &PAPER_CS_SAHS_CAPACITIES[..]),
        (SplitStrategy::Sahs, &PAPER_CS_SAHS_CAPACITIES[..]),
    ] {
        dense(&mut rows, &|d, c| TreeConfig::kdtree(strategy, d, c), caps);
    }
    rows.extend(PAPER_RTREE_DEGREES.map(TreeConfig::rtree));
    rows
}

fn is_sparse_row(tree: &TreeConfig) -> bool {
    match tree.family {
        Family::RTree => true,
        Family::KdTree => matches!(tree.split, SplitStrategy::Cs | SplitStrategy::Sahs),
        Family::Octree => false,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PaperGridOptions {
    pub sizes: Vec<usize>,
    pub radii: Vec<f64>,
    /// Run the CS, SAHS and R-tree cells beyond 10⁴ points as well.
    pub fill_blanks: bool,
    pub runs: usize,
    pub seed: u64,
}

impl PaperGridOptions {
    /// `full` lifts the size cap to 10⁶ and fills the blank cells.
    pub fn new(full: bool) -> Self {
        PaperGridOptions {
            sizes: PAPER_SIZES
                .into_iter()
                .filter(|&n| full || n <= DEFAULT_MAX_N)
                .collect(),
            radii: PAPER_RADII.to_vec(),
            fill_blanks: full,
            runs: DEFAULT_RUNS,
            seed: DEFAULT_SEED,
        }
    }
}

/// Cells ordered by size, then radius, then table row.
pub fn paper_grid(opts: &PaperGridOptions) -> Vec<GridCell> {
    let rows = paper_tree_rows();
    let mut cells = Vec::new();
    for &n in &opts.sizes {
        for &radius in &opts.radii {
            for tree in &rows {
                let spec = ScenarioSpec::new(*tree, n, radius)
                    .runs(opts.runs)
                    .seed(opts.seed);
                let run = opts.fill_blanks || !is_sparse_row(tree) || n <= SPARSE_ROW_MAX_N;
                cells.push(GridCell { spec, run });
            }
        }
    }
    cells
}

#[derive(Debug, Deserialize)]
struct GridFileRow {
    family: String,
    #[serde(default)]
    strategy: Option<String>,
    #[serde(default)]
    depth: Option<u32>,
    #[serde(default)]
    capacity: Option<usize>,
    #[serde(default)]
    degree: Option<usize>,
    n: usize,
    radius: f64,
    #[serde(default)]
    runs: Option<usize>,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    verify: Option<bool>,
}

/// Parses a grid file: CSV whose columns are named after the scenario fields
/// (`family,strategy,depth,capacity,degree,n,radius,runs,seed,verify`).
/// Only `family`, `n`, `radius` and the family's own parameters are required.
pub fn parse_grid(text: &str) -> Result<Vec<GridCell>, BenchError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut cells = Vec::new();
    for (line, row) in reader.deserialize::<GridFileRow>().enumerate() {
        let at = |msg: String| BenchError::InvalidGrid(format!("row {}: {msg}", line + 1));
        let row = row.map_err(|e| at(e.to_string()))?;
        let family: Family = row.family.parse().map_err(at)?;
        let strategy = match row.strategy.as_deref().filter(|s| !s.is_empty()) {
            Some(s) => Some(s.parse::<SplitStrategy>().map_err(at)?),
            None => None,
        };
        let tree = tree_config(
            family,
            strategy,
            row.depth,
            row.capacity,
            row.degree,
            Aabb::unit(),
        )
        .map_err(|e| at(e.to_string()))?;
        let spec = ScenarioSpec {
            tree,
            n: row.n,
            radius: row.radius,
            runs: row.runs.unwrap_or(DEFAULT_RUNS),
            seed: row.seed.unwrap_or(DEFAULT_SEED),
            verify: row.verify.unwrap_or(false),
            verify_cap: DEFAULT_VERIFY_CAP,
        };
        spec.validate().map_err(|e| at(e.to_string()))?;
        cells.push(GridCell { spec, run: true });
    }
    if cells.is_empty() {
        return Err(BenchError::InvalidGrid("grid has no rows".into()));
    }
    Ok(cells)
}

/// Runs cells in order, handing each finished record to `sink` before starting
/// the next one.
pub fn run_grid<F>(cells: &[GridCell], mut sink: F) -> Result<Vec<BenchRecord>, BenchError>
where
    F: FnMut(&BenchRecord) -> Result<(), BenchError>,
{
    let mut records = Vec::with_capacity(cells.len());
    for cell in cells {
        let record = if cell.run {
            run_scenario(&cell.spec)?
        } else {
            BenchRecord::not_run(cell.spec.clone())
        };
        sink(&record)?;
        records.push(record);
    }
    Ok(records)
}
