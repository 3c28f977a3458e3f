use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use spatial_trees::{Aabb, Family, SplitStrategy};
use tree_bench::grid::{self, PaperGridOptions};
use tree_bench::report::{self, Format};
use tree_bench::scenario::{self, ScenarioSpec, DEFAULT_RUNS, DEFAULT_SEED, DEFAULT_VERIFY_CAP};
use tree_bench::verify::{self, VerifyMatrix};
use tree_bench::BenchError;

#[derive(Parser)]
#[command(
    name = "bench",
    about = "Spatial tree insertion and pair-search benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum TreeArg {
    Octree,
    Kdtree,
    Rtree,
}

#[derive(Clone, Copy, ValueEnum)]
enum SplitArg {
    Mmas,
    Msas,
    Cs,
    Sahs,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Markdown,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Markdown => Format::Markdown,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Time one configuration.
    Run {
        #[arg(long)]
        tree: TreeArg,
        #[arg(long)]
        split: Option<SplitArg>,
        #[arg(long, default_value_t = 10)]
        depth: u32,
        #[arg(long, default_value_t = 10)]
        capacity: usize,
        #[arg(long, default_value_t = 25)]
        degree: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        radius: f64,
        #[arg(long, default_value_t = DEFAULT_RUNS)]
        runs: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Check every run against the brute-force oracle (only when n <= --verify-cap).
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = DEFAULT_VERIFY_CAP)]
        verify_cap: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the sorted neighbor pairs of run 0 to this CSV file.
        #[arg(long)]
        pairs: Option<PathBuf>,
    },
    /// Run a grid of configurations, streaming CSV rows as cells finish.
    Grid {
        /// Use the built-in grid of the result tables (default when --grid is absent).
        #[arg(long)]
        paper: bool,
        /// Include 10^6 points and run the CS, SAHS and R-tree cells at every size.
        #[arg(long)]
        full: bool,
        /// Point counts for the built-in grid, overriding the default sizes.
        #[arg(long, value_delimiter = ',')]
        n: Option<Vec<usize>>,
        #[arg(long, default_value_t = DEFAULT_RUNS)]
        runs: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// CSV grid file with scenario columns.
        #[arg(long, conflicts_with_all = ["paper", "full", "n"])]
        grid: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Oracle-equivalence matrix plus structural audits.
    VerifySuite {
        /// Worker threads; cells are independent and untimed.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Points per structural-audit build.
        #[arg(long, default_value_t = 10_000)]
        audit_n: usize,
    },
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, BenchError> {
    Ok(match path {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn run(cli: Cli) -> Result<(), BenchError> {
    match cli.command {
        Command::Run {
            tree,
            split,
            depth,
            capacity,
            degree,
            n,
            radius,
            runs,
            seed,
            verify,
            verify_cap,
            format,
            out,
            pairs,
        } => {
            let family = match tree {
                TreeArg::Octree => Family::Octree,
                TreeArg::Kdtree => Family::KdTree,
                TreeArg::Rtree => Family::RTree,
            };
            let strategy = match (family, split) {
                (Family::KdTree, None) => Some(SplitStrategy::Mmas),
                (_, s) => s.map(|s| match s {
                    SplitArg::Mmas => SplitStrategy::Mmas,
                    SplitArg::Msas => SplitStrategy::Msas,
                    SplitArg::Cs => SplitStrategy::Cs,
                    SplitArg::Sahs => SplitStrategy::Sahs,
                }),
            };
            let config = scenario::tree_config(
                family,
                strategy,
                Some(depth),
                Some(capacity),
                Some(degree),
                Aabb::unit(),
            )?;
            let spec = ScenarioSpec {
                verify,
                verify_cap,
                ..ScenarioSpec::new(config, n, radius).runs(runs).seed(seed)
            };
            let record = scenario::run_scenario(&spec)?;
            output(&out)?.write_all(report::emit_report(&[record], format.into())?.as_bytes())?;
            if let Some(path) = pairs {
                let mut w = csv::Writer::from_path(path)?;
                w.write_record(["a", "b", "dist"])?;
                for p in scenario::first_run_pairs(&spec)? {
                    w.write_record([p.a.to_string(), p.b.to_string(), p.dist.to_string()])?;
                }
                w.flush()?;
            }
        }
        Command::Grid {
            paper: _,
            full,
            n,
            runs,
            seed,
            grid,
            format,
            out,
        } => {
            let cells = match grid {
                Some(path) => grid::parse_grid(&std::fs::read_to_string(path)?)?,
                None => {
                    let mut opts = PaperGridOptions::new(full);
                    if let Some(sizes) = n {
                        opts.sizes = sizes;
                    }
                    opts.runs = runs;
                    opts.seed = seed;
                    grid::paper_grid(&opts)
                }
            };
            match Format::from(format) {
                Format::Csv => {
                    let mut w = report::csv_writer(output(&out)?)?;
                    grid::run_grid(&cells, |rec| report::write_csv_row(&mut w, rec))?;
                }
                Format::Markdown => {
                    let records = grid::run_grid(&cells, |rec| {
                        eprintln!(
                            "done: {} n={} r={}",
                            rec.spec.label(),
                            rec.spec.n,
                            rec.spec.radius
                        );
                        Ok(())
                    })?;
                    output(&out)?.write_all(report::to_markdown(&records)?.as_bytes())?;
                }
            }
        }
        Command::VerifySuite { jobs, audit_n } => {
            let matrix = VerifyMatrix::default();
            let report = verify::run_verify_matrix(&matrix, jobs)?;
            for m in &report.mismatches {
                println!(
                    "MISMATCH {} n={} seed={} r={}: oracle {} pairs, tree {}",
                    m.label, m.n, m.seed, m.radius, m.expected, m.found
                );
            }
            println!(
                "oracle equivalence: {} cases, {} mismatches",
                report.cases,
                report.mismatches.len()
            );
            let failures = verify::run_structural_suite(&matrix.configs(), audit_n, 0, jobs)?;
            for f in &failures {
                println!("AUDIT FAILED {}: {}", f.label, f.message);
            }
            println!(
                "structural audits: {} configurations, {} failures",
                matrix.configs().len(),
                failures.len()
            );
            if let Some(m) = report.mismatches.first() {
                return Err(BenchError::OracleMismatch {
                    label: m.label.clone(),
                    run: 0,
                    expected: m.expected,
                    found: m.found,
                });
            }
            if !failures.is_empty() {
                return Err(BenchError::InvalidSpec("structural audit failed".into()));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
