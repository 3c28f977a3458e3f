//! Benchmark harness for the spatial trees: seeded data, timed cells, grids,
//! reports and the oracle-equivalence suite behind the `bench` binary.

pub mod data;
pub mod error;
pub mod grid;
pub mod report;
pub mod scenario;
pub mod verify;

pub use data::generate_uniform;
pub use error::BenchError;
pub use grid::{paper_grid, parse_grid, run_grid, GridCell, PaperGridOptions};
pub use report::{emit_report, parse_csv, CsvRow, Format};
pub use scenario::{run_scenario, BenchRecord, Measurement, ScenarioSpec};
pub use verify::{run_structural_suite, run_verify_matrix, VerifyMatrix, VerifyReport};
