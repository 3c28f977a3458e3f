use spatial_trees::TreeError;

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("oracle mismatch for {label} (run {run}): oracle found {expected} pairs, tree found {found}")]
    OracleMismatch {
        label: String,
        run: usize,
        expected: usize,
        found: usize,
    },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid scenario: {0}")]
    InvalidSpec(String),
    #[error("no records to report")]
    EmptyInput,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl BenchError {
    /// Process exit code: 1 for oracle mismatches, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::OracleMismatch { .. } => 1,
            _ => 2,
        }
    }
}
