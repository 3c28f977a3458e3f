use crate::geometry::Point3;
use crate::tree::PayloadId;

/// Errors raised by tree construction and search.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TreeError {
    #[error("point {0} lies outside the tree domain")]
    PointOutsideDomain(Point3),
    #[error("point {0} lies outside the node bound")]
    PointOutsideNode(Point3),
    #[error("point {0} has a non-finite coordinate")]
    NonFinitePoint(Point3),
    #[error("payload id {0} is already stored in this tree")]
    DuplicateId(PayloadId),
    #[error("search radius must be a non-negative number, got {0}")]
    NegativeRadius(f64),
    #[error("node has no depth budget left to split")]
    DepthExhausted,
    #[error("split strategy needs a non-empty leaf")]
    EmptyLeaf,
    #[error("split strategy needs at least {needed} entries, leaf has {found}")]
    TooFewEntries { needed: usize, found: usize },
    #[error("invalid tree configuration: {0}")]
    InvalidConfig(String),
}
