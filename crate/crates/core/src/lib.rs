//! Spatial trees for broad-phase neighbor detection.
//!
//! Three families share one node model ([`tree::Tree`]): octrees, k-d trees
//! with four plane-selection strategies, and R-trees. Any of them can be
//! searched for all point pairs within a fixed radius by the dual-tree
//! traversal in [`search`], and checked against the exhaustive
//! [`oracle`].
//!
//! ```
//! use spatial_trees::{Point3, Tree, TreeConfig, SplitStrategy};
//!
//! let points = [
//!     Point3::new(0.10, 0.10, 0.10),
//!     Point3::new(0.12, 0.10, 0.10),
//!     Point3::new(0.90, 0.90, 0.90),
//! ];
//! let tree = Tree::from_points(TreeConfig::kdtree(SplitStrategy::Mmas, 32, 1), &points).unwrap();
//! let pairs = tree.neighbor_pairs(0.05).unwrap();
//! assert_eq!(pairs.len(), 1);
//! ```

pub mod error;
pub mod geometry;
pub mod invariants;
pub mod kdtree;
pub mod octree;
pub mod oracle;
pub mod rtree;
pub mod search;
pub mod tree;

pub use error::TreeError;
pub use geometry::{distance, min_distance_boxes, Aabb, Axis, Point3};
pub use invariants::InvariantViolation;
pub use kdtree::{SplitPlane, SplitStrategy};
pub use rtree::RTreeParams;
pub use search::{
    dual_tree_search, dual_tree_search_with, self_search, self_search_count, self_search_with,
    NeighborPair, SearchStats,
};
pub use tree::{
    Children, Entry, Family, Node, NodeId, NodeKind, PayloadId, Tree, TreeConfig, TreeStats,
};
