//! The node model shared by every tree family, and insertion.
//!
//! Nodes live in an arena owned by [`Tree`] and refer to each other by
//! [`NodeId`]. A node is either a leaf holding entries or an internal node
//! holding children; both carry a bounding box. Search only ever looks at
//! that common shape, so it works for every family unchanged.

use rustc_hash::FxHashSet;
use std::fmt;

use crate::error::TreeError;
use crate::geometry::{Aabb, Point3};
use crate::kdtree::{self, SplitPlane, SplitStrategy};
use crate::{octree, rtree};

/// Opaque identifier of a stored object.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PayloadId(pub u64);

impl fmt::Display for PayloadId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A stored point and the object it stands for.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Entry {
    pub point: Point3,
    pub id: PayloadId,
}

impl Entry {
    pub fn new(point: Point3, id: PayloadId) -> Self {
        Entry { point, id }
    }
}

/// Index of a node in its tree's arena.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub(crate) u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Child handles of an internal node, stored inline up to eight.
pub type Children = smallvec::SmallVec<[NodeId; 8]>;

#[derive(Debug, Clone)]
pub enum NodeKind {
    Leaf(Vec<Entry>),
    Internal {
        children: Children,
        /// Cutting plane for k-d nodes; `None` for octree and R-tree nodes.
        plane: Option<SplitPlane>,
    },
}

#[derive(Debug, Clone)]
pub struct Node {
    pub(crate) bound: Aabb,
    pub(crate) remaining_depth: u32,
    pub(crate) kind: NodeKind,
}

impl Node {
    pub(crate) fn leaf(bound: Aabb, remaining_depth: u32, entries: Vec<Entry>) -> Self {
        Node {
            bound,
            remaining_depth,
            kind: NodeKind::Leaf(entries),
        }
    }

    pub fn bound(&self) -> &Aabb {
        &self.bound
    }

    pub fn remaining_depth(&self) -> u32 {
        self.remaining_depth
    }

    pub fn kind(&self) -> &NodeKind {
        &self.kind
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self.kind, NodeKind::Leaf(_))
    }

    /// Entries of a leaf; empty for internal nodes.
    pub fn entries(&self) -> &[Entry] {
        match &self.kind {
            NodeKind::Leaf(entries) => entries,
            NodeKind::Internal { .. } => &[],
        }
    }

    /// Children of an internal node; empty for leaves.
    pub fn children(&self) -> &[NodeId] {
        match &self.kind {
            NodeKind::Leaf(_) => &[],
            NodeKind::Internal { children, .. } => children,
        }
    }

    pub fn plane(&self) -> Option<SplitPlane> {
        match &self.kind {
            NodeKind::Internal { plane, .. } => *plane,
            NodeKind::Leaf(_) => None,
        }
    }
}

/// Bound and entries of a child produced by a split, before it enters the arena.
#[derive(Debug, Clone, PartialEq)]
pub struct ChildPart {
    pub bound: Aabb,
    pub entries: Vec<Entry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Octree,
    KdTree,
    RTree,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Octree => "octree",
            Family::KdTree => "kdtree",
            Family::RTree => "rtree",
        }
    }

    pub fn is_decomposition(self) -> bool {
        !matches!(self, Family::RTree)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "octree" => Ok(Family::Octree),
            "kdtree" | "kd" | "k-d" => Ok(Family::KdTree),
            "rtree" | "r-tree" => Ok(Family::RTree),
            other => Err(format!("unknown tree family `{other}`")),
        }
    }
}

/// Tree family plus the parameters each family honors.
///
/// `max_depth` and `node_capacity` apply to the octree and k-d tree,
/// `split` to the k-d tree only, `degree` and `min_fill` to the R-tree only.
/// `domain` is the root bound of decomposition trees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeConfig {
    pub family: Family,
    pub max_depth: u32,
    pub node_capacity: usize,
    pub split: SplitStrategy,
    pub degree: usize,
    /// Minimum R-tree node fill; `None` means 40% of `degree`, rounded up.
    pub min_fill: Option<usize>,
    pub domain: Aabb,
}

impl TreeConfig {
    pub fn octree(max_depth: u32, node_capacity: usize) -> Self {
        TreeConfig {
            family: Family::Octree,
            max_depth,
            node_capacity,
            ..Self::default()
        }
    }

    pub fn kdtree(split: SplitStrategy, max_depth: u32, node_capacity: usize) -> Self {
        TreeConfig {
            family: Family::KdTree,
            max_depth,
            node_capacity,
            split,
            ..Self::default()
        }
    }

    pub fn rtree(degree: usize) -> Self {
        TreeConfig {
            family: Family::RTree,
            degree,
            ..Self::default()
        }
    }

    #[must_use]
    pub fn with_domain(mut self, domain: Aabb) -> Self {
        self.domain = domain;
        self
    }

    pub fn validate(&self) -> Result<(), TreeError> {
        let bad = |msg: String| Err(TreeError::InvalidConfig(msg));
        match self.family {
            Family::Octree | Family::KdTree => {
                if self.node_capacity < 1 {
                    return bad("node capacity must be at least 1".into());
                }
                if !(self.domain.min.is_finite() && self.domain.max.is_finite()) {
                    return bad(format!("domain {} is not finite", self.domain));
                }
            }
            Family::RTree => {
                rtree::RTreeParams::from_config(self)?;
            }
        }
        Ok(())
    }
}

impl Default for TreeConfig {
    fn default() -> Self {
        TreeConfig {
            family: Family::Octree,
            max_depth: 10,
            node_capacity: 10,
            split: SplitStrategy::Mmas,
            degree: 25,
            min_fill: None,
            domain: Aabb::unit(),
        }
    }
}

/// Structural counters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TreeStats {
    pub entry_count: usize,
    pub node_count: usize,
    pub max_observed_depth: usize,
    pub max_leaf_occupancy: usize,
}

/// A spatial tree of any family.
#[derive(Debug, Clone)]
pub struct Tree {
    pub(crate) config: TreeConfig,
    pub(crate) nodes: Vec<Node>,
    pub(crate) root: NodeId,
    len: usize,
    ids: FxHashSet<PayloadId>,
}

impl Tree {
    pub fn new(config: TreeConfig) -> Result<Self, TreeError> {
        config.validate()?;
        let remaining = match config.family {
            Family::RTree => 0,
            _ => config.max_depth,
        };
        Ok(Tree {
            config,
            nodes: vec![Node::leaf(config.domain, remaining, Vec::new())],
            root: NodeId(0),
            len: 0,
            ids: FxHashSet::default(),
        })
    }

    /// Builds a tree from points, assigning ids sequentially from zero.
    pub fn from_points(config: TreeConfig, points: &[Point3]) -> Result<Self, TreeError> {
        let mut tree = Tree::new(config)?;
        tree.reserve(points.len());
        for (i, p) in points.iter().enumerate() {
            tree.insert(*p, PayloadId(i as u64))?;
        }
        Ok(tree)
    }

    /// Reserves room for at least `additional` more entries.
    pub fn reserve(&mut self, additional: usize) {
        self.ids.reserve(additional);
    }

    pub fn config(&self) -> &TreeConfig {
        &self.config
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.index()]
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Every node in the arena, reachable or not, in allocation order.
    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, &Node)> {
        self.nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (NodeId(i as u32), n))
    }

    pub(crate) fn push_node(&mut self, node: Node) -> NodeId {
        let id = NodeId(u32::try_from(self.nodes.len()).expect("node arena exceeds u32 range"));
        self.nodes.push(node);
        id
    }

    /// Inserts `p` under `id`. On error the tree is left unchanged.
    pub fn insert(&mut self, p: Point3, id: PayloadId) -> Result<(), TreeError> {
        if !p.is_finite() {
            return Err(TreeError::NonFinitePoint(p));
        }
        if self.config.family.is_decomposition() && !self.node(self.root).bound.contains(&p) {
            return Err(TreeError::PointOutsideDomain(p));
        }
        if !self.ids.insert(id) {
            return Err(TreeError::DuplicateId(id));
        }
        let entry = Entry::new(p, id);
        match self.config.family {
            Family::RTree => rtree::insert_entry(self, entry),
            Family::Octree | Family::KdTree => self.insert_decomposition(entry),
        }
        self.len += 1;
        Ok(())
    }

    fn insert_decomposition(&mut self, entry: Entry) {
        let mut at = self.root;
        let mut level = 0usize;
        loop {
            let node = &self.nodes[at.index()];
            match &node.kind {
                NodeKind::Leaf(_) => break,
                NodeKind::Internal { children, plane } => {
                    let slot = match (self.config.family, plane) {
                        (Family::KdTree, Some(plane)) => plane.side(&entry.point),
                        _ => octree::octant_of(&node.bound, &entry.point),
                    };
                    at = children[slot];
                    level += 1;
                }
            }
        }
        let NodeKind::Leaf(entries) = &mut self.nodes[at.index()].kind else {
            unreachable!()
        };
        entries.push(entry);
        self.split_overfull(at, level);
    }

    fn needs_split(&self, at: NodeId) -> bool {
        let node = self.node(at);
        node.remaining_depth > 0 && node.entries().len() > self.config.node_capacity
    }

    /// Splits `start` and then any child still over capacity, down to the depth budget.
    fn split_overfull(&mut self, start: NodeId, level: usize) {
        if !self.needs_split(start) {
            return;
        }
        let mut pending = vec![(start, level)];
        while let Some((at, level)) = pending.pop() {
            if !self.needs_split(at) {
                continue;
            }
            let node = &mut self.nodes[at.index()];
            let bound = node.bound;
            let remaining = node.remaining_depth;
            let NodeKind::Leaf(entries) = std::mem::replace(
                &mut node.kind,
                NodeKind::Internal {
                    children: Children::new(),
                    plane: None,
                },
            ) else {
                unreachable!()
            };
            let (parts, plane): (Vec<ChildPart>, _) = match self.config.family {
                Family::Octree => {
                    let parts = octree::split_octant(&bound, entries, remaining)
                        .expect("split gate guarantees depth budget");
                    (parts.into(), None)
                }
                Family::KdTree => {
                    let plane = kdtree::choose_split(self.config.split, &bound, &entries, level)
                        .expect("an over-capacity leaf holds at least two entries");
                    let (lo, hi) = kdtree::split_kd(&bound, entries, plane, remaining)
                        .expect("split gate guarantees depth budget");
                    (vec![lo, hi], Some(plane))
                }
                Family::RTree => unreachable!("R-tree nodes split through rtree::insert_entry"),
            };
            let children: Children = parts
                .into_iter()
                .map(|part| self.push_node(Node::leaf(part.bound, remaining - 1, part.entries)))
                .collect();
            pending.extend(children.iter().map(|&c| (c, level + 1)));
            self.nodes[at.index()].kind = NodeKind::Internal { children, plane };
        }
    }

    pub fn stats(&self) -> TreeStats {
        let mut stats = TreeStats {
            entry_count: 0,
            node_count: self.nodes.len(),
            max_observed_depth: 0,
            max_leaf_occupancy: 0,
        };
        let mut stack = vec![(self.root, 0usize)];
        while let Some((at, depth)) = stack.pop() {
            let node = self.node(at);
            stats.max_observed_depth = stats.max_observed_depth.max(depth);
            match &node.kind {
                NodeKind::Leaf(entries) => {
                    stats.entry_count += entries.len();
                    stats.max_leaf_occupancy = stats.max_leaf_occupancy.max(entries.len());
                }
                NodeKind::Internal { children, .. } => {
                    stack.extend(children.iter().map(|&c| (c, depth + 1)));
                }
            }
        }
        stats
    }

    /// All stored entries, in leaf traversal order.
    pub fn entries(&self) -> Vec<Entry> {
        let mut out = Vec::with_capacity(self.len);
        let mut stack = vec![self.root];
        while let Some(at) = stack.pop() {
            let node = self.node(at);
            out.extend_from_slice(node.entries());
            stack.extend(node.children().iter().rev());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid_point(i: usize) -> Point3 {
        // deterministic, well spread inside the unit cube
        let f = |k: usize, m: usize| ((i * k + 7) % m) as f64 / m as f64;
        Point3::new(f(37, 101), f(53, 97), f(71, 89))
    }

    fn fill(config: TreeConfig, n: usize) -> Tree {
        let points: Vec<_> = (0..n).map(grid_point).collect();
        Tree::from_points(config, &points).unwrap()
    }

    #[test]
    fn below_capacity_root_stays_leaf() {
        let tree = fill(TreeConfig::octree(5, 4), 4);
        let root = tree.node(tree.root());
        assert!(root.is_leaf());
        assert_eq!(root.entries().len(), 4);
    }

    #[test]
    fn fifth_insert_splits_root() {
        for config in [
            TreeConfig::octree(1, 4),
            TreeConfig::kdtree(SplitStrategy::Mmas, 1, 4),
            TreeConfig::kdtree(SplitStrategy::Cs, 3, 4),
        ] {
            let tree = fill(config, 5);
            let root = tree.node(tree.root());
            assert!(!root.is_leaf());
            let total: usize = root
                .children()
                .iter()
                .map(|&c| tree.node(c).entries().len())
                .sum();
            assert_eq!(total, 5);
        }
    }

    #[test]
    fn exhausted_depth_overflows() {
        let tree = fill(TreeConfig::octree(0, 1), 100);
        let root = tree.node(tree.root());
        assert!(root.is_leaf());
        assert_eq!(root.entries().len(), 100);
        assert_eq!(tree.node_count(), 1);
    }

    #[test]
    fn stats_examples() {
        let empty = Tree::new(TreeConfig::octree(4, 4)).unwrap();
        assert_eq!(
            empty.stats(),
            TreeStats {
                entry_count: 0,
                node_count: 1,
                max_observed_depth: 0,
                max_leaf_occupancy: 0
            }
        );
        // spread over distinct octants so the first split is the only one
        let pts = [
            Point3::new(0.1, 0.1, 0.1),
            Point3::new(0.9, 0.1, 0.1),
            Point3::new(0.1, 0.9, 0.1),
            Point3::new(0.1, 0.1, 0.9),
            Point3::new(0.9, 0.9, 0.9),
        ];
        let tree = Tree::from_points(TreeConfig::octree(4, 4), &pts).unwrap();
        let stats = tree.stats();
        assert_eq!(stats.entry_count, 5);
        assert_eq!(stats.node_count, 9);
        assert_eq!(stats.max_observed_depth, 1);

        let big = fill(TreeConfig::octree(10, 8), 10_000);
        assert_eq!(big.stats().entry_count, 10_000);
        assert_eq!(big.len(), 10_000);
    }

    #[test]
    fn errors_leave_tree_unchanged() {
        let mut tree = Tree::new(TreeConfig::octree(4, 2)).unwrap();
        tree.insert(Point3::new(0.5, 0.5, 0.5), PayloadId(1))
            .unwrap();
        let outside = Point3::new(1.5, 0.5, 0.5);
        assert_eq!(
            tree.insert(outside, PayloadId(2)),
            Err(TreeError::PointOutsideDomain(outside))
        );
        assert_eq!(
            tree.insert(Point3::new(0.2, 0.2, 0.2), PayloadId(1)),
            Err(TreeError::DuplicateId(PayloadId(1)))
        );
        let nan = Point3::new(f64::NAN, 0.0, 0.0);
        assert!(matches!(
            tree.insert(nan, PayloadId(3)),
            Err(TreeError::NonFinitePoint(_))
        ));
        assert_eq!(tree.len(), 1);
        // the rejected id 2 is still free
        tree.insert(Point3::new(0.1, 0.1, 0.1), PayloadId(2))
            .unwrap();
        assert_eq!(tree.len(), 2);
    }

    #[test]
    fn rtree_accepts_points_anywhere() {
        let mut tree = Tree::new(TreeConfig::rtree(4)).unwrap();
        tree.insert(Point3::new(-50.0, 3.0, 1e6), PayloadId(0))
            .unwrap();
        assert_eq!(tree.len(), 1);
    }

    #[test]
    fn invalid_configs_rejected() {
        let mut cfg = TreeConfig::octree(3, 0);
        assert!(Tree::new(cfg).is_err());
        cfg = TreeConfig::rtree(1);
        assert!(Tree::new(cfg).is_err());
    }

    #[test]
    fn family_parses() {
        assert_eq!("octree".parse::<Family>(), Ok(Family::Octree));
        assert_eq!("KdTree".parse::<Family>(), Ok(Family::KdTree));
        assert_eq!("rtree".parse::<Family>(), Ok(Family::RTree));
        assert!("quadtree".parse::<Family>().is_err());
    }
}
