//! Structural audits over a built tree.

use std::collections::HashSet;

use crate::geometry::Aabb;
use crate::kdtree::SplitStrategy;
use crate::octree;
use crate::rtree::RTreeParams;
use crate::tree::{Family, NodeId, NodeKind, Tree};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invariant violated at node {node}: {message}")]
pub struct InvariantViolation {
    pub node: usize,
    pub message: String,
}

fn fail<T>(node: NodeId, message: impl Into<String>) -> Result<T, InvariantViolation> {
    Err(InvariantViolation {
        node: node.index(),
        message: message.into(),
    })
}

impl Tree {
    /// Checks every structural invariant of the tree's family.
    ///
    /// All families: stored entries equal the insert count with unique ids.
    /// Octree and k-d: leaf capacity below the depth budget, entries inside
    /// their leaf and reachable by descent, children tiling the parent.
    /// R-tree: occupancy bounds, minimal bounds, equal leaf depth.
    pub fn check_invariants(&self) -> Result<(), InvariantViolation> {
        let mut ids = HashSet::with_capacity(self.len());
        let mut count = 0usize;
        for entry in self.entries() {
            count += 1;
            if !ids.insert(entry.id) {
                return fail(self.root, format!("id {} stored twice", entry.id));
            }
        }
        if count != self.len() {
            return fail(
                self.root,
                format!("{count} entries stored, {} inserted", self.len()),
            );
        }
        match self.config.family {
            Family::Octree | Family::KdTree => self.check_decomposition(),
            Family::RTree => self.check_rtree(),
        }
    }

    fn check_decomposition(&self) -> Result<(), InvariantViolation> {
        let cap = self.config.node_capacity;
        if self.node(self.root).bound != self.config.domain {
            return fail(self.root, "root bound differs from the domain");
        }
        let mut stack = vec![self.root];
        while let Some(at) = stack.pop() {
            let node = self.node(at);
            match &node.kind {
                NodeKind::Leaf(entries) => {
                    if node.remaining_depth > 0 && entries.len() > cap {
                        return fail(at, format!("leaf holds {} > capacity {cap}", entries.len()));
                    }
                    for e in entries {
                        if !node.bound.contains(&e.point) {
                            return fail(at, format!("entry {} outside leaf bound", e.id));
                        }
                        if self.descend(&e.point) != at {
                            return fail(at, format!("entry {} not reachable by descent", e.id));
                        }
                    }
                }
                NodeKind::Internal { children, plane } => {
                    if node.remaining_depth == 0 {
                        return fail(at, "internal node without depth budget");
                    }
                    for &c in children {
                        if self.node(c).remaining_depth + 1 != node.remaining_depth {
                            return fail(c, "child depth budget is not parent's minus one");
                        }
                    }
                    let expected: Vec<Aabb> = match (self.config.family, plane) {
                        (Family::Octree, None) => (0..8)
                            .map(|code| octree::octant_bound(&node.bound, code))
                            .collect(),
                        (Family::KdTree, Some(plane)) => {
                            let lo = node.bound.min.coord(plane.axis);
                            let hi = node.bound.max.coord(plane.axis);
                            if !(lo <= plane.coordinate && plane.coordinate <= hi) {
                                return fail(at, "plane outside node extent");
                            }
                            if self.config.split == SplitStrategy::Msas
                                && plane.axis != crate::geometry::Axis::X
                            {
                                return fail(at, "MSAS plane not on x");
                            }
                            let (l, h) = node.bound.split_at(plane.axis, plane.coordinate);
                            vec![l, h]
                        }
                        _ => return fail(at, "internal node kind does not match the family"),
                    };
                    let got: Vec<Aabb> = children.iter().map(|&c| self.node(c).bound).collect();
                    if got != expected {
                        return fail(at, "children do not tile the parent");
                    }
                    stack.extend(children.iter().copied());
                }
            }
        }
        Ok(())
    }

    /// Leaf reached by descending with `p` through octants or planes.
    fn descend(&self, p: &crate::geometry::Point3) -> NodeId {
        let mut at = self.root;
        loop {
            let node = self.node(at);
            match &node.kind {
                NodeKind::Leaf(_) => return at,
                NodeKind::Internal { children, plane } => {
                    let slot = match plane {
                        Some(plane) => plane.side(p),
                        None => octree::octant_of(&node.bound, p),
                    };
                    at = children[slot];
                }
            }
        }
    }

    fn check_rtree(&self) -> Result<(), InvariantViolation> {
        let params = RTreeParams::from_config(&self.config).expect("validated config");
        let mut leaf_depth = None;
        // post-order: recompute minimal bounds bottom-up
        let mut stack = vec![(self.root, 0usize, false)];
        let mut covered: Vec<Option<Aabb>> = vec![None; self.nodes.len()];
        while let Some((at, depth, done)) = stack.pop() {
            let node = self.node(at);
            let is_root = at == self.root;
            let items = match &node.kind {
                NodeKind::Leaf(e) => e.len(),
                NodeKind::Internal { children, .. } => children.len(),
            };
            if !done {
                if items > params.degree {
                    return fail(at, format!("{items} items > degree {}", params.degree));
                }
                if !is_root && items < params.min_fill {
                    return fail(at, format!("{items} items < min fill {}", params.min_fill));
                }
                if is_root && !node.is_leaf() && items < 2 {
                    return fail(at, "internal root with fewer than two children");
                }
                match &node.kind {
                    NodeKind::Leaf(_) => {
                        if *leaf_depth.get_or_insert(depth) != depth {
                            return fail(at, "leaves at different depths");
                        }
                    }
                    NodeKind::Internal { children, .. } => {
                        stack.push((at, depth, true));
                        stack.extend(children.iter().map(|&c| (c, depth + 1, false)));
                        continue;
                    }
                }
            }
            let minimal = match &node.kind {
                NodeKind::Leaf(entries) => Aabb::covering(entries.iter().map(|e| &e.point)),
                NodeKind::Internal { children, .. } => children
                    .iter()
                    .map(|&c| covered[c.index()].expect("children audited first"))
                    .reduce(|a, b| a.union(&b)),
            };
            match minimal {
                Some(b) if b != node.bound => {
                    return fail(at, format!("bound {} is not minimal ({b})", node.bound))
                }
                Some(b) => covered[at.index()] = Some(b),
                None if is_root => {}
                None => return fail(at, "empty non-root node"),
            }
        }
        Ok(())
    }
}
