//! Dual-tree fixed-radius pair search.
//!
//! The traversal pairs up nodes of two trees, compares every entry pair when
//! both nodes are leaves, and otherwise expands the non-leaf side(s), keeping
//! only child pairs whose boxes lie within the radius of each other. Pairs at
//! exactly the radius are reported. Work is kept on an explicit stack, so tree
//! height never touches the call stack.
//!
//! [`self_search`] runs the same traversal on one tree but visits every
//! unordered node pair once, producing each neighbor pair once with `a < b`.

use crate::error::TreeError;
use crate::geometry::{Aabb, Point3};
use crate::tree::{Entry, NodeId, NodeKind, PayloadId, Tree};

/// Two stored objects within the query radius of each other.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeighborPair {
    pub a: PayloadId,
    pub b: PayloadId,
    pub dist: f64,
}

impl NeighborPair {
    pub fn ids(&self) -> (PayloadId, PayloadId) {
        (self.a, self.b)
    }
}

/// Work counters from one traversal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SearchStats {
    /// Node pairs taken off the work stack.
    pub node_pairs: u64,
    /// Entry-to-entry distance evaluations.
    pub comparisons: u64,
}

/// Radius test shared by the prune and the leaf check.
///
/// Squared values are compared against a threshold padded just above `r²`;
/// anything under it is confirmed with the exact `distance <= r`. Box and
/// point distances are computed in the same operation order, so a computed
/// box distance never exceeds a computed distance of points inside the boxes.
#[derive(Debug, Clone, Copy)]
struct Radius {
    r: f64,
    r_sq_padded: f64,
}

impl Radius {
    fn new(r: f64) -> Result<Self, TreeError> {
        if r.is_nan() || r < 0.0 {
            return Err(TreeError::NegativeRadius(r));
        }
        Ok(Radius {
            r,
            r_sq_padded: r * r * (1.0 + 1e-9),
        })
    }

    #[inline]
    fn reaches(&self, a: &Aabb, b: &Aabb) -> bool {
        a.min_distance_sq(b) <= self.r_sq_padded
    }

    #[inline]
    fn within(&self, p: &Point3, q: &Point3) -> Option<f64> {
        let d_sq = crate::geometry::distance_sq(p, q);
        if d_sq > self.r_sq_padded {
            return None;
        }
        let d = d_sq.sqrt();
        (d <= self.r).then_some(d)
    }
}

#[derive(Clone, Copy)]
enum Task {
    /// A node paired with itself.
    Same(NodeId),
    /// Two nodes: from tree A and tree B, or two disjoint nodes of one tree.
    Cross(NodeId, NodeId),
}

fn is_empty_leaf(tree: &Tree, id: NodeId) -> bool {
    matches!(&tree.node(id).kind, NodeKind::Leaf(e) if e.is_empty())
}

/// One step of the two-sided traversal for the pair `(x, y)`.
#[inline]
#[allow(clippy::too_many_arguments)]
fn expand_cross<F>(
    ta: &Tree,
    tb: &Tree,
    x: NodeId,
    y: NodeId,
    radius: &Radius,
    stack: &mut Vec<Task>,
    stats: &mut SearchStats,
    emit: &mut F,
) where
    F: FnMut(&Entry, &Entry, f64),
{
    let nx = ta.node(x);
    let ny = tb.node(y);
    match (&nx.kind, &ny.kind) {
        (NodeKind::Leaf(ex), NodeKind::Leaf(ey)) => {
            stats.comparisons += (ex.len() * ey.len()) as u64;
            for a in ex {
                for b in ey {
                    if let Some(d) = radius.within(&a.point, &b.point) {
                        emit(a, b, d);
                    }
                }
            }
        }
        _ => {
            let xs = match &nx.kind {
                NodeKind::Leaf(_) => std::slice::from_ref(&x),
                NodeKind::Internal { children, .. } => children.as_slice(),
            };
            let ys = match &ny.kind {
                NodeKind::Leaf(_) => std::slice::from_ref(&y),
                NodeKind::Internal { children, .. } => children.as_slice(),
            };
            for &cx in xs {
                if is_empty_leaf(ta, cx) {
                    continue;
                }
                let bx = ta.node(cx).bound();
                for &cy in ys {
                    if !is_empty_leaf(tb, cy) && radius.reaches(bx, tb.node(cy).bound()) {
                        stack.push(Task::Cross(cx, cy));
                    }
                }
            }
        }
    }
}

/// Visits every pair `(a in A, b in B)` with `distance(a, b) <= r`.
pub fn dual_tree_search_with<F>(
    a: &Tree,
    b: &Tree,
    r: f64,
    mut emit: F,
) -> Result<SearchStats, TreeError>
where
    F: FnMut(&Entry, &Entry, f64),
{
    let radius = Radius::new(r)?;
    let mut stats = SearchStats::default();
    let mut stack = Vec::new();
    if !is_empty_leaf(a, a.root()) && !is_empty_leaf(b, b.root()) {
        let (ra, rb) = (a.node(a.root()).bound(), b.node(b.root()).bound());
        if radius.reaches(ra, rb) {
            stack.push(Task::Cross(a.root(), b.root()));
        }
    }
    while let Some(task) = stack.pop() {
        stats.node_pairs += 1;
        if let Task::Cross(x, y) = task {
            expand_cross(a, b, x, y, &radius, &mut stack, &mut stats, &mut emit);
        }
    }
    Ok(stats)
}

/// All pairs `(a in A, b in B)` within `r`, in traversal order.
pub fn dual_tree_search(a: &Tree, b: &Tree, r: f64) -> Result<Vec<NeighborPair>, TreeError> {
    let mut out = Vec::new();
    dual_tree_search_with(a, b, r, |x, y, dist| {
        out.push(NeighborPair {
            a: x.id,
            b: y.id,
            dist,
        })
    })?;
    Ok(out)
}

/// Visits every unordered pair of distinct entries within `r` exactly once.
/// The closure receives the entries with the smaller id first.
pub fn self_search_with<F>(tree: &Tree, r: f64, mut emit: F) -> Result<SearchStats, TreeError>
where
    F: FnMut(&Entry, &Entry, f64),
{
    let radius = Radius::new(r)?;
    let mut stats = SearchStats::default();
    let mut ordered = |p: &Entry, q: &Entry, d: f64| {
        if p.id < q.id {
            emit(p, q, d)
        } else {
            emit(q, p, d)
        }
    };
    let mut stack = vec![Task::Same(tree.root())];
    while let Some(task) = stack.pop() {
        stats.node_pairs += 1;
        match task {
            Task::Same(x) => match &tree.node(x).kind {
                NodeKind::Leaf(entries) => {
                    let n = entries.len();
                    stats.comparisons += (n * n.saturating_sub(1) / 2) as u64;
                    for (i, p) in entries.iter().enumerate() {
                        for q in &entries[i + 1..] {
                            if let Some(d) = radius.within(&p.point, &q.point) {
                                ordered(p, q, d);
                            }
                        }
                    }
                }
                NodeKind::Internal { children, .. } => {
                    for (i, &ci) in children.iter().enumerate() {
                        if is_empty_leaf(tree, ci) {
                            continue;
                        }
                        stack.push(Task::Same(ci));
                        let bi = tree.node(ci).bound();
                        for &cj in &children[i + 1..] {
                            if !is_empty_leaf(tree, cj) && radius.reaches(bi, tree.node(cj).bound())
                            {
                                stack.push(Task::Cross(ci, cj));
                            }
                        }
                    }
                }
            },
            Task::Cross(x, y) => {
                expand_cross(
                    tree,
                    tree,
                    x,
                    y,
                    &radius,
                    &mut stack,
                    &mut stats,
                    &mut ordered,
                );
            }
        }
    }
    Ok(stats)
}

/// Canonical duplicate-free neighbor pairs of one tree, `a < b` in each.
pub fn self_search(tree: &Tree, r: f64) -> Result<Vec<NeighborPair>, TreeError> {
    let mut out = Vec::new();
    self_search_with(tree, r, |p, q, dist| {
        out.push(NeighborPair {
            a: p.id,
            b: q.id,
            dist,
        })
    })?;
    Ok(out)
}

/// Number of neighbor pairs within `r`, without materializing them.
pub fn self_search_count(tree: &Tree, r: f64) -> Result<usize, TreeError> {
    let mut count = 0usize;
    self_search_with(tree, r, |_, _, _| count += 1)?;
    Ok(count)
}

impl Tree {
    /// See [`self_search`].
    pub fn neighbor_pairs(&self, r: f64) -> Result<Vec<NeighborPair>, TreeError> {
        self_search(self, r)
    }
}
