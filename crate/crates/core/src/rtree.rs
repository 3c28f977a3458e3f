//! R-tree: least-enlargement descent and quadratic node splitting.
//!
//! Points are stored as zero-extent boxes. Every node's bound is the minimal
//! box of its subtree, all leaves sit at the same level, and every node other
//! than the root holds between `min_fill` and `degree` items.

use crate::error::TreeError;
use crate::geometry::{Aabb, Axis, Point3};
use crate::tree::{Children, Entry, Node, NodeId, NodeKind, Tree, TreeConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RTreeParams {
    /// Maximum items per node.
    pub degree: usize,
    /// Minimum items per non-root node.
    pub min_fill: usize,
}

impl RTreeParams {
    pub fn new(degree: usize) -> Result<Self, TreeError> {
        Self::with_min_fill(degree, (2 * degree).div_ceil(5))
    }

    pub fn with_min_fill(degree: usize, min_fill: usize) -> Result<Self, TreeError> {
        if degree < 2 {
            return Err(TreeError::InvalidConfig(format!(
                "R-tree degree must be at least 2, got {degree}"
            )));
        }
        if min_fill < 1 || min_fill > degree.div_ceil(2) {
            return Err(TreeError::InvalidConfig(format!(
                "R-tree min fill must lie in 1..={}, got {min_fill}",
                degree.div_ceil(2)
            )));
        }
        Ok(RTreeParams { degree, min_fill })
    }

    pub fn from_config(config: &TreeConfig) -> Result<Self, TreeError> {
        match config.min_fill {
            Some(m) => Self::with_min_fill(config.degree, m),
            None => Self::new(config.degree),
        }
    }
}

fn margin(b: &Aabb) -> f64 {
    Axis::ALL.iter().map(|&a| b.extent(a)).sum()
}

fn enlargement(b: &Aabb, p: &Point3) -> f64 {
    b.enlarge(p).volume() - b.volume()
}

fn box_enlargement(b: &Aabb, other: &Aabb) -> f64 {
    b.union(other).volume() - b.volume()
}

/// Index of the child bound needing the least volume enlargement to cover `p`.
/// Ties go to the smaller volume, then to the earlier child.
pub fn choose_subtree_among(bounds: &[Aabb], p: &Point3) -> usize {
    let mut best = 0;
    let mut best_key = (f64::INFINITY, f64::INFINITY);
    for (i, b) in bounds.iter().enumerate() {
        let key = (enlargement(b, p), b.volume());
        if key.0 < best_key.0 || (key.0 == best_key.0 && key.1 < best_key.1) {
            best = i;
            best_key = key;
        }
    }
    best
}

/// Child of internal node `node` that `p` descends into.
pub fn choose_subtree(tree: &Tree, node: NodeId, p: &Point3) -> Option<NodeId> {
    let children = tree.node(node).children();
    if children.is_empty() {
        return None;
    }
    let bounds: Vec<Aabb> = children.iter().map(|&c| *tree.node(c).bound()).collect();
    Some(children[choose_subtree_among(&bounds, p)])
}

/// Guttman's quadratic split of `boxes` into two groups of at least `min_fill`
/// items each. Returns the item indices of each group, ascending.
///
/// Seeds are the pair wasting the most volume when covered together; with
/// equal wasted volume (degenerate flat or collinear inputs) the wasted margin
/// decides. Remaining items are assigned in order of strongest preference.
pub fn quadratic_split(boxes: &[Aabb], min_fill: usize) -> (Vec<usize>, Vec<usize>) {
    let n = boxes.len();
    assert!(n >= 2, "need at least two items to split");
    assert!(
        2 * min_fill <= n,
        "{n} items cannot fill two groups of {min_fill}"
    );

    let (mut seed_a, mut seed_b) = (0, 1);
    let mut best_waste = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for i in 0..n {
        for j in i + 1..n {
            let joint = boxes[i].union(&boxes[j]);
            let waste = (
                joint.volume() - boxes[i].volume() - boxes[j].volume(),
                margin(&joint) - margin(&boxes[i]) - margin(&boxes[j]),
            );
            if waste.0 > best_waste.0 || (waste.0 == best_waste.0 && waste.1 > best_waste.1) {
                best_waste = waste;
                (seed_a, seed_b) = (i, j);
            }
        }
    }

    let mut group_a = vec![seed_a];
    let mut group_b = vec![seed_b];
    let mut bound_a = boxes[seed_a];
    let mut bound_b = boxes[seed_b];
    let mut rest: Vec<usize> = (0..n).filter(|&k| k != seed_a && k != seed_b).collect();

    while !rest.is_empty() {
        if group_a.len() + rest.len() <= min_fill {
            group_a.append(&mut rest);
            break;
        }
        if group_b.len() + rest.len() <= min_fill {
            group_b.append(&mut rest);
            break;
        }
        let mut pick = 0;
        let mut pick_pref = f64::NEG_INFINITY;
        for (slot, &k) in rest.iter().enumerate() {
            let pref =
                (box_enlargement(&bound_a, &boxes[k]) - box_enlargement(&bound_b, &boxes[k])).abs();
            if pref > pick_pref {
                pick = slot;
                pick_pref = pref;
            }
        }
        let k = rest.remove(pick);
        let grow_a = box_enlargement(&bound_a, &boxes[k]);
        let grow_b = box_enlargement(&bound_b, &boxes[k]);
        let to_a = if grow_a != grow_b {
            grow_a < grow_b
        } else if bound_a.volume() != bound_b.volume() {
            bound_a.volume() < bound_b.volume()
        } else {
            group_a.len() <= group_b.len()
        };
        if to_a {
            group_a.push(k);
            bound_a = bound_a.union(&boxes[k]);
        } else {
            group_b.push(k);
            bound_b = bound_b.union(&boxes[k]);
        }
    }
    group_a.sort_unstable();
    group_b.sort_unstable();
    (group_a, group_b)
}

fn item_count(node: &Node) -> usize {
    match &node.kind {
        NodeKind::Leaf(entries) => entries.len(),
        NodeKind::Internal { children, .. } => children.len(),
    }
}

fn take_groups<T: Copy, C: FromIterator<T>>(
    items: &[T],
    groups: &(Vec<usize>, Vec<usize>),
) -> (C, C) {
    (
        groups.0.iter().map(|&i| items[i]).collect(),
        groups.1.iter().map(|&i| items[i]).collect(),
    )
}

/// Splits an overfull node in place, returning its new sibling.
fn split_node(tree: &mut Tree, at: NodeId, params: RTreeParams) -> NodeId {
    let sibling = match &tree.nodes[at.index()].kind {
        NodeKind::Leaf(entries) => {
            let boxes: Vec<Aabb> = entries.iter().map(|e| Aabb::point(e.point)).collect();
            let groups = quadratic_split(&boxes, params.min_fill);
            let (keep, moved): (Vec<Entry>, Vec<Entry>) = take_groups(entries, &groups);
            let keep_bound =
                Aabb::covering(keep.iter().map(|e| &e.point)).expect("non-empty group");
            let moved_bound =
                Aabb::covering(moved.iter().map(|e| &e.point)).expect("non-empty group");
            let node = &mut tree.nodes[at.index()];
            node.kind = NodeKind::Leaf(keep);
            node.bound = keep_bound;
            Node::leaf(moved_bound, 0, moved)
        }
        NodeKind::Internal { children, .. } => {
            let boxes: Vec<Aabb> = children
                .iter()
                .map(|&c| tree.nodes[c.index()].bound)
                .collect();
            let groups = quadratic_split(&boxes, params.min_fill);
            let (keep, moved): (Children, Children) = take_groups(children, &groups);
            let cover = |ids: &[NodeId]| {
                ids.iter()
                    .map(|&c| tree.nodes[c.index()].bound)
                    .reduce(|a, b| a.union(&b))
                    .expect("non-empty group")
            };
            let keep_bound = cover(&keep);
            let moved_bound = cover(&moved);
            let node = &mut tree.nodes[at.index()];
            node.kind = NodeKind::Internal {
                children: keep,
                plane: None,
            };
            node.bound = keep_bound;
            Node {
                bound: moved_bound,
                remaining_depth: 0,
                kind: NodeKind::Internal {
                    children: moved,
                    plane: None,
                },
            }
        }
    };
    tree.push_node(sibling)
}

/// Inserts an already validated entry.
pub(crate) fn insert_entry(tree: &mut Tree, entry: Entry) {
    let params = RTreeParams::from_config(&tree.config).expect("config validated at construction");
    let p = entry.point;
    let mut path = Vec::new();
    let mut at = tree.root;
    loop {
        let node = &mut tree.nodes[at.index()];
        node.bound = match &node.kind {
            NodeKind::Leaf(entries) if entries.is_empty() => Aabb::point(p),
            _ => node.bound.enlarge(&p),
        };
        if node.is_leaf() {
            break;
        }
        let next = choose_subtree(tree, at, &p).expect("internal R-tree nodes have children");
        path.push(at);
        at = next;
    }
    if let NodeKind::Leaf(entries) = &mut tree.nodes[at.index()].kind {
        entries.push(entry);
    }

    while item_count(tree.node(at)) > params.degree {
        let sibling = split_node(tree, at, params);
        match path.pop() {
            Some(parent) => {
                if let NodeKind::Internal { children, .. } = &mut tree.nodes[parent.index()].kind {
                    children.push(sibling);
                }
                at = parent;
            }
            None => {
                let bound = tree.node(at).bound.union(&tree.node(sibling).bound);
                let root = tree.push_node(Node {
                    bound,
                    remaining_depth: 0,
                    kind: NodeKind::Internal {
                        children: smallvec::smallvec![at, sibling],
                        plane: None,
                    },
                });
                tree.root = root;
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::PayloadId;

    fn pt(x: f64, y: f64, z: f64) -> Point3 {
        Point3::new(x, y, z)
    }

    #[test]
    fn params_defaults() {
        assert_eq!(RTreeParams::new(5).unwrap().min_fill, 2);
        assert_eq!(RTreeParams::new(25).unwrap().min_fill, 10);
        assert_eq!(RTreeParams::new(125).unwrap().min_fill, 50);
        assert_eq!(RTreeParams::new(2).unwrap().min_fill, 1);
        assert_eq!(RTreeParams::new(3).unwrap().min_fill, 2);
        assert!(RTreeParams::new(1).is_err());
        assert!(RTreeParams::with_min_fill(5, 4).is_err());
        assert!(RTreeParams::with_min_fill(5, 0).is_err());
    }

    #[test]
    fn choose_subtree_examples() {
        let a = Aabb::unit();
        let b = Aabb::cube(10.0, 11.0);
        // strictly inside one
        assert_eq!(choose_subtree_among(&[b, a], &pt(0.5, 0.5, 0.5)), 1);
        // inside both: smaller volume wins
        let big = Aabb::cube(0.0, 2.0);
        assert_eq!(choose_subtree_among(&[big, a], &pt(0.5, 0.5, 0.5)), 1);
        // outside all
        assert_eq!(choose_subtree_among(&[a, b], &pt(1.1, 0.5, 0.5)), 0);
        // full tie keeps child order
        assert_eq!(choose_subtree_among(&[a, a], &pt(0.5, 0.5, 0.5)), 0);
    }

    #[test]
    fn first_insert_gives_point_box() {
        let mut tree = Tree::new(TreeConfig::rtree(5)).unwrap();
        let p = pt(3.0, -2.0, 7.5);
        tree.insert(p, PayloadId(0)).unwrap();
        let root = tree.node(tree.root());
        assert!(root.is_leaf());
        assert_eq!(root.entries().len(), 1);
        assert_eq!(*root.bound(), Aabb::point(p));
    }

    #[test]
    fn sixth_insert_splits_root() {
        let mut tree = Tree::new(TreeConfig::rtree(5)).unwrap();
        for i in 0..6 {
            let f = i as f64;
            tree.insert(
                pt(f * 0.1, (f * 0.37) % 1.0, (f * 0.71) % 1.0),
                PayloadId(i),
            )
            .unwrap();
        }
        let root = tree.node(tree.root());
        assert_eq!(root.children().len(), 2);
        for &c in root.children() {
            let child = tree.node(c);
            assert!(child.is_leaf());
            assert!(child.entries().len() >= 2);
        }
    }

    #[test]
    fn collinear_seeds_are_extremes() {
        let boxes: Vec<Aabb> = [0.3, 0.0, 0.1, 0.5, 0.2, 0.4]
            .iter()
            .map(|&x| Aabb::point(pt(x, 0.0, 0.0)))
            .collect();
        let (a, b) = quadratic_split(&boxes, 2);
        // extremes are index 1 (x=0) and index 3 (x=0.5), and must be separated
        assert!(a.contains(&1) != b.contains(&1));
        assert!(a.contains(&3) != b.contains(&3));
        assert!(a.contains(&1) != a.contains(&3));
    }

    #[test]
    fn identical_points_split_legally() {
        let boxes = vec![Aabb::point(pt(0.2, 0.2, 0.2)); 3];
        let (a, b) = quadratic_split(&boxes, 1);
        assert!(!a.is_empty() && !b.is_empty());
        assert_eq!(a.len() + b.len(), 3);
        assert!(a.len() <= 2 && b.len() <= 2);

        let mut tree = Tree::new(TreeConfig::rtree(2)).unwrap();
        for i in 0..50 {
            tree.insert(pt(0.2, 0.2, 0.2), PayloadId(i)).unwrap();
        }
        assert_eq!(tree.stats().entry_count, 50);
    }

    #[test]
    fn min_fill_is_forced() {
        // one far outlier would attract nothing; the min-fill rule must feed it
        let mut boxes: Vec<Aabb> = (0..5)
            .map(|i| Aabb::point(pt(i as f64 * 0.01, 0.0, 0.0)))
            .collect();
        boxes.push(Aabb::point(pt(100.0, 100.0, 100.0)));
        let (a, b) = quadratic_split(&boxes, 3);
        assert!(a.len() >= 3 && b.len() >= 3);
    }
}
