//! Eight-way decomposition into equal octants.

use crate::error::TreeError;
use crate::geometry::{Aabb, Point3};
use crate::tree::{ChildPart, Entry};

/// Octant code of `p` in `bound`: bit 0 is x, bit 1 is y, bit 2 is z, each set
/// when the coordinate is at or above the box center.
pub fn child_index(bound: &Aabb, p: &Point3) -> Result<usize, TreeError> {
    if !bound.contains(p) {
        return Err(TreeError::PointOutsideNode(*p));
    }
    Ok(octant_of(bound, p))
}

#[inline]
pub(crate) fn octant_of(bound: &Aabb, p: &Point3) -> usize {
    let c = bound.center();
    (p.x >= c.x) as usize | ((p.y >= c.y) as usize) << 1 | ((p.z >= c.z) as usize) << 2
}

/// Bound of octant `code` of `bound`.
pub fn octant_bound(bound: &Aabb, code: usize) -> Aabb {
    let c = bound.center();
    let pick = |bit: usize, lo: f64, mid: f64, hi: f64| {
        if code & bit == 0 {
            (lo, mid)
        } else {
            (mid, hi)
        }
    };
    let (x0, x1) = pick(1, bound.min.x, c.x, bound.max.x);
    let (y0, y1) = pick(2, bound.min.y, c.y, bound.max.y);
    let (z0, z1) = pick(4, bound.min.z, c.z, bound.max.z);
    Aabb {
        min: Point3::new(x0, y0, z0),
        max: Point3::new(x1, y1, z1),
    }
}

/// Splits a leaf into its eight octants. All eight are produced, empty or not.
pub fn split_octant(
    bound: &Aabb,
    entries: Vec<Entry>,
    remaining_depth: u32,
) -> Result<[ChildPart; 8], TreeError> {
    if remaining_depth == 0 {
        return Err(TreeError::DepthExhausted);
    }
    let mut parts: [ChildPart; 8] = std::array::from_fn(|code| ChildPart {
        bound: octant_bound(bound, code),
        entries: Vec::new(),
    });
    for entry in entries {
        parts[octant_of(bound, &entry.point)].entries.push(entry);
    }
    Ok(parts)
}
