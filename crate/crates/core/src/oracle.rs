//! Ground truth for pair search: exhaustive enumeration.
//!
//! Nothing here touches the tree modules.

use std::f64::consts::PI;

use crate::error::TreeError;
use crate::geometry::{distance, Point3};
use crate::search::NeighborPair;
use crate::tree::PayloadId;

/// Every pair within `r`, `a < b`, sorted by `(a, b)`. Quadratic in the input size.
pub fn brute_force_pairs(
    points: &[(Point3, PayloadId)],
    r: f64,
) -> Result<Vec<NeighborPair>, TreeError> {
    if r.is_nan() || r < 0.0 {
        return Err(TreeError::NegativeRadius(r));
    }
    let mut out = Vec::new();
    for (i, (p, pid)) in points.iter().enumerate() {
        for (q, qid) in &points[i + 1..] {
            let d = distance(p, q);
            if d <= r {
                let (a, b) = if pid < qid {
                    (*pid, *qid)
                } else {
                    (*qid, *pid)
                };
                out.push(NeighborPair { a, b, dist: d });
            }
        }
    }
    out.sort_unstable_by_key(|pair| (pair.a, pair.b));
    Ok(out)
}

/// Pairs `(id_a, id_b)` of `brute_force_pairs` over points numbered by position.
pub fn brute_force_ids(
    points: &[Point3],
    r: f64,
) -> Result<Vec<(PayloadId, PayloadId)>, TreeError> {
    let tagged: Vec<_> = points
        .iter()
        .enumerate()
        .map(|(i, p)| (*p, PayloadId(i as u64)))
        .collect();
    Ok(brute_force_pairs(&tagged, r)?
        .into_iter()
        .map(|pair| pair.ids())
        .collect())
}

/// Expected number of pairs within `r` among `n` uniform points in the unit cube,
/// ignoring boundary effects: `n(n-1)/2 · (4/3)πr³`.
///
/// Only meaningful for `r ≪ 1`; boundary losses make it an overestimate that
/// grows with `r`, and past `r ≈ 0.6` it exceeds the number of pairs that exist.
pub fn expected_pair_count(n: usize, r: f64) -> f64 {
    let n = n as f64;
    n * (n - 1.0) / 2.0 * (4.0 / 3.0) * PI * r.powi(3)
}
