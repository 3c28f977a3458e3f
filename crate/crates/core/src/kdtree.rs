//! Binary decomposition with four plane-selection strategies.
//!
//! | strategy | axis                  | coordinate                              |
//! |----------|-----------------------|-----------------------------------------|
//! | MMAS     | cycles x, y, z by depth | median of entry coordinates           |
//! | MSAS     | always x              | median of entry x coordinates           |
//! | CS       | cycles x, y, z by depth | midpoint of the node bound            |
//! | SAHS     | cycles x, y, z by depth | entry coordinate of least surface-area cost |
//!
//! The median of an even count is the mean of the two middle values. Entries
//! strictly below the plane go to the low child, the rest to the high child.

use std::fmt;
use std::str::FromStr;

use crate::error::TreeError;
use crate::geometry::{Aabb, Axis, Point3};
use crate::tree::{ChildPart, Entry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SplitStrategy {
    /// Median split, axis cycling x, y, z.
    Mmas,
    /// Median split on x only.
    Msas,
    /// Center split, axis cycling x, y, z.
    Cs,
    /// Surface-area-heuristic split, axis cycling x, y, z.
    Sahs,
}

impl SplitStrategy {
    pub const ALL: [SplitStrategy; 4] = [
        SplitStrategy::Mmas,
        SplitStrategy::Msas,
        SplitStrategy::Cs,
        SplitStrategy::Sahs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SplitStrategy::Mmas => "mmas",
            SplitStrategy::Msas => "msas",
            SplitStrategy::Cs => "cs",
            SplitStrategy::Sahs => "sahs",
        }
    }
}

impl fmt::Display for SplitStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SplitStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "mmas" => Ok(SplitStrategy::Mmas),
            "msas" => Ok(SplitStrategy::Msas),
            "cs" => Ok(SplitStrategy::Cs),
            "sahs" | "sah" => Ok(SplitStrategy::Sahs),
            other => Err(format!("unknown split strategy `{other}`")),
        }
    }
}

/// Axis-orthogonal cutting plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitPlane {
    pub axis: Axis,
    pub coordinate: f64,
}

impl SplitPlane {
    pub fn new(axis: Axis, coordinate: f64) -> Self {
        SplitPlane { axis, coordinate }
    }

    /// 0 for the low child, 1 for the high child.
    #[inline]
    pub fn side(&self, p: &Point3) -> usize {
        (p.coord(self.axis) >= self.coordinate) as usize
    }
}

fn sorted_coords(entries: &[Entry], axis: Axis) -> Vec<f64> {
    let mut coords: Vec<f64> = entries.iter().map(|e| e.point.coord(axis)).collect();
    coords.sort_unstable_by(f64::total_cmp);
    coords
}

fn median(entries: &[Entry], axis: Axis) -> Result<f64, TreeError> {
    if entries.is_empty() {
        return Err(TreeError::EmptyLeaf);
    }
    let coords = sorted_coords(entries, axis);
    let mid = coords.len() / 2;
    Ok(if coords.len() % 2 == 1 {
        coords[mid]
    } else {
        (coords[mid - 1] + coords[mid]) * 0.5
    })
}

/// Median multiple-axis split: median on the axis `level mod 3`.
pub fn choose_split_mmas(entries: &[Entry], level: usize) -> Result<SplitPlane, TreeError> {
    let axis = Axis::cycle(level);
    Ok(SplitPlane::new(axis, median(entries, axis)?))
}

/// Median single-axis split: median x at every level.
pub fn choose_split_msas(entries: &[Entry]) -> Result<SplitPlane, TreeError> {
    Ok(SplitPlane::new(Axis::X, median(entries, Axis::X)?))
}

/// Center split: midpoint of the bound on the axis `level mod 3`. Ignores the entries.
pub fn choose_split_cs(bound: &Aabb, level: usize) -> SplitPlane {
    let axis = Axis::cycle(level);
    let mid = (bound.min.coord(axis) + bound.max.coord(axis)) * 0.5;
    SplitPlane::new(axis, mid)
}

/// Surface-area cost of cutting `bound` at `plane` with `n_low`/`n_high` entries per side.
pub fn sah_cost(bound: &Aabb, plane: SplitPlane, n_low: usize, n_high: usize) -> f64 {
    let (low, high) = bound.split_at(plane.axis, plane.coordinate);
    low.surface_area() * n_low as f64 + high.surface_area() * n_high as f64
}

/// Surface-area-heuristic split on the axis `level mod 3`.
///
/// Candidates are the entry coordinates on that axis, scanned in ascending
/// order; the first candidate reaching the minimum cost wins.
pub fn choose_split_sahs(
    bound: &Aabb,
    entries: &[Entry],
    level: usize,
) -> Result<SplitPlane, TreeError> {
    if entries.len() < 2 {
        return Err(TreeError::TooFewEntries {
            needed: 2,
            found: entries.len(),
        });
    }
    let axis = Axis::cycle(level);
    let coords = sorted_coords(entries, axis);
    let n = coords.len();
    let mut best: Option<(f64, f64)> = None;
    for (i, &c) in coords.iter().enumerate() {
        // equal candidates share the cost of their first occurrence
        if i > 0 && coords[i - 1] == c {
            continue;
        }
        let cost = sah_cost(bound, SplitPlane::new(axis, c), i, n - i);
        if best.is_none_or(|(best_cost, _)| cost < best_cost) {
            best = Some((cost, c));
        }
    }
    let (_, coordinate) = best.expect("at least two candidates");
    Ok(SplitPlane::new(axis, coordinate))
}

/// Plane for `strategy` at depth `level`.
pub fn choose_split(
    strategy: SplitStrategy,
    bound: &Aabb,
    entries: &[Entry],
    level: usize,
) -> Result<SplitPlane, TreeError> {
    match strategy {
        SplitStrategy::Mmas => choose_split_mmas(entries, level),
        SplitStrategy::Msas => choose_split_msas(entries),
        SplitStrategy::Cs => Ok(choose_split_cs(bound, level)),
        SplitStrategy::Sahs => choose_split_sahs(bound, entries, level),
    }
}

/// Cuts a leaf at `plane`. Either child may come out empty.
pub fn split_kd(
    bound: &Aabb,
    entries: Vec<Entry>,
    plane: SplitPlane,
    remaining_depth: u32,
) -> Result<(ChildPart, ChildPart), TreeError> {
    if remaining_depth == 0 {
        return Err(TreeError::DepthExhausted);
    }
    let (low_bound, high_bound) = bound.split_at(plane.axis, plane.coordinate);
    let (high, low): (Vec<Entry>, Vec<Entry>) =
        entries.into_iter().partition(|e| plane.side(&e.point) == 1);
    Ok((
        ChildPart {
            bound: low_bound,
            entries: low,
        },
        ChildPart {
            bound: high_bound,
            entries: high,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::PayloadId;

    fn on_x(xs: &[f64]) -> Vec<Entry> {
        xs.iter()
            .enumerate()
            .map(|(i, &x)| {
                // y and z vary so axis mix-ups show up
                let p = Point3::new(x, 1.0 - x, (i as f64 * 0.37) % 1.0);
                Entry::new(p, PayloadId(i as u64))
            })
            .collect()
    }

    #[test]
    fn mmas_examples() {
        let e = on_x(&[0.1, 0.5, 0.9]);
        assert_eq!(choose_split_mmas(&e, 0), Ok(SplitPlane::new(Axis::X, 0.5)));
        assert_eq!(choose_split_mmas(&e, 1).unwrap().axis, Axis::Y);
        assert_eq!(choose_split_mmas(&e, 1).unwrap().coordinate, 0.5);
        assert_eq!(choose_split_mmas(&e, 2).unwrap().axis, Axis::Z);
        assert_eq!(choose_split_mmas(&e, 3).unwrap().axis, Axis::X);
        assert_eq!(choose_split_mmas(&[], 0), Err(TreeError::EmptyLeaf));
    }

    #[test]
    fn msas_examples() {
        let p = choose_split_msas(&on_x(&[0.2, 0.4])).unwrap();
        assert_eq!(p.axis, Axis::X);
        assert!((p.coordinate - 0.3).abs() < 1e-15);
        let p = choose_split_msas(&on_x(&[0.5, 0.3, 0.1, 0.4, 0.2])).unwrap();
        assert_eq!(p, SplitPlane::new(Axis::X, 0.3));
        assert_eq!(choose_split_msas(&[]), Err(TreeError::EmptyLeaf));
    }

    #[test]
    fn cs_examples() {
        assert_eq!(
            choose_split_cs(&Aabb::unit(), 0),
            SplitPlane::new(Axis::X, 0.5)
        );
        let tall = Aabb::new(Point3::new(0.0, 0.0, 0.0), Point3::new(1.0, 4.0, 1.0));
        assert_eq!(choose_split_cs(&tall, 1), SplitPlane::new(Axis::Y, 2.0));
        assert_eq!(choose_split_cs(&tall, 4), choose_split_cs(&tall, 4));
        // data-independent, so an empty leaf is fine through the dispatcher too
        assert!(choose_split(SplitStrategy::Cs, &tall, &[], 2).is_ok());
    }

    #[test]
    fn sahs_needs_two_entries() {
        assert_eq!(
            choose_split_sahs(&Aabb::unit(), &on_x(&[0.4]), 0),
            Err(TreeError::TooFewEntries {
                needed: 2,
                found: 1
            })
        );
    }

    #[test]
    fn sahs_equal_costs_pick_lower_coordinate() {
        // identical coordinates: every candidate costs the same
        let e = on_x(&[0.3, 0.3, 0.3]);
        let p = choose_split_sahs(&Aabb::unit(), &e, 0).unwrap();
        assert_eq!(p, SplitPlane::new(Axis::X, 0.3));
    }

    #[test]
    fn split_kd_examples() {
        let e = on_x(&[0.1, 0.9]);
        let (lo, hi) = split_kd(&Aabb::unit(), e, SplitPlane::new(Axis::X, 0.5), 2).unwrap();
        assert_eq!(
            lo.bound,
            Aabb::new(Point3::new(0.0, 0.0, 0.0), Point3::new(0.5, 1.0, 1.0))
        );
        assert_eq!(
            hi.bound,
            Aabb::new(Point3::new(0.5, 0.0, 0.0), Point3::new(1.0, 1.0, 1.0))
        );
        assert_eq!(lo.entries.len(), 1);
        assert_eq!(hi.entries.len(), 1);
    }

    #[test]
    fn split_kd_identical_points_go_high() {
        let e = on_x(&[0.4, 0.4, 0.4, 0.4]);
        let plane = choose_split_msas(&e).unwrap();
        let (lo, hi) = split_kd(&Aabb::unit(), e, plane, 1).unwrap();
        assert!(lo.entries.is_empty());
        assert_eq!(hi.entries.len(), 4);
    }

    #[test]
    fn split_kd_needs_depth() {
        let r = split_kd(&Aabb::unit(), Vec::new(), SplitPlane::new(Axis::X, 0.5), 0);
        assert_eq!(r, Err(TreeError::DepthExhausted));
    }

    #[test]
    fn strategy_names_round_trip() {
        for s in SplitStrategy::ALL {
            assert_eq!(s.name().parse::<SplitStrategy>(), Ok(s));
        }
    }
}
