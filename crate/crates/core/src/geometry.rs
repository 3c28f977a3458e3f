//! Points, axis-aligned boxes and the distance functions every tree shares.
//!
//! Boxes are closed on all faces. The box-to-box minimum distance is a lower
//! bound on the distance between any two points the boxes contain, and it is
//! evaluated with the same operation order as [`distance`] so the bound also
//! holds after floating-point rounding.

use std::fmt;

/// A coordinate axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    /// Axis used at `level` when cycling x, y, z from the root.
    pub fn cycle(level: usize) -> Axis {
        Self::ALL[level % 3]
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

/// A position in 3-space.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Point3 { x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    #[inline]
    pub fn coord(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.x,
            Axis::Y => self.y,
            Axis::Z => self.z,
        }
    }

    #[inline]
    pub fn with_coord(mut self, axis: Axis, value: f64) -> Self {
        match axis {
            Axis::X => self.x = value,
            Axis::Y => self.y = value,
            Axis::Z => self.z = value,
        }
        self
    }

    fn zip_with(self, other: Point3, f: impl Fn(f64, f64) -> f64) -> Point3 {
        Point3::new(f(self.x, other.x), f(self.y, other.y), f(self.z, other.z))
    }
}

impl fmt::Display for Point3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// Squared Euclidean distance.
#[inline]
pub fn distance_sq(p: &Point3, q: &Point3) -> f64 {
    let dx = p.x - q.x;
    let dy = p.y - q.y;
    let dz = p.z - q.z;
    dx * dx + dy * dy + dz * dz
}

/// Euclidean distance.
#[inline]
pub fn distance(p: &Point3, q: &Point3) -> f64 {
    distance_sq(p, q).sqrt()
}

/// Closed axis-aligned box. Zero-extent boxes are valid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aabb {
    pub min: Point3,
    pub max: Point3,
}

impl Aabb {
    /// Builds a box from two corners. Panics if `min` exceeds `max` on any axis.
    pub fn new(min: Point3, max: Point3) -> Self {
        assert!(
            min.x <= max.x && min.y <= max.y && min.z <= max.z,
            "inverted box: min {min} max {max}"
        );
        Aabb { min, max }
    }

    /// Like [`Aabb::new`] but returns `None` for inverted or non-finite corners.
    pub fn try_new(min: Point3, max: Point3) -> Option<Self> {
        let ok = min.is_finite()
            && max.is_finite()
            && min.x <= max.x
            && min.y <= max.y
            && min.z <= max.z;
        ok.then_some(Aabb { min, max })
    }

    /// The box `[0,1]³`.
    pub fn unit() -> Self {
        Aabb::new(Point3::new(0.0, 0.0, 0.0), Point3::new(1.0, 1.0, 1.0))
    }

    /// Cube `[lo,hi]³`.
    pub fn cube(lo: f64, hi: f64) -> Self {
        Aabb::new(Point3::new(lo, lo, lo), Point3::new(hi, hi, hi))
    }

    /// Zero-extent box at `p`.
    pub fn point(p: Point3) -> Self {
        Aabb { min: p, max: p }
    }

    /// Smallest box containing every point; `None` when the iterator is empty.
    pub fn covering<'a>(points: impl IntoIterator<Item = &'a Point3>) -> Option<Self> {
        let mut it = points.into_iter();
        let first = Aabb::point(*it.next()?);
        Some(it.fold(first, |b, p| b.enlarge(p)))
    }

    #[inline]
    pub fn contains(&self, p: &Point3) -> bool {
        self.min.x <= p.x
            && p.x <= self.max.x
            && self.min.y <= p.y
            && p.y <= self.max.y
            && self.min.z <= p.z
            && p.z <= self.max.z
    }

    /// True when `other` lies inside `self` (closed).
    pub fn contains_box(&self, other: &Aabb) -> bool {
        self.contains(&other.min) && self.contains(&other.max)
    }

    /// Smallest box containing `self` and `p`.
    #[inline]
    #[must_use]
    pub fn enlarge(&self, p: &Point3) -> Aabb {
        Aabb {
            min: self.min.zip_with(*p, f64::min),
            max: self.max.zip_with(*p, f64::max),
        }
    }

    /// Smallest box containing both boxes.
    #[inline]
    #[must_use]
    pub fn union(&self, other: &Aabb) -> Aabb {
        Aabb {
            min: self.min.zip_with(other.min, f64::min),
            max: self.max.zip_with(other.max, f64::max),
        }
    }

    pub fn extent(&self, axis: Axis) -> f64 {
        self.max.coord(axis) - self.min.coord(axis)
    }

    pub fn center(&self) -> Point3 {
        Point3::new(
            (self.min.x + self.max.x) * 0.5,
            (self.min.y + self.max.y) * 0.5,
            (self.min.z + self.max.z) * 0.5,
        )
    }

    pub fn volume(&self) -> f64 {
        self.extent(Axis::X) * self.extent(Axis::Y) * self.extent(Axis::Z)
    }

    pub fn surface_area(&self) -> f64 {
        let (w, h, d) = (
            self.extent(Axis::X),
            self.extent(Axis::Y),
            self.extent(Axis::Z),
        );
        2.0 * (w * h + w * d + h * d)
    }

    /// Cuts the box at `coordinate` on `axis`, returning the low and high halves.
    pub fn split_at(&self, axis: Axis, coordinate: f64) -> (Aabb, Aabb) {
        let low = Aabb {
            min: self.min,
            max: self.max.with_coord(axis, coordinate),
        };
        let high = Aabb {
            min: self.min.with_coord(axis, coordinate),
            max: self.max,
        };
        (low, high)
    }

    /// Squared minimum distance between the two boxes.
    #[inline]
    pub fn min_distance_sq(&self, other: &Aabb) -> f64 {
        let gx = axis_gap(self.min.x, self.max.x, other.min.x, other.max.x);
        let gy = axis_gap(self.min.y, self.max.y, other.min.y, other.max.y);
        let gz = axis_gap(self.min.z, self.max.z, other.min.z, other.max.z);
        gx * gx + gy * gy + gz * gz
    }
}

#[inline]
fn axis_gap(a_min: f64, a_max: f64, b_min: f64, b_max: f64) -> f64 {
    if b_min > a_max {
        b_min - a_max
    } else if a_min > b_max {
        a_min - b_max
    } else {
        0.0
    }
}

/// Minimum Euclidean distance between any point of `a` and any point of `b`.
#[inline]
pub fn min_distance_boxes(a: &Aabb, b: &Aabb) -> f64 {
    a.min_distance_sq(b).sqrt()
}

impl fmt::Display for Aabb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} .. {}]", self.min, self.max)
    }
}
