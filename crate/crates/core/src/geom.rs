//! Planar geometry primitives shared by every pipeline stage.
//!
//! Orientation and in-circle tests delegate to adaptive-precision
//! predicates so that half-integer lattice coordinates (which are
//! frequently collinear and cocircular) are decided exactly.

use serde::{Deserialize, Serialize};

/// A point in pixel-unit coordinates (pixel centers at integers, y up).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeomPoint {
    pub x: f64,
    pub y: f64,
}

impl GeomPoint {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: Self) -> f64 {
        self.distance_squared(other).sqrt()
    }

    pub fn distance_squared(self, other: Self) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn midpoint(self, other: Self) -> Self {
        Self::new((self.x + other.x) / 2.0, (self.y + other.y) / 2.0)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Hashable identity key. Normalizes `-0.0` so that points compared
    /// equal by IEEE rules share a key.
    pub fn key(self) -> PointKey {
        PointKey {
            x: (self.x + 0.0).to_bits(),
            y: (self.y + 0.0).to_bits(),
        }
    }
}

/// Bit-level identity of a point, usable as a hash-map key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointKey {
    x: u64,
    y: u64,
}

fn coord(p: GeomPoint) -> robust::Coord<f64> {
    robust::Coord { x: p.x, y: p.y }
}

/// Exact orientation test: positive if `a`, `b`, `c` wind counterclockwise,
/// negative if clockwise, zero if collinear.
pub fn orient2d(a: GeomPoint, b: GeomPoint, c: GeomPoint) -> f64 {
    robust::orient2d(coord(a), coord(b), coord(c))
}

/// Exact in-circle test: positive if `d` lies strictly inside the circle
/// through `a`, `b`, `c` (counterclockwise), negative if strictly outside,
/// zero if cocircular.
pub fn incircle(a: GeomPoint, b: GeomPoint, c: GeomPoint, d: GeomPoint) -> f64 {
    robust::incircle(coord(a), coord(b), coord(c), coord(d))
}

/// Twice the signed area of a closed polygon (positive when
/// counterclockwise). The closing edge from the last point back to the
/// first is implied.
pub fn signed_area2(points: &[GeomPoint]) -> f64 {
    let n = points.len();
    if n < 3 {
        return 0.0;
    }
    let mut acc = 0.0;
    for i in 0..n {
        let a = points[i];
        let b = points[(i + 1) % n];
        acc += a.x * b.y - b.x * a.y;
    }
    acc
}

/// Signed area of a closed polygon.
pub fn signed_area(points: &[GeomPoint]) -> f64 {
    signed_area2(points) / 2.0
}

/// Perimeter of a closed polygon (closing edge included).
pub fn perimeter(points: &[GeomPoint]) -> f64 {
    let n = points.len();
    if n < 2 {
        return 0.0;
    }
    (0..n)
        .map(|i| points[i].distance(points[(i + 1) % n]))
        .sum()
}

/// Area-weighted centroid of a simple closed polygon. `None` when the
/// enclosed area is zero.
pub fn polygon_centroid(points: &[GeomPoint]) -> Option<GeomPoint> {
    let a2 = signed_area2(points);
    if a2 == 0.0 {
        return None;
    }
    let n = points.len();
    let mut cx = 0.0;
    let mut cy = 0.0;
    for i in 0..n {
        let p = points[i];
        let q = points[(i + 1) % n];
        let w = p.x * q.y - q.x * p.y;
        cx += (p.x + q.x) * w;
        cy += (p.y + q.y) * w;
    }
    Some(GeomPoint::new(cx / (3.0 * a2), cy / (3.0 * a2)))
}

/// Distance from `p` to the closed segment `ab` (clamped to the endpoints).
pub fn point_segment_distance(p: GeomPoint, a: GeomPoint, b: GeomPoint) -> f64 {
    let abx = b.x - a.x;
    let aby = b.y - a.y;
    let len2 = abx * abx + aby * aby;
    if len2 == 0.0 {
        return p.distance(a);
    }
    let t = ((p.x - a.x) * abx + (p.y - a.y) * aby) / len2;
    let t = t.clamp(0.0, 1.0);
    let proj = GeomPoint::new(a.x + t * abx, a.y + t * aby);
    p.distance(proj)
}

fn on_segment(a: GeomPoint, b: GeomPoint, p: GeomPoint) -> bool {
    // assumes a, b, p collinear
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// True when segments `ab` and `cd` share at least one point, endpoints
/// included.
pub fn segments_intersect(a: GeomPoint, b: GeomPoint, c: GeomPoint, d: GeomPoint) -> bool {
    let d1 = orient2d(c, d, a);
    let d2 = orient2d(c, d, b);
    let d3 = orient2d(a, b, c);
    let d4 = orient2d(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(c, d, a))
        || (d2 == 0.0 && on_segment(c, d, b))
        || (d3 == 0.0 && on_segment(a, b, c))
        || (d4 == 0.0 && on_segment(a, b, d))
}

/// Winding number of `p` with respect to a closed polygon. Positive for
/// counterclockwise enclosure. A point exactly on the boundary may land
/// on either side; callers that care must test boundary membership first.
pub fn winding_number(p: GeomPoint, polygon: &[GeomPoint]) -> i32 {
    let n = polygon.len();
    let mut wn = 0;
    for i in 0..n {
        let a = polygon[i];
        let b = polygon[(i + 1) % n];
        if a.y <= p.y {
            if b.y > p.y && orient2d(a, b, p) > 0.0 {
                wn += 1;
            }
        } else if b.y <= p.y && orient2d(a, b, p) < 0.0 {
            wn -= 1;
        }
    }
    wn
}
