//! Small planar geometry helpers shared by the metric and roughness modules.

use serde::{Deserialize, Serialize};

/// A point in physical (not lattice) coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist(self, other: Point) -> f64 {
        ((self.x - other.x).powi(2) + (self.y - other.y).powi(2)).sqrt()
    }

    pub fn dist2(self, other: Point) -> f64 {
        (self.x - other.x).powi(2) + (self.y - other.y).powi(2)
    }

    pub fn sub(self, other: Point) -> Point {
        Point::new(self.x - other.x, self.y - other.y)
    }

    pub fn add(self, other: Point) -> Point {
        Point::new(self.x + other.x, self.y + other.y)
    }

    pub fn scale(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }
}

impl From<(f64, f64)> for Point {
    fn from(p: (f64, f64)) -> Self {
        Point::new(p.0, p.1)
    }
}

/// Distance from `p` to the segment `[a, b]`.
pub fn point_segment_dist(p: Point, a: Point, b: Point) -> f64 {
    let ab = b.sub(a);
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = (p.sub(a).dot(ab) / len2).clamp(0.0, 1.0);
    p.dist(a.add(ab.scale(t)))
}

/// Parameters `t` in `(0, 1)` where the segment `a + t (b - a)` meets the
/// circle of radius `r` about `c`, sorted ascending.
pub fn segment_circle_params(a: Point, b: Point, c: Point, r: f64) -> Vec<f64> {
    let d = b.sub(a);
    let f = a.sub(c);
    let qa = d.dot(d);
    let qb = 2.0 * f.dot(d);
    let qc = f.dot(f) - r * r;
    let mut out = Vec::new();
    if qa == 0.0 {
        return out;
    }
    let disc = qb * qb - 4.0 * qa * qc;
    if disc < 0.0 {
        return out;
    }
    let sq = disc.sqrt();
    for t in [(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)] {
        if t > 0.0 && t < 1.0 {
            out.push(t);
        }
    }
    out.dedup();
    out
}

/// Total signed angle swept by `p - center` along a closed polygon.
///
/// Returns approximately `2*pi*w` where `w` is the winding number of the
/// polygon around `center`.
pub fn winding_angle(cycle: &[Point], center: Point) -> f64 {
    let mut total = 0.0;
    let n = cycle.len();
    for i in 0..n {
        let a = cycle[i].sub(center);
        let b = cycle[(i + 1) % n].sub(center);
        let cross = a.x * b.y - a.y * b.x;
        let dot = a.dot(b);
        total += cross.atan2(dot);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segment_circle_chord() {
        let ts = segment_circle_params(
            Point::new(-2.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(0.0, 0.0),
            1.0,
        );
        assert_eq!(ts.len(), 2);
        assert!((ts[0] - 0.25).abs() < 1e-12);
        assert!((ts[1] - 0.75).abs() < 1e-12);
    }

    #[test]
    fn winding_of_square() {
        let sq = vec![
            Point::new(1.0, 1.0),
            Point::new(-1.0, 1.0),
            Point::new(-1.0, -1.0),
            Point::new(1.0, -1.0),
        ];
        let w = winding_angle(&sq, Point::new(0.0, 0.0));
        assert!((w - 2.0 * std::f64::consts::PI).abs() < 1e-12);
        let w_out = winding_angle(&sq, Point::new(5.0, 0.0));
        assert!(w_out.abs() < 1e-12);
    }
}
