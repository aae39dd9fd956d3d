//! Annulus-crossing detection for polylines.
//!
//! A path crosses the annulus of a disk `B(z, r)` when it has a maximal
//! sub-path contained in the closed disk whose two endpoints lie on the
//! boundary circle and which reaches the inner circle of radius `r / 2`.
//! Sub-paths are delimited by exact segment/circle intersection points, so
//! the test is invariant under re-parametrization of the polyline. Path
//! endpoints within `tol` of the boundary circle count as lying on it.

use super::{BalancedFamily, Disk};
use crate::geom::{point_segment_dist, segment_circle_params, Point};

/// Per-disk crossing indicators for the family, in `disks` order.
pub fn detect_crossings(path: &[Point], family: &BalancedFamily, tol: f64) -> Vec<bool> {
    family
        .disks
        .iter()
        .map(|d| crosses_disk(path, d, tol))
        .collect()
}

/// Whether the path crosses the annulus `B(z, r) \ B(z, r/2)` of one disk.
pub fn crosses_disk(path: &[Point], disk: &Disk, tol: f64) -> bool {
    if path.len() < 2 {
        return false;
    }
    let c = disk.center();
    let r = disk.r;
    let half = r / 2.0;

    // Walk the polyline, splitting segments at boundary-circle crossings.
    // `piece` tracks the current maximal sub-path inside the closed disk:
    // how it started (on the circle or at a path endpoint) and the minimal
    // distance to the center seen so far.
    struct Piece {
        started_on_circle: bool,
        min_dist: f64,
    }
    let mut piece: Option<Piece> = None;

    let start_inside = path[0].dist(c) <= r;
    if start_inside {
        piece = Some(Piece {
            started_on_circle: (path[0].dist(c) - r).abs() <= tol,
            min_dist: path[0].dist(c),
        });
    }

    for seg in path.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        let mut cuts = segment_circle_params(a, b, c, r);
        cuts.push(1.0);
        let mut t_prev = 0.0;
        for &t in &cuts {
            let p0 = lerp(a, b, t_prev);
            let p1 = lerp(a, b, t);
            let mid = lerp(a, b, 0.5 * (t_prev + t));
            let inside = mid.dist(c) <= r;
            if inside {
                let d = segment_min_dist(p0, p1, c);
                match piece.as_mut() {
                    Some(pc) => pc.min_dist = pc.min_dist.min(d),
                    None => {
                        // entering through the circle at p0
                        piece = Some(Piece {
                            started_on_circle: true,
                            min_dist: d,
                        });
                    }
                }
                let exits_on_circle = t < 1.0 || (p1.dist(c) - r).abs() <= tol;
                let is_path_end = false;
                let _ = is_path_end;
                if t < 1.0 {
                    // leaving through the circle at p1: the piece closes
                    let pc = piece.take().unwrap();
                    if pc.started_on_circle && exits_on_circle && pc.min_dist <= half {
                        return true;
                    }
                }
            } else if piece.is_some() {
                // numerical guard: we thought we were inside but the next
                // sub-segment midpoint is out; close the piece at p0
                let pc = piece.take().unwrap();
                if pc.started_on_circle && (p0.dist(c) - r).abs() <= tol && pc.min_dist <= half {
                    return true;
                }
            }
            t_prev = t;
        }
    }

    // piece still open at the end of the path: ends at the final vertex
    if let Some(pc) = piece {
        let end = *path.last().unwrap();
        if pc.started_on_circle && (end.dist(c) - r).abs() <= tol && pc.min_dist <= half {
            return true;
        }
    }
    false
}

fn lerp(a: Point, b: Point, t: f64) -> Point {
    Point::new(a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t)
}

fn segment_min_dist(a: Point, b: Point, c: Point) -> f64 {
    point_segment_dist(c, a, b)
}
