//! Across and around distances of an annulus.
//!
//! `distance_across` is the multi-source shortest path between the discrete
//! inner and outer boundary circles, restricted to the closed annulus.
//! `distance_around` is the shortest separating cycle, computed by cutting
//! the annulus along the rightward radial slit from the center: slit
//! vertices are duplicated into the two sides of the cut and the minimum
//! over slit vertices of the twin-to-twin distance is the cycle length.
//!
//! Both computations run in a window around the annulus, so their cost does
//! not depend on the full grid size. Discrete boundary circles are the
//! vertices within half a lattice spacing of the ideal circle.

use super::LatticeNetwork;
use crate::error::{Error, Result};
use crate::geom::Point;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AnnulusSpec {
    pub center: Point,
    pub inner: f64,
    pub outer: f64,
}

impl AnnulusSpec {
    pub fn new(center: Point, inner: f64, outer: f64) -> Self {
        AnnulusSpec {
            center,
            inner,
            outer,
        }
    }

    pub fn validate(&self, spacing: f64) -> Result<()> {
        if !(self.inner.is_finite() && self.outer.is_finite() && 0.0 < self.inner) {
            return Err(Error::geometry("annulus radii must be positive"));
        }
        if self.inner >= self.outer {
            return Err(Error::geometry("annulus requires inner < outer"));
        }
        if self.outer - self.inner < 4.0 * spacing {
            return Err(Error::geometry(format!(
                "annulus width {} below 4 lattice spacings",
                self.outer - self.inner
            )));
        }
        if self.inner < 2.0 * spacing {
            return Err(Error::geometry(format!(
                "inner radius {} below 2 lattice spacings",
                self.inner
            )));
        }
        Ok(())
    }
}

/// Lattice window holding the annulus, with vertex classification in local
/// coordinates.
struct Window {
    /// grid coordinates of the window's (0, 0) cell
    x0: usize,
    y0: usize,
    w: usize,
    h: usize,
    /// vertex admitted to the annulus graph (annulus band and unmasked)
    allowed: Vec<bool>,
    inner_band: Vec<bool>,
    outer_band: Vec<bool>,
}

impl Window {
    #[inline]
    fn local(&self, lx: usize, ly: usize) -> usize {
        ly * self.w + lx
    }

    #[inline]
    fn grid_vertex(&self, n: usize, local: usize) -> usize {
        let lx = local % self.w;
        let ly = local / self.w;
        (self.y0 + ly) * n + (self.x0 + lx)
    }
}

fn build_window(net: &LatticeNetwork, a: &AnnulusSpec) -> Result<Window> {
    let n = net.n();
    let grid = net.grid();
    let spacing = net.spacing();
    a.validate(spacing)?;
    let half = spacing / 2.0;
    let reach = a.outer + half;

    let origin = grid.origin();
    let to_cell = |coord: f64, orig: f64| -> f64 { (coord - orig) / spacing };
    let x_lo = to_cell(a.center.x - reach, origin.0).floor() as isize - 1;
    let x_hi = to_cell(a.center.x + reach, origin.0).ceil() as isize + 1;
    let y_lo = to_cell(a.center.y - reach, origin.1).floor() as isize - 1;
    let y_hi = to_cell(a.center.y + reach, origin.1).ceil() as isize + 1;
    if x_lo < 0 || y_lo < 0 || x_hi >= n as isize || y_hi >= n as isize {
        return Err(Error::geometry(
            "annulus (plus half-spacing band) leaves the grid",
        ));
    }
    let (x0, y0) = (x_lo as usize, y_lo as usize);
    let w = (x_hi - x_lo + 1) as usize;
    let h = (y_hi - y_lo + 1) as usize;

    let mut win = Window {
        x0,
        y0,
        w,
        h,
        allowed: vec![false; w * h],
        inner_band: vec![false; w * h],
        outer_band: vec![false; w * h],
    };
    let mut has_inner = false;
    let mut has_outer = false;
    for ly in 0..h {
        for lx in 0..w {
            let v = (y0 + ly) * n + (x0 + lx);
            if !net.unmasked(v) {
                continue;
            }
            let rho = grid.position_of(v).dist(a.center);
            if rho < a.inner - half || rho > a.outer + half {
                continue;
            }
            let l = win.local(lx, ly);
            win.allowed[l] = true;
            if (rho - a.inner).abs() <= half {
                win.inner_band[l] = true;
                has_inner = true;
            }
            if (rho - a.outer).abs() <= half {
                win.outer_band[l] = true;
                has_outer = true;
            }
        }
    }
    if !has_inner || !has_outer {
        return Err(Error::geometry(
            "annulus bands contain no lattice vertices (unresolvable annulus)",
        ));
    }
    Ok(win)
}

#[derive(Copy, Clone, PartialEq)]
struct Entry {
    cost: f64,
    id: u32,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .partial_cmp(&self.cost)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.id.cmp(&self.id))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Dijkstra over an abstract id space. Returns the distance to the first
/// settled target, or infinity.
fn generic_dijkstra(
    total: usize,
    sources: &[u32],
    mut neighbors: impl FnMut(u32, &mut dyn FnMut(u32, f64)),
    is_target: impl Fn(u32) -> bool,
) -> f64 {
    let mut dist = vec![f64::INFINITY; total];
    let mut settled = vec![false; total];
    let mut heap = BinaryHeap::new();
    for &s in sources {
        if dist[s as usize] > 0.0 {
            dist[s as usize] = 0.0;
            heap.push(Entry { cost: 0.0, id: s });
        }
    }
    while let Some(Entry { cost, id }) = heap.pop() {
        let v = id as usize;
        if settled[v] {
            continue;
        }
        settled[v] = true;
        if is_target(id) {
            return cost;
        }
        neighbors(id, &mut |u, w| {
            let ui = u as usize;
            if settled[ui] {
                return;
            }
            let next = cost + w;
            if next < dist[ui] {
                dist[ui] = next;
                heap.push(Entry { cost: next, id: u });
            }
        });
    }
    f64::INFINITY
}

const OFFSETS: [(isize, isize); 8] = [
    (-1, -1),
    (0, -1),
    (1, -1),
    (-1, 0),
    (1, 0),
    (-1, 1),
    (0, 1),
    (1, 1),
];

/// Distance between the inner and outer boundary circles through the closed
/// annulus. Infinite when masking separates them.
pub fn distance_across(net: &LatticeNetwork, a: &AnnulusSpec) -> Result<f64> {
    let win = build_window(net, a)?;
    let n = net.n();
    let total = win.w * win.h;
    let sources: Vec<u32> = (0..total)
        .filter(|&l| win.inner_band[l] && win.allowed[l])
        .map(|l| l as u32)
        .collect();
    let weights = net.weight_field().weights();
    let spacing = net.spacing();
    let diag = std::f64::consts::SQRT_2 * spacing;
    let dist = generic_dijkstra(
        total,
        &sources,
        |id, push| {
            let l = id as usize;
            let lx = l % win.w;
            let ly = l / win.w;
            let v = win.grid_vertex(n, l);
            for &(dx, dy) in &OFFSETS {
                let ux = lx as isize + dx;
                let uy = ly as isize + dy;
                if ux < 0 || uy < 0 || ux >= win.w as isize || uy >= win.h as isize {
                    continue;
                }
                let lu = win.local(ux as usize, uy as usize);
                if !win.allowed[lu] {
                    continue;
                }
                let u = win.grid_vertex(n, lu);
                let step = if dx != 0 && dy != 0 { diag } else { spacing };
                push(lu as u32, 0.5 * (weights[v] + weights[u]) * step);
            }
        },
        |id| win.outer_band[id as usize],
    );
    Ok(dist)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Below,
    Above,
}

/// Length of the shortest cycle in the annulus separating its boundaries.
pub fn distance_around(net: &LatticeNetwork, a: &AnnulusSpec) -> Result<f64> {
    let win = build_window(net, a)?;
    let n = net.n();
    let grid = net.grid();
    let spacing = net.spacing();
    let origin = grid.origin();

    // The slit runs rightward from the center along the lattice row nearest
    // to it. Every edge crossing the slit passes through a slit vertex, so
    // duplicating slit vertices into below/above copies cuts exactly the
    // winding cycles.
    let slit_row_grid = ((a.center.y - origin.1) / spacing).round() as isize;
    if slit_row_grid < win.y0 as isize || slit_row_grid >= (win.y0 + win.h) as isize {
        return Err(Error::geometry("annulus center row leaves the window"));
    }
    let slit_ly = (slit_row_grid - win.y0 as isize) as usize;
    let total = win.w * win.h;
    let mut is_slit = vec![false; total];
    let mut slit_vertices = Vec::new();
    for lx in 0..win.w {
        let l = win.local(lx, slit_ly);
        if !win.allowed[l] {
            continue;
        }
        let p = grid.position_of(win.grid_vertex(n, l));
        if p.x > a.center.x {
            is_slit[l] = true;
            slit_vertices.push(l);
        }
    }
    if slit_vertices.is_empty() {
        return Err(Error::geometry("slit contains no annulus vertices"));
    }

    let weights = net.weight_field().weights();
    let diag = std::f64::consts::SQRT_2 * spacing;

    // doubled id space: l encodes (vertex, Below); l + total encodes the
    // Above copy for slit vertices
    let encode = |l: usize, side: Side| -> u32 {
        match side {
            Side::Below => l as u32,
            Side::Above => (l + total) as u32,
        }
    };

    let mut best = f64::INFINITY;
    for &s in &slit_vertices {
        let source = [encode(s, Side::Below)];
        let target = encode(s, Side::Above);
        let d = generic_dijkstra(
            2 * total,
            &source,
            |id, push| {
                let raw = id as usize;
                let (l, side) = if raw >= total {
                    (raw - total, Side::Above)
                } else {
                    (raw, Side::Below)
                };
                let lx = l % win.w;
                let ly = l / win.w;
                let v = win.grid_vertex(n, l);
                for &(dx, dy) in &OFFSETS {
                    let ux = lx as isize + dx;
                    let uy = ly as isize + dy;
                    if ux < 0 || uy < 0 || ux >= win.w as isize || uy >= win.h as isize {
                        continue;
                    }
                    let lu = win.local(ux as usize, uy as usize);
                    if !win.allowed[lu] {
                        continue;
                    }
                    let u = win.grid_vertex(n, lu);
                    let step = if dx != 0 && dy != 0 { diag } else { spacing };
                    let wgt = 0.5 * (weights[v] + weights[u]) * step;
                    let uy = uy as usize;

                    let target_id: Option<u32> = if is_slit[lu] {
                        if is_slit[l] {
                            // travel along the slit keeps the side
                            Some(encode(lu, side))
                        } else if ly > slit_ly {
                            Some(encode(lu, Side::Above))
                        } else if ly < slit_ly {
                            Some(encode(lu, Side::Below))
                        } else {
                            // a same-row non-slit annulus vertex cannot abut
                            // the slit when inner >= 2 spacings
                            None
                        }
                    } else if is_slit[l] {
                        // leaving the slit only toward this copy's side
                        if (uy > slit_ly && side == Side::Above)
                            || (uy < slit_ly && side == Side::Below)
                        {
                            Some(lu as u32)
                        } else {
                            None
                        }
                    } else {
                        Some(lu as u32)
                    };
                    if let Some(t) = target_id {
                        push(t, wgt);
                    }
                }
            },
            |id| id == target,
        );
        best = best.min(d);
    }
    Ok(best)
}
