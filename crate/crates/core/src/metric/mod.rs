//! The discrete LFPP metric: exponentiated-field vertex weights on the
//! 8-neighbor lattice, shortest-path distances and geodesics, annulus
//! across/around distances, and the left-right crossing normalization.

mod annulus;
mod dijkstra;

pub use annulus::{distance_across, distance_around, AnnulusSpec};

use crate::error::{Error, Result};
use crate::field::{sample_field, GridField, MollifierSpec, SamplerConfig};
use crate::geom::Point;
use serde::{Deserialize, Serialize};

/// Exponentiated-field weights `w[v] = exp(xi * field[v])`.
#[derive(Debug, Clone)]
pub struct WeightField {
    field: GridField,
    xi: f64,
    weights: Vec<f64>,
}

impl WeightField {
    pub fn xi(&self) -> f64 {
        self.xi
    }

    /// Mollification scale of the underlying field, when known.
    pub fn epsilon(&self) -> Option<f64> {
        self.field.mollified_epsilon
    }

    pub fn field(&self) -> &GridField {
        &self.field
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Pointwise exponentiation of the (mollified) field.
pub fn build_weights(mollified: &GridField, xi: f64) -> Result<WeightField> {
    if !(xi.is_finite() && xi >= 0.0) {
        return Err(Error::config("xi must be a finite non-negative real"));
    }
    let mut weights = Vec::with_capacity(mollified.values().len());
    for &v in mollified.values() {
        let e = xi * v;
        if e > 700.0 {
            return Err(Error::overflow(format!(
                "xi * field = {e} would overflow exp; weights degenerate"
            )));
        }
        weights.push(e.exp());
    }
    Ok(WeightField {
        field: mollified.clone(),
        xi,
        weights,
    })
}

/// The weighted 8-neighbor lattice graph. Edge weights average the two
/// endpoint vertex weights and scale by the Euclidean step length, so a path
/// sum is the trapezoidal quadrature of `exp(xi h) |P'|` along the path.
/// An optional vertex mask restricts the graph to a sub-region; distances on
/// the masked graph are internal metrics and can only grow as the mask
/// shrinks.
#[derive(Debug, Clone)]
pub struct LatticeNetwork {
    weight_field: WeightField,
    mask: Option<Vec<bool>>,
}

impl LatticeNetwork {
    pub fn new(weight_field: WeightField) -> Self {
        LatticeNetwork {
            weight_field,
            mask: None,
        }
    }

    pub fn with_mask(weight_field: WeightField, mask: Vec<bool>) -> Result<Self> {
        let n = weight_field.field.n();
        if mask.len() != n * n {
            return Err(Error::config("mask length must equal vertex count"));
        }
        Ok(LatticeNetwork {
            weight_field,
            mask: Some(mask),
        })
    }

    /// Replaces the mask, keeping the weights.
    pub fn masked(&self, mask: Vec<bool>) -> Result<Self> {
        Self::with_mask(self.weight_field.clone(), mask)
    }

    pub fn weight_field(&self) -> &WeightField {
        &self.weight_field
    }

    pub fn grid(&self) -> &GridField {
        &self.weight_field.field
    }

    pub fn n(&self) -> usize {
        self.weight_field.field.n()
    }

    pub fn spacing(&self) -> f64 {
        self.weight_field.field.spacing()
    }

    #[inline]
    pub fn unmasked(&self, v: usize) -> bool {
        self.mask.as_ref().map_or(true, |m| m[v])
    }

    /// Symmetric edge weight between adjacent vertices.
    pub fn edge_weight(&self, u: usize, v: usize) -> f64 {
        let n = self.n();
        let (ux, uy) = ((u % n) as isize, (u / n) as isize);
        let (vx, vy) = ((v % n) as isize, (v / n) as isize);
        let (dx, dy) = ((ux - vx).abs(), (uy - vy).abs());
        assert!(dx <= 1 && dy <= 1 && dx + dy > 0, "vertices not adjacent");
        let step = if dx + dy == 2 {
            std::f64::consts::SQRT_2 * self.spacing()
        } else {
            self.spacing()
        };
        0.5 * (self.weight_field.weights[u] + self.weight_field.weights[v]) * step
    }

    /// Calls `f(neighbor, edge_weight)` for the in-grid neighbors of a
    /// vertex, in a fixed order. The lattice does not wrap even when the
    /// underlying field is periodic; the grid is treated as a box.
    #[inline]
    pub(crate) fn for_each_neighbor(&self, vx: usize, vy: usize, mut f: impl FnMut(usize, f64)) {
        let n = self.n();
        let a = self.spacing();
        let diag = std::f64::consts::SQRT_2 * a;
        let w = &self.weight_field.weights;
        let v = vy * n + vx;
        let wv = w[v];
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
        for &(dx, dy) in &OFFSETS {
            let ux = vx as isize + dx;
            let uy = vy as isize + dy;
            if ux < 0 || uy < 0 || ux >= n as isize || uy >= n as isize {
                continue;
            }
            let u = uy as usize * n + ux as usize;
            let step = if dx != 0 && dy != 0 { diag } else { a };
            f(u, 0.5 * (wv + w[u]) * step);
        }
    }

    pub fn position_of(&self, v: usize) -> Point {
        self.weight_field.field.position_of(v)
    }

    pub fn nearest_vertex(&self, p: Point) -> Result<usize> {
        self.weight_field.field.nearest_vertex(p)
    }
}

/// An extracted shortest path.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Geodesic {
    /// Lattice vertex indices from source to target.
    pub vertices: Vec<usize>,
    pub lfpp_length: f64,
    pub euclidean_length: f64,
    pub endpoints: (Point, Point),
}

impl Geodesic {
    /// Physical-coordinate polyline of the geodesic.
    pub fn polyline(&self, net: &LatticeNetwork) -> Vec<Point> {
        self.vertices.iter().map(|&v| net.position_of(v)).collect()
    }
}

/// Outcome of a point-to-point distance query. Masked-off separation gives
/// `Unreachable` rather than an error, mirroring metrics that take the value
/// infinity.
#[derive(Debug, Clone)]
pub enum PathOutcome {
    Reached { distance: f64, geodesic: Geodesic },
    Unreachable,
}

impl PathOutcome {
    pub fn distance(&self) -> f64 {
        match self {
            PathOutcome::Reached { distance, .. } => *distance,
            PathOutcome::Unreachable => f64::INFINITY,
        }
    }

    pub fn geodesic(&self) -> Option<&Geodesic> {
        match self {
            PathOutcome::Reached { geodesic, .. } => Some(geodesic),
            PathOutcome::Unreachable => None,
        }
    }
}

/// Exact shortest path between the unmasked vertices nearest to `z` and `w`.
pub fn lfpp_distance(net: &LatticeNetwork, z: Point, w: Point) -> Result<PathOutcome> {
    let s = net.nearest_vertex(z)?;
    let t = net.nearest_vertex(w)?;
    if !net.unmasked(s) || !net.unmasked(t) {
        return Err(Error::geometry("query endpoint is masked off"));
    }
    let mut stop = vec![false; net.n() * net.n()];
    stop[t] = true;
    let paths = dijkstra::run(net, &[s], None, Some(&stop));
    if !paths.dist[t].is_finite() {
        return Ok(PathOutcome::Unreachable);
    }
    let vertices = dijkstra::extract_path(&paths, t);
    let mut euclid = 0.0;
    for pair in vertices.windows(2) {
        euclid += net.position_of(pair[0]).dist(net.position_of(pair[1]));
    }
    Ok(PathOutcome::Reached {
        distance: paths.dist[t],
        geodesic: Geodesic {
            lfpp_length: paths.dist[t],
            euclidean_length: euclid,
            endpoints: (net.position_of(s), net.position_of(t)),
            vertices,
        },
    })
}

/// Median left-right crossing weight of the unit square over seeded trials:
/// the normalization constant for rescaling raw LFPP lengths.
pub fn estimate_a_epsilon(
    xi: f64,
    eps: f64,
    sampler: &SamplerConfig,
    trials: usize,
) -> Result<f64> {
    if trials == 0 || trials % 2 == 0 {
        return Err(Error::config("trials must be a positive odd count"));
    }
    let mut crossings = Vec::with_capacity(trials);
    for t in 0..trials {
        let cfg = sampler.with_seed(sampler.seed.wrapping_add(t as u64));
        let field = sample_field(&cfg)?;
        let mollified = crate::field::mollify(&field, &MollifierSpec::heat(eps))?;
        let wf = build_weights(&mollified, xi)?;
        crossings.push(unit_square_crossing(&wf)?);
    }
    crossings.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(crossings[trials / 2])
}

/// Minimal weight of a left-right crossing of `[0,1]^2` on the lattice.
fn unit_square_crossing(wf: &WeightField) -> Result<f64> {
    let grid = &wf.field;
    let n = grid.n();
    let a = grid.spacing();
    let half = a / 2.0;
    let mut mask = vec![false; n * n];
    let mut sources = Vec::new();
    let mut targets = vec![false; n * n];
    let mut any_target = false;
    for v in 0..n * n {
        let p = grid.position_of(v);
        if p.x >= -half && p.x <= 1.0 + half && p.y >= -half && p.y <= 1.0 + half {
            mask[v] = true;
            if (p.x - 0.0).abs() <= half {
                sources.push(v);
            }
            if (p.x - 1.0).abs() <= half {
                targets[v] = true;
                any_target = true;
            }
        }
    }
    if sources.is_empty() || !any_target {
        return Err(Error::geometry(
            "unit square does not fit on the sampled grid",
        ));
    }
    let net = LatticeNetwork::with_mask(wf.clone(), mask)?;
    let paths = dijkstra::run(&net, &sources, None, Some(&targets));
    let best = (0..n * n)
        .filter(|&v| targets[v])
        .map(|v| paths.dist[v])
        .fold(f64::INFINITY, f64::min);
    if best.is_finite() {
        Ok(best)
    } else {
        Err(Error::geometry("left-right crossing unreachable"))
    }
}

pub(crate) use dijkstra::{extract_path, run as dijkstra_run, ShortestPaths};

#[cfg(test)]
pub(crate) fn network_from_values(
    n: usize,
    spacing: f64,
    values: Vec<f64>,
    xi: f64,
) -> LatticeNetwork {
    let field = GridField::new(
        n,
        spacing,
        (0.0, 0.0),
        false,
        crate::field::Normalization::Raw,
        values,
    )
    .unwrap();
    LatticeNetwork::new(build_weights(&field, xi).unwrap())
}
