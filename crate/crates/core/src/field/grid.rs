//! Scalar fields sampled on a square lattice.

use crate::error::{Error, Result};
use crate::geom::Point;
use serde::{Deserialize, Serialize};

/// Whether an additive normalization has been applied to a field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    Raw,
    /// The average of the field over the unit circle about the physical
    /// origin is zero.
    UnitCircleAverageZero,
}

impl Normalization {
    pub fn tag(self) -> u8 {
        match self {
            Normalization::Raw => 0,
            Normalization::UnitCircleAverageZero => 1,
        }
    }

    pub fn from_tag(tag: u8) -> Result<Self> {
        match tag {
            0 => Ok(Normalization::Raw),
            1 => Ok(Normalization::UnitCircleAverageZero),
            t => Err(Error::Format(format!("unknown normalization tag {t}"))),
        }
    }
}

/// A real-valued field on an `n x n` lattice.
///
/// Values are stored row-major: `values[iy * n + ix]` where `ix` runs along
/// the x axis. Vertex `(ix, iy)` sits at the physical point
/// `origin + spacing * (ix, iy)`. Periodic fields wrap on both axes.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    n: usize,
    spacing: f64,
    origin: (f64, f64),
    periodic: bool,
    normalization: Normalization,
    /// Mollification scale of the field, if it is the output of `mollify`.
    pub mollified_epsilon: Option<f64>,
    values: Vec<f64>,
}

impl GridField {
    pub fn new(
        n: usize,
        spacing: f64,
        origin: (f64, f64),
        periodic: bool,
        normalization: Normalization,
        values: Vec<f64>,
    ) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::config(format!(
                "expected {} values for an {n}x{n} grid, got {}",
                n * n,
                values.len()
            )));
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(Error::config("field contains non-finite values"));
        }
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(Error::config("spacing must be positive"));
        }
        Ok(GridField {
            n,
            spacing,
            origin,
            periodic,
            normalization,
            mollified_epsilon: None,
            values,
        })
    }

    /// A field of constant value, mainly useful in tests.
    pub fn constant(
        n: usize,
        spacing: f64,
        origin: (f64, f64),
        periodic: bool,
        value: f64,
    ) -> Self {
        GridField::new(
            n,
            spacing,
            origin,
            periodic,
            Normalization::Raw,
            vec![value; n * n],
        )
        .expect("constant field is valid")
    }

    /// Builds a field by evaluating `f` at every vertex position.
    pub fn from_fn(
        n: usize,
        spacing: f64,
        origin: (f64, f64),
        periodic: bool,
        f: impl Fn(f64, f64) -> f64,
    ) -> Self {
        let mut values = vec![0.0; n * n];
        for iy in 0..n {
            for ix in 0..n {
                let p = Point::new(
                    origin.0 + ix as f64 * spacing,
                    origin.1 + iy as f64 * spacing,
                );
                values[iy * n + ix] = f(p.x, p.y);
            }
        }
        GridField::new(n, spacing, origin, periodic, Normalization::Raw, values)
            .expect("generated field is valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn origin(&self) -> (f64, f64) {
        self.origin
    }

    pub fn periodic(&self) -> bool {
        self.periodic
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub(crate) fn set_normalization(&mut self, tag: Normalization) {
        self.normalization = tag;
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    #[inline]
    pub fn idx(&self, ix: usize, iy: usize) -> usize {
        iy * self.n + ix
    }

    #[inline]
    pub fn get(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.n + ix]
    }

    #[inline]
    pub fn position(&self, ix: usize, iy: usize) -> Point {
        Point::new(
            self.origin.0 + ix as f64 * self.spacing,
            self.origin.1 + iy as f64 * self.spacing,
        )
    }

    #[inline]
    pub fn position_of(&self, v: usize) -> Point {
        self.position(v % self.n, v / self.n)
    }

    /// Nearest lattice vertex to a physical point, or an error when the point
    /// is outside the grid.
    pub fn nearest_vertex(&self, p: Point) -> Result<usize> {
        let fx = (p.x - self.origin.0) / self.spacing;
        let fy = (p.y - self.origin.1) / self.spacing;
        let max = (self.n - 1) as f64;
        if fx < -0.5 || fy < -0.5 || fx > max + 0.5 || fy > max + 0.5 {
            return Err(Error::geometry(format!(
                "point ({}, {}) outside the grid",
                p.x, p.y
            )));
        }
        let ix = fx.round().clamp(0.0, max) as usize;
        let iy = fy.round().clamp(0.0, max) as usize;
        Ok(self.idx(ix, iy))
    }

    /// Bilinear interpolation at a physical point. Periodic fields wrap;
    /// otherwise the point must lie within the grid hull.
    pub fn bilinear(&self, p: Point) -> Result<f64> {
        let fx = (p.x - self.origin.0) / self.spacing;
        let fy = (p.y - self.origin.1) / self.spacing;
        let n = self.n as isize;
        if self.periodic {
            let fx = fx.rem_euclid(self.n as f64);
            let fy = fy.rem_euclid(self.n as f64);
            let ix = fx.floor() as isize;
            let iy = fy.floor() as isize;
            let tx = fx - ix as f64;
            let ty = fy - iy as f64;
            let wrap = |i: isize| -> usize { (i.rem_euclid(n)) as usize };
            let v00 = self.get(wrap(ix), wrap(iy));
            let v10 = self.get(wrap(ix + 1), wrap(iy));
            let v01 = self.get(wrap(ix), wrap(iy + 1));
            let v11 = self.get(wrap(ix + 1), wrap(iy + 1));
            Ok(v00 * (1.0 - tx) * (1.0 - ty)
                + v10 * tx * (1.0 - ty)
                + v01 * (1.0 - tx) * ty
                + v11 * tx * ty)
        } else {
            let max = (self.n - 1) as f64;
            if !(0.0..=max).contains(&fx) || !(0.0..=max).contains(&fy) {
                return Err(Error::geometry(format!(
                    "point ({}, {}) outside the grid",
                    p.x, p.y
                )));
            }
            let ix = (fx.floor() as usize).min(self.n - 2);
            let iy = (fy.floor() as usize).min(self.n - 2);
            let tx = fx - ix as f64;
            let ty = fy - iy as f64;
            let v00 = self.get(ix, iy);
            let v10 = self.get(ix + 1, iy);
            let v01 = self.get(ix, iy + 1);
            let v11 = self.get(ix + 1, iy + 1);
            Ok(v00 * (1.0 - tx) * (1.0 - ty)
                + v10 * tx * (1.0 - ty)
                + v01 * (1.0 - tx) * ty
                + v11 * tx * ty)
        }
    }
}
