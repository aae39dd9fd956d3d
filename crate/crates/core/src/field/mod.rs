//! Gaussian free field approximants on the lattice and the field-level
//! operations built on them: mollification, circle averages, the Markov
//! decomposition into an interior zero-boundary part plus a harmonic part,
//! and Dirichlet energy.

mod fft;
mod grid;
pub mod io;
mod markov;
mod mollify;
mod sampler;

pub use grid::{GridField, Normalization};
pub use markov::{harmonic_fluctuation, markov_decompose, Decomposition};
pub use mollify::{mollify, KernelKind, MollifierSpec};
pub use sampler::{predicted_difference_variance, sample_field, SamplerConfig, SamplerMode};

use crate::error::{Error, Result};
use crate::geom::Point;

/// Average of the field over the circle of radius `r` about `z`, by
/// trapezoidal quadrature of bilinearly interpolated values at
/// `max(64, ceil(2 pi r / spacing))` equispaced angles.
pub fn circle_average(field: &GridField, z: Point, r: f64) -> Result<f64> {
    let a = field.spacing();
    if r < 4.0 * a {
        return Err(Error::geometry(format!(
            "circle radius {r} below 4 lattice spacings ({})",
            4.0 * a
        )));
    }
    let m = 64usize.max((2.0 * std::f64::consts::PI * r / a).ceil() as usize);
    let mut sum = 0.0;
    for k in 0..m {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
        let p = Point::new(z.x + r * theta.cos(), z.y + r * theta.sin());
        sum += field.bilinear(p)?;
    }
    Ok(sum / m as f64)
}

/// Finite-difference Dirichlet energy: the sum over all forward-difference
/// pairs of squared increments. The `spacing^2` area element cancels the
/// `1/spacing^2` in the squared gradient, so the sum is taken as-is; the
/// energy is invariant under rescaling the grid.
pub fn dirichlet_energy(f: &GridField) -> f64 {
    let n = f.n();
    let v = f.values();
    let mut total = 0.0;
    for iy in 0..n {
        for ix in 0..n {
            let c = v[iy * n + ix];
            if ix + 1 < n {
                total += (v[iy * n + ix + 1] - c).powi(2);
            } else if f.periodic() {
                total += (v[iy * n] - c).powi(2);
            }
            if iy + 1 < n {
                total += (v[(iy + 1) * n + ix] - c).powi(2);
            } else if f.periodic() {
                total += (v[ix] - c).powi(2);
            }
        }
    }
    total
}

/// Relative entropy of the field law shifted by `f` with respect to the
/// unshifted law: half the Dirichlet energy of `f`.
pub fn relative_entropy(f: &GridField) -> f64 {
    0.5 * dirichlet_energy(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_average_of_constant() {
        let f = GridField::constant(64, 0.05, (-1.6, -1.6), false, 3.25);
        let avg = circle_average(&f, Point::new(0.0, 0.0), 1.0).unwrap();
        assert!((avg - 3.25).abs() < 1e-12);
    }

    #[test]
    fn circle_average_of_odd_field_vanishes() {
        let f = GridField::from_fn(128, 0.025, (-1.6, -1.6), false, |x, _| x);
        for r in [0.2, 0.7, 1.3] {
            let avg = circle_average(&f, Point::new(0.0, 0.0), r).unwrap();
            assert!(avg.abs() < 1e-9, "r={r}: {avg}");
        }
    }

    #[test]
    fn circle_average_of_squared_radius() {
        // f(w) = |w - z|^2 averages to exactly r^2 over the circle of radius
        // r. The bilinear interpolation bias is O(spacing^2), so the grid is
        // kept fine enough for the 1e-6 relative tolerance.
        let z = Point::new(0.1, -0.2);
        let f = GridField::from_fn(4096, 2.8 / 4095.0, (-1.4, -1.4), false, |x, y| {
            (x - z.x).powi(2) + (y - z.y).powi(2)
        });
        let r = 0.8;
        let avg = circle_average(&f, z, r).unwrap();
        assert!((avg - r * r).abs() < 1e-6 * r * r, "avg={avg}");
    }

    #[test]
    fn circle_average_requires_resolution() {
        let f = GridField::constant(16, 0.1, (0.0, 0.0), false, 0.0);
        assert!(circle_average(&f, Point::new(0.8, 0.8), 0.2).is_err());
    }

    #[test]
    fn circle_leaving_grid_is_an_error() {
        let f = GridField::constant(32, 0.1, (0.0, 0.0), false, 0.0);
        assert!(circle_average(&f, Point::new(0.5, 0.5), 1.0).is_err());
    }

    #[test]
    fn dirichlet_energy_of_constant_is_zero() {
        let f = GridField::constant(32, 0.1, (0.0, 0.0), false, 7.0);
        assert_eq!(dirichlet_energy(&f), 0.0);
    }

    #[test]
    fn dirichlet_energy_of_linear_ramp_on_unit_square() {
        // f(x, y) = x on [0,1]^2 has integral |grad f|^2 = 1. The forward
        // difference sum is n/(n-1), so a fine grid lands within 1e-3.
        let n = 2048;
        let h = 1.0 / (n as f64 - 1.0);
        let f = GridField::from_fn(n, h, (0.0, 0.0), false, |x, _| x);
        let e = dirichlet_energy(&f);
        assert!((e - 1.0).abs() < 1e-3, "e={e}");
    }

    #[test]
    fn dirichlet_energy_scale_invariance() {
        let n = 64;
        let f = GridField::from_fn(n, 0.02, (0.0, 0.0), false, |x, y| (3.0 * x).sin() + y * y);
        // Same samples on a grid rescaled by 5: f(. / 5) on spacing 0.1.
        let g = GridField::from_fn(n, 0.1, (0.0, 0.0), false, |x, y| {
            (3.0 * (x / 5.0)).sin() + (y / 5.0) * (y / 5.0)
        });
        let ef = dirichlet_energy(&f);
        let eg = dirichlet_energy(&g);
        assert!((ef - eg).abs() <= 1e-6 * ef.abs().max(1.0), "{ef} vs {eg}");
    }

    #[test]
    fn relative_entropy_is_half_energy() {
        let f = GridField::from_fn(16, 0.1, (0.0, 0.0), false, |x, y| x * y);
        assert_eq!(relative_entropy(&f), 0.5 * dirichlet_energy(&f));
    }
}
