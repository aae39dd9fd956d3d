//! Discrete convolution of a lattice field with a heat kernel, optionally
//! truncated by a radial bump.
//!
//! The `heat` kernel is the sampled Gaussian with per-coordinate variance
//! `epsilon^2 / 2`, truncated far in its tail and renormalized to unit mass.
//! The `local-heat` kernel multiplies the same Gaussian by a smooth bump that
//! is 1 inside `bump_inner` and 0 outside `bump_outer`; its weights are used
//! as-is, so the output at a vertex depends only on field values within
//! `bump_outer` of it and the (super-polynomially small) mass deficit is kept.

use crate::error::{Error, Result};
use crate::field::fft::fft2;
use crate::field::grid::GridField;
use rayon::prelude::*;
use rustfft::num_complex::Complex;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelKind {
    Heat,
    LocalHeat,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MollifierSpec {
    pub epsilon: f64,
    pub kernel: KernelKind,
    /// Radius inside which the bump is identically 1. Default `sqrt(eps)/2`.
    pub bump_inner: f64,
    /// Support radius of the bump. Default `sqrt(eps)`.
    pub bump_outer: f64,
}

impl MollifierSpec {
    pub fn heat(epsilon: f64) -> Self {
        MollifierSpec {
            epsilon,
            kernel: KernelKind::Heat,
            bump_inner: epsilon.sqrt() / 2.0,
            bump_outer: epsilon.sqrt(),
        }
    }

    pub fn local_heat(epsilon: f64) -> Self {
        MollifierSpec {
            epsilon,
            kernel: KernelKind::LocalHeat,
            ..MollifierSpec::heat(epsilon)
        }
    }

    fn validate(&self, spacing: f64) -> Result<()> {
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(Error::config("epsilon must be positive"));
        }
        if self.epsilon < 2.0 * spacing {
            return Err(Error::config(format!(
                "epsilon {} below grid resolution (needs at least 2 * spacing = {})",
                self.epsilon,
                2.0 * spacing
            )));
        }
        if !(0.0 < self.bump_inner && self.bump_inner < self.bump_outer) {
            return Err(Error::config("bump radii must satisfy 0 < inner < outer"));
        }
        Ok(())
    }

    /// Truncation radius of the discrete kernel, in physical units.
    fn support_radius(&self) -> f64 {
        let sigma = self.epsilon / std::f64::consts::SQRT_2;
        match self.kernel {
            KernelKind::Heat => 8.0 * sigma,
            KernelKind::LocalHeat => self.bump_outer,
        }
    }
}

/// Quintic smoothstep bump: 1 on `[0, inner]`, 0 on `[outer, inf)`.
fn bump(rho: f64, inner: f64, outer: f64) -> f64 {
    if rho <= inner {
        1.0
    } else if rho >= outer {
        0.0
    } else {
        let t = (rho - inner) / (outer - inner);
        1.0 - t * t * t * (t * (6.0 * t - 15.0) + 10.0)
    }
}

/// Tabulates the discrete kernel on lattice offsets within the truncation
/// radius. Returns (weights row-major over a (2R+1)^2 window, R, mass).
fn build_kernel(spec: &MollifierSpec, spacing: f64) -> (Vec<f64>, usize, f64) {
    let radius = spec.support_radius();
    let r_cells = (radius / spacing).ceil() as usize;
    let s = spec.epsilon * spec.epsilon / 2.0;
    let norm = 1.0 / (2.0 * PI * s);
    let side = 2 * r_cells + 1;
    let mut weights = vec![0.0; side * side];
    let mut mass = 0.0;
    for dy in 0..side {
        for dx in 0..side {
            let px = (dx as f64 - r_cells as f64) * spacing;
            let py = (dy as f64 - r_cells as f64) * spacing;
            let rho2 = px * px + py * py;
            let rho = rho2.sqrt();
            if rho > radius {
                continue;
            }
            let mut w = norm * (-rho2 / (2.0 * s)).exp() * spacing * spacing;
            if spec.kernel == KernelKind::LocalHeat {
                w *= bump(rho, spec.bump_inner, spec.bump_outer);
            }
            weights[dy * side + dx] = w;
            mass += w;
        }
    }
    if spec.kernel == KernelKind::Heat {
        for w in weights.iter_mut() {
            *w /= mass;
        }
        mass = 1.0;
    }
    (weights, r_cells, mass)
}

/// Convolves the field with the kernel described by `spec`.
///
/// Periodic fields are convolved circularly (exact on the torus); bounded
/// fields treat values outside the grid as zero, which is the natural
/// extension of a zero-boundary field.
pub fn mollify(field: &GridField, spec: &MollifierSpec) -> Result<GridField> {
    spec.validate(field.spacing())?;
    let n = field.n();
    let (weights, r_cells, _mass) = build_kernel(spec, field.spacing());
    if field.periodic() && 2 * r_cells + 1 > n {
        return Err(Error::config(format!(
            "kernel support ({} cells) exceeds the periodic domain ({n} cells)",
            2 * r_cells + 1
        )));
    }
    let values = if field.periodic() {
        convolve_fft(field, &weights, r_cells)
    } else {
        convolve_direct(field, &weights, r_cells)
    };
    let mut out = GridField::new(
        n,
        field.spacing(),
        field.origin(),
        field.periodic(),
        field.normalization(),
        values,
    )?;
    out.mollified_epsilon = Some(spec.epsilon);
    Ok(out)
}

fn convolve_fft(field: &GridField, weights: &[f64], r_cells: usize) -> Vec<f64> {
    let n = field.n();
    let side = 2 * r_cells + 1;
    let mut kbuf = vec![Complex::default(); n * n];
    for dy in 0..side {
        for dx in 0..side {
            let w = weights[dy * side + dx];
            if w == 0.0 {
                continue;
            }
            let ox = (dx as isize - r_cells as isize).rem_euclid(n as isize) as usize;
            let oy = (dy as isize - r_cells as isize).rem_euclid(n as isize) as usize;
            kbuf[oy * n + ox] = Complex::new(w, 0.0);
        }
    }
    let mut fbuf: Vec<Complex<f64>> = field
        .values()
        .iter()
        .map(|&v| Complex::new(v, 0.0))
        .collect();
    fft2(&mut kbuf, n, false);
    fft2(&mut fbuf, n, false);
    let inv_n2 = 1.0 / (n * n) as f64;
    for (f, k) in fbuf.iter_mut().zip(kbuf.iter()) {
        *f = *f * *k * inv_n2;
    }
    fft2(&mut fbuf, n, true);
    fbuf.iter().map(|c| c.re).collect()
}

fn convolve_direct(field: &GridField, weights: &[f64], r_cells: usize) -> Vec<f64> {
    let n = field.n();
    let side = 2 * r_cells + 1;
    let v = field.values();
    let r = r_cells as isize;
    let mut out = vec![0.0; n * n];
    out.par_chunks_mut(n).enumerate().for_each(|(iy, row)| {
        let iy = iy as isize;
        for (ix, slot) in row.iter_mut().enumerate() {
            let ix = ix as isize;
            let mut acc = 0.0;
            let y0 = (iy - r).max(0);
            let y1 = (iy + r).min(n as isize - 1);
            let x0 = (ix - r).max(0);
            let x1 = (ix + r).min(n as isize - 1);
            for jy in y0..=y1 {
                let wrow = &weights[((jy - iy + r) as usize) * side..];
                let vrow = &v[(jy as usize) * n..];
                for jx in x0..=x1 {
                    acc += wrow[(jx - ix + r) as usize] * vrow[jx as usize];
                }
            }
            *slot = acc;
        }
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct_reference(field: &GridField, spec: &MollifierSpec) -> Vec<f64> {
        // Independent direct summation, periodic wrap included.
        let n = field.n() as isize;
        let a = field.spacing();
        let radius = spec.support_radius();
        let r = (radius / a).ceil() as isize;
        let s = spec.epsilon * spec.epsilon / 2.0;
        let norm = 1.0 / (2.0 * PI * s);
        let mut mass = 0.0;
        let mut offsets = Vec::new();
        for dy in -r..=r {
            for dx in -r..=r {
                let rho = ((dx * dx + dy * dy) as f64).sqrt() * a;
                if rho > radius {
                    continue;
                }
                let mut w = norm * (-(rho * rho) / (2.0 * s)).exp() * a * a;
                if spec.kernel == KernelKind::LocalHeat {
                    w *= bump(rho, spec.bump_inner, spec.bump_outer);
                }
                mass += w;
                offsets.push((dx, dy, w));
            }
        }
        let renorm = if spec.kernel == KernelKind::Heat {
            1.0 / mass
        } else {
            1.0
        };
        let mut out = vec![0.0; (n * n) as usize];
        for iy in 0..n {
            for ix in 0..n {
                let mut acc = 0.0;
                for &(dx, dy, w) in &offsets {
                    let jx = if field.periodic() {
                        (ix + dx).rem_euclid(n)
                    } else {
                        let j = ix + dx;
                        if j < 0 || j >= n {
                            continue;
                        }
                        j
                    };
                    let jy = if field.periodic() {
                        (iy + dy).rem_euclid(n)
                    } else {
                        let j = iy + dy;
                        if j < 0 || j >= n {
                            continue;
                        }
                        j
                    };
                    acc += w * field.get(jx as usize, jy as usize);
                }
                out[(iy * n + ix) as usize] = acc * renorm;
            }
        }
        out
    }

    #[test]
    fn heat_kernel_preserves_constants() {
        let f = GridField::constant(64, 3.0 / 64.0, (-1.5, -1.5), true, 4.2);
        let m = mollify(&f, &MollifierSpec::heat(0.25)).unwrap();
        for &v in m.values() {
            assert!((v - 4.2).abs() < 1e-12);
        }
    }

    #[test]
    fn epsilon_below_resolution_rejected() {
        let f = GridField::constant(64, 0.1, (0.0, 0.0), true, 0.0);
        assert!(mollify(&f, &MollifierSpec::heat(0.15)).is_err());
    }

    #[test]
    fn fft_path_matches_direct_summation() {
        let f = GridField::from_fn(64, 3.0 / 64.0, (-1.5, -1.5), true, |x, y| {
            (2.0 * x).sin() + (3.0 * y).cos()
        });
        for spec in [MollifierSpec::heat(0.15), MollifierSpec::local_heat(0.15)] {
            let fast = mollify(&f, &spec).unwrap();
            let slow = direct_reference(&f, &spec);
            for (a, b) in fast.values().iter().zip(slow.iter()) {
                assert!((a - b).abs() < 1e-12, "{a} vs {b} ({:?})", spec.kernel);
            }
        }
    }

    #[test]
    fn heat_vs_local_heat_on_linear_field() {
        // On f(x, y) = x both kernels return x at interior points, up to the
        // local kernel's mass deficit of at most exp(-1/(4 eps)).
        let n = 128;
        let f = GridField::from_fn(n, 4.0 / n as f64, (-2.0, -2.0), true, |x, _| x);
        let idx = |ix: usize, iy: usize| iy * n + ix;
        for eps in [0.1, 0.2] {
            let heat = mollify(&f, &MollifierSpec::heat(eps)).unwrap();
            let local = mollify(&f, &MollifierSpec::local_heat(eps)).unwrap();
            let tol = (-1.0 / (4.0 * eps)).exp() + 1e-9;
            // probe near the center, away from the wrap seam where f jumps
            for &(ix, iy) in &[(n / 2, n / 2), (n / 2 + 8, n / 2 - 5), (n / 2 - 7, n / 2 + 2)] {
                let d = (heat.values()[idx(ix, iy)] - local.values()[idx(ix, iy)]).abs();
                assert!(d <= tol, "eps {eps}: difference {d} exceeds {tol}");
            }
        }
    }

    #[test]
    fn kronecker_spike_reproduces_kernel_weights() {
        let n = 32;
        let a = 2.0 / n as f64;
        let mut values = vec![0.0; n * n];
        let (cx, cy) = (n / 2, n / 2);
        values[cy * n + cx] = 1.0;
        let f = GridField::new(n, a, (-1.0, -1.0), true, crate::field::Normalization::Raw, values)
            .unwrap();
        let spec = MollifierSpec::local_heat(0.25);
        let out = mollify(&f, &spec).unwrap();
        let (weights, r_cells, _) = build_kernel(&spec, a);
        let side = 2 * r_cells + 1;
        for dy in -(r_cells as isize)..=(r_cells as isize) {
            for dx in -(r_cells as isize)..=(r_cells as isize) {
                let w = weights
                    [(dy + r_cells as isize) as usize * side + (dx + r_cells as isize) as usize];
                let got = out.get((cx as isize + dx) as usize, (cy as isize + dy) as usize);
                assert!((got - w).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn local_heat_depends_only_on_bump_support() {
        let n = 64;
        let a = 2.0 / n as f64;
        let spec = MollifierSpec::local_heat(0.16);
        let f1 = GridField::from_fn(n, a, (-1.0, -1.0), true, |x, y| (x * y).sin());
        let mut f2 = f1.clone();
        // perturb a vertex far from the probe point
        let far = 5 * n + 5;
        f2.values_mut()[far] += 100.0;
        let m1 = mollify(&f1, &spec).unwrap();
        let m2 = mollify(&f2, &spec).unwrap();
        let probe = (n / 2, n / 2);
        let sep = f1
            .position(probe.0, probe.1)
            .dist(f1.position(5, 5));
        assert!(sep > spec.bump_outer);
        let p = probe.1 * n + probe.0;
        // exact up to FFT roundoff of the circular convolution
        assert!((m1.values()[p] - m2.values()[p]).abs() < 1e-10);
    }
}
