//! Seeded Gaussian free field samplers.
//!
//! Two discretizations are provided. `TorusSpectral` synthesizes a stationary
//! field on the periodic lattice whose spectral density is proportional to
//! the inverse discrete Laplacian symbol (the lattice form of `1/|k|^2`),
//! with the zero mode removed; the additive constant is then fixed by
//! subtracting the average over the unit circle. `ZeroBoundary` samples the
//! discrete Gaussian free field on the box whose covariance is exactly the
//! Green function of the 4-neighbor Laplacian with identity rows on the
//! boundary.

use crate::error::{Error, Result};
use crate::field::fft::fft2;
use crate::field::grid::{GridField, Normalization};
use crate::field::circle_average;
use crate::geom::Point;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplerMode {
    TorusSpectral,
    ZeroBoundary,
}

/// Configuration of [`sample_field`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub grid_size: usize,
    pub domain_side: f64,
    pub mode: SamplerMode,
    pub seed: u64,
    /// Subtract the unit-circle average after torus synthesis. On by default;
    /// turn off for domains too small to contain the unit circle. Ignored in
    /// zero-boundary mode, which is pinned by its boundary condition.
    #[serde(default = "default_true")]
    pub normalize_unit_circle: bool,
}

fn default_true() -> bool {
    true
}

impl SamplerConfig {
    pub fn torus(grid_size: usize, domain_side: f64, seed: u64) -> Self {
        SamplerConfig {
            grid_size,
            domain_side,
            mode: SamplerMode::TorusSpectral,
            seed,
            normalize_unit_circle: true,
        }
    }

    pub fn zero_boundary(grid_size: usize, domain_side: f64, seed: u64) -> Self {
        SamplerConfig {
            grid_size,
            domain_side,
            mode: SamplerMode::ZeroBoundary,
            seed,
            normalize_unit_circle: false,
        }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        let mut c = self.clone();
        c.seed = seed;
        c
    }

    pub fn spacing(&self) -> f64 {
        self.domain_side / self.grid_size as f64
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid_size < 8 {
            return Err(Error::config("grid_size must be at least 8"));
        }
        if !(self.domain_side.is_finite() && self.domain_side > 0.0) {
            return Err(Error::config("domain_side must be positive"));
        }
        if self.mode == SamplerMode::TorusSpectral {
            if !self.grid_size.is_power_of_two() {
                return Err(Error::config(format!(
                    "torus-spectral mode requires a power-of-two grid size, got {}",
                    self.grid_size
                )));
            }
            if self.normalize_unit_circle {
                let a = self.spacing();
                if self.domain_side < 2.0 + 4.0 * a || 1.0 < 4.0 * a {
                    return Err(Error::config(format!(
                        "domain side {} too small to contain the unit circle \
                         needed for normalization",
                        self.domain_side
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Draws a field for the given configuration. Deterministic per seed.
pub fn sample_field(config: &SamplerConfig) -> Result<GridField> {
    config.validate()?;
    match config.mode {
        SamplerMode::TorusSpectral => sample_torus(config),
        SamplerMode::ZeroBoundary => sample_zero_boundary(config),
    }
}

/// Standard normal draws via Box-Muller.
struct NormalSource<R: Rng> {
    rng: R,
    spare: Option<f64>,
}

impl<R: Rng> NormalSource<R> {
    fn new(rng: R) -> Self {
        NormalSource { rng, spare: None }
    }

    fn next(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1: f64 = loop {
            let u = self.rng.gen::<f64>();
            if u > 0.0 {
                break u;
            }
        };
        let u2: f64 = self.rng.gen();
        let r = (-2.0 * u1.ln()).sqrt();
        self.spare = Some(r * (TAU * u2).sin());
        r * (TAU * u2).cos()
    }
}

/// Spectral amplitude applied to unit white noise at mode `(p, q)`.
fn torus_gain(n: usize, p: usize, q: usize) -> f64 {
    if p == 0 && q == 0 {
        return 0.0;
    }
    let lambda = 4.0
        - 2.0 * (TAU * p as f64 / n as f64).cos()
        - 2.0 * (TAU * q as f64 / n as f64).cos();
    (TAU / lambda).sqrt()
}

fn sample_torus(config: &SamplerConfig) -> Result<GridField> {
    let n = config.grid_size;
    let a = config.spacing();
    let origin = (-config.domain_side / 2.0, -config.domain_side / 2.0);

    let mut normals = NormalSource::new(ChaCha8Rng::seed_from_u64(config.seed));
    let mut buf: Vec<Complex<f64>> = (0..n * n)
        .map(|_| Complex::new(normals.next(), 0.0))
        .collect();
    fft2(&mut buf, n, false);
    let inv_n2 = 1.0 / (n * n) as f64;
    for q in 0..n {
        for p in 0..n {
            buf[q * n + p] *= torus_gain(n, p, q) * inv_n2;
        }
    }
    fft2(&mut buf, n, true);
    let values: Vec<f64> = buf.iter().map(|c| c.re).collect();

    let mut field = GridField::new(n, a, origin, true, Normalization::Raw, values)?;
    if config.normalize_unit_circle {
        let avg = circle_average(&field, Point::new(0.0, 0.0), 1.0)?;
        for v in field.values_mut() {
            *v -= avg;
        }
        field.set_normalization(Normalization::UnitCircleAverageZero);
    }
    Ok(field)
}

/// Exact variance of `h(u) - h(v)` under the torus sampler (before the
/// unit-circle normalization), from the spectral sum. `u` and `v` are vertex
/// indices.
pub fn predicted_difference_variance(config: &SamplerConfig, u: usize, v: usize) -> Result<f64> {
    config.validate()?;
    if config.mode != SamplerMode::TorusSpectral {
        return Err(Error::config(
            "spectral prediction applies to torus-spectral mode",
        ));
    }
    let n = config.grid_size;
    let (ux, uy) = ((u % n) as f64, (u / n) as f64);
    let (vx, vy) = ((v % n) as f64, (v / n) as f64);
    let (dx, dy) = (ux - vx, uy - vy);
    let inv_n2 = 1.0 / (n * n) as f64;
    let mut var = 0.0;
    for q in 0..n {
        for p in 0..n {
            let g = torus_gain(n, p, q);
            let phase = TAU * (p as f64 * dx + q as f64 * dy) / n as f64;
            var += g * g * inv_n2 * 2.0 * (1.0 - phase.cos());
        }
    }
    Ok(var)
}

fn sample_zero_boundary(config: &SamplerConfig) -> Result<GridField> {
    let n = config.grid_size;
    let a = config.spacing();
    let origin = (-config.domain_side / 2.0, -config.domain_side / 2.0);
    let m = n - 2;
    let denom = (n - 1) as f64;

    // Dirichlet sine modes of the 4-neighbor Laplacian on the interior.
    // sines[p][i] = sin(pi (p+1)(i+1) / (n-1)), orthogonal with norm (n-1)/2.
    let mut sines = vec![0.0; m * m];
    for p in 0..m {
        for i in 0..m {
            sines[p * m + i] = (PI * (p + 1) as f64 * (i + 1) as f64 / denom).sin();
        }
    }
    let ortho = 2.0 / denom;

    let mut normals = NormalSource::new(ChaCha8Rng::seed_from_u64(config.seed));
    // coefficient c[p][q] = xi / sqrt(lambda_pq), scaled for orthonormal modes
    let mut coeff = vec![0.0; m * m];
    for p in 0..m {
        let cp = (PI * (p + 1) as f64 / denom).cos();
        for q in 0..m {
            let cq = (PI * (q + 1) as f64 / denom).cos();
            let lambda = 4.0 - 2.0 * cp - 2.0 * cq;
            coeff[p * m + q] = normals.next() / lambda.sqrt() * ortho;
        }
    }

    // Separable synthesis: tmp[p][j] = sum_q coeff[p][q] sines[q][j],
    // then h[i][j] = sum_p sines[p][i] tmp[p][j].
    let mut tmp = vec![0.0; m * m];
    for p in 0..m {
        for q in 0..m {
            let c = coeff[p * m + q];
            if c == 0.0 {
                continue;
            }
            let row = &sines[q * m..(q + 1) * m];
            for (j, s) in row.iter().enumerate() {
                tmp[p * m + j] += c * s;
            }
        }
    }
    let mut values = vec![0.0; n * n];
    for p in 0..m {
        let srow = &sines[p * m..(p + 1) * m];
        let trow = &tmp[p * m..(p + 1) * m];
        for i in 0..m {
            let s = srow[i];
            if s == 0.0 {
                continue;
            }
            let out = &mut values[(i + 1) * n + 1..(i + 1) * n + 1 + m];
            for (j, t) in trow.iter().enumerate() {
                out[j] += s * t;
            }
        }
    }

    GridField::new(n, a, origin, false, Normalization::Raw, values)
}
