//! Geometric machinery for geodesic roughness: balanced disk families,
//! annulus-crossing detection, straight-run detection, nested-run sparsity
//! and the dimension/length lower-bound certificates they imply.

mod bounds;
mod crossings;
mod runs;
mod sparsity;

pub use bounds::{dimension_lower_bound, length_lower_bound};
pub use crossings::{crosses_disk, detect_crossings};
pub use runs::{detect_straight_runs, Rect, StraightRun};
pub use sparsity::{sparsity_report, SparsityReport};

use crate::error::{Error, Result};
use crate::geom::Point;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// A disk given by center and radius.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Disk {
    pub cx: f64,
    pub cy: f64,
    pub r: f64,
}

impl Disk {
    pub fn new(center: Point, r: f64) -> Self {
        Disk {
            cx: center.x,
            cy: center.y,
            r,
        }
    }

    pub fn center(&self) -> Point {
        Point::new(self.cx, self.cy)
    }

    pub fn diameter(&self) -> f64 {
        2.0 * self.r
    }
}

/// A collection of well-separated disks organized into geometric scale bands
/// `diam ~ L0 * lambda^-k`.
///
/// The three balance conditions:
/// 1. the gap between any two disks is at least the larger diameter;
/// 2. every diameter lies in `[L0 lambda^-k / 100, 100 L0 lambda^-k]` for
///    one of the listed scales `k`;
/// 3. every scale band holds between `nu / 100` and `100 nu` disks.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BalancedFamily {
    pub lambda: f64,
    pub nu: f64,
    pub l0: f64,
    pub scales: Vec<u32>,
    pub disks: Vec<Disk>,
}

impl BalancedFamily {
    /// Scale band index of each disk, in `disks` order.
    pub fn band_of_disks(&self) -> Vec<u32> {
        self.disks
            .iter()
            .map(|d| canonical_scale(d.diameter(), self.l0, self.lambda))
            .collect()
    }
}

/// Nearest non-negative integer k with `diam ~ L0 lambda^-k`.
fn canonical_scale(diam: f64, l0: f64, lambda: f64) -> u32 {
    let k = (l0 / diam).ln() / lambda.ln();
    k.round().max(0.0) as u32
}

/// Outcome of [`validate_balanced`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BalanceCheck {
    pub ok: bool,
    /// Smallest per-band count; the family is balanced with this `nu`.
    pub nu: f64,
    /// Number of distinct scale bands.
    pub m: usize,
    pub scales: Vec<u32>,
    pub violations: Vec<String>,
}

/// Checks the balance conditions for a disk list, inferring scale bands from
/// `l0` and `lambda`. Violations are reported as data, not errors.
pub fn validate_balanced(disks: &[Disk], lambda: f64, l0: f64) -> Result<BalanceCheck> {
    if disks.is_empty() {
        return Err(Error::config("disk list must be nonempty"));
    }
    if !(lambda > 1.0) {
        return Err(Error::config("lambda must exceed 1"));
    }
    if !(l0 > 0.0) {
        return Err(Error::config("l0 must be positive"));
    }
    let mut violations = Vec::new();

    // separation: gap at least the larger diameter
    for i in 0..disks.len() {
        for j in i + 1..disks.len() {
            let need = disks[i].diameter().max(disks[j].diameter());
            let gap = disks[i].center().dist(disks[j].center()) - disks[i].r - disks[j].r;
            if gap < need - 1e-12 {
                violations.push(format!(
                    "disks {i} and {j}: gap {gap:.6} below required {need:.6}"
                ));
            }
        }
    }

    // scale bands
    let mut counts: std::collections::BTreeMap<u32, usize> = Default::default();
    for (i, d) in disks.iter().enumerate() {
        let k = canonical_scale(d.diameter(), l0, lambda);
        let band = l0 * lambda.powi(-(k as i32));
        if d.diameter() < band / 100.0 - 1e-12 || d.diameter() > 100.0 * band + 1e-12 {
            violations.push(format!(
                "disk {i}: diameter {:.6} outside every scale band",
                d.diameter()
            ));
            continue;
        }
        *counts.entry(k).or_default() += 1;
    }
    let scales: Vec<u32> = counts.keys().copied().collect();
    let min_count = counts.values().copied().min().unwrap_or(0);
    let max_count = counts.values().copied().max().unwrap_or(0);
    if min_count > 0 && max_count > 100 * 100 * min_count {
        violations.push(format!(
            "band counts {min_count}..{max_count} admit no common nu window"
        ));
    }

    Ok(BalanceCheck {
        ok: violations.is_empty(),
        nu: min_count as f64,
        m: scales.len(),
        scales,
        violations,
    })
}

/// Axis-aligned sampling box for [`generate_balanced`].
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BoundingBox {
    pub min: Point,
    pub max: Point,
}

impl BoundingBox {
    pub fn new(min: Point, max: Point) -> Self {
        BoundingBox { min, max }
    }

    pub fn area(&self) -> f64 {
        (self.max.x - self.min.x).max(0.0) * (self.max.y - self.min.y).max(0.0)
    }
}

/// Rejection-samples a balanced family with `count` disks of diameter
/// `l0 lambda^-k` in each band `k = 0 .. m-1`. Deterministic per seed; the
/// output always passes [`validate_balanced`].
pub fn generate_balanced(
    domain: &BoundingBox,
    lambda: f64,
    nu: f64,
    m: usize,
    l0: f64,
    seed: u64,
) -> Result<BalancedFamily> {
    if !(lambda > 1.0) || !(nu >= 1.0) || m == 0 || !(l0 > 0.0) {
        return Err(Error::config(
            "need lambda > 1, nu >= 1, m >= 1 and l0 > 0",
        ));
    }
    let count = nu.round() as usize;

    // feasibility heuristic: packed area with separation margins must stay
    // under a quarter of the box
    let mut packed = 0.0;
    for k in 0..m {
        let d = l0 * lambda.powi(-(k as i32));
        packed += count as f64 * std::f64::consts::PI * (1.5 * d).powi(2);
    }
    if packed >= domain.area() / 4.0 {
        return Err(Error::geometry(format!(
            "balanced family infeasible: packed area {packed:.3} vs box quarter {:.3}",
            domain.area() / 4.0
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut disks: Vec<Disk> = Vec::with_capacity(count * m);
    for k in 0..m {
        let diam = l0 * lambda.powi(-(k as i32));
        let r = diam / 2.0;
        for _ in 0..count {
            let mut placed = false;
            for _ in 0..10_000 {
                let x = rng.gen_range(domain.min.x + r..domain.max.x - r);
                let y = rng.gen_range(domain.min.y + r..domain.max.y - r);
                let cand = Disk { cx: x, cy: y, r };
                let ok = disks.iter().all(|d| {
                    let need = d.diameter().max(cand.diameter());
                    d.center().dist(cand.center()) - d.r - cand.r >= need
                });
                if ok {
                    disks.push(cand);
                    placed = true;
                    break;
                }
            }
            if !placed {
                return Err(Error::geometry(format!(
                    "could not place disk of diameter {diam} after bounded retries"
                )));
            }
        }
    }

    let family = BalancedFamily {
        lambda,
        nu: count as f64,
        l0,
        scales: (0..m as u32).collect(),
        disks,
    };
    debug_assert!(validate_balanced(&family.disks, lambda, l0)?.ok);
    Ok(family)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_disk_is_balanced() {
        let check = validate_balanced(&[Disk { cx: 0.0, cy: 0.0, r: 0.5 }], 4.0, 1.0).unwrap();
        assert!(check.ok);
        assert_eq!(check.m, 1);
    }

    #[test]
    fn overlapping_disks_violate_separation() {
        let disks = [
            Disk { cx: 0.0, cy: 0.0, r: 0.5 },
            Disk { cx: 0.6, cy: 0.0, r: 0.5 },
        ];
        let check = validate_balanced(&disks, 4.0, 1.0).unwrap();
        assert!(!check.ok);
        assert!(!check.violations.is_empty());
    }

    #[test]
    fn two_band_family_validates() {
        // 8 disks of diameter 1 and 8 of diameter 1/lambda, separation 3
        let lambda = 4.0;
        let mut disks = Vec::new();
        for i in 0..8 {
            disks.push(Disk {
                cx: 4.0 * i as f64,
                cy: 0.0,
                r: 0.5,
            });
        }
        for i in 0..8 {
            disks.push(Disk {
                cx: 4.0 * i as f64,
                cy: 4.0,
                r: 0.125,
            });
        }
        let check = validate_balanced(&disks, lambda, 1.0).unwrap();
        assert!(check.ok, "{:?}", check.violations);
        assert_eq!(check.m, 2);
        assert_eq!(check.nu, 8.0);
    }

    #[test]
    fn generate_single_disk() {
        let domain = BoundingBox::new(Point::new(0.0, 0.0), Point::new(10.0, 10.0));
        let fam = generate_balanced(&domain, 4.0, 1.0, 1, 1.0, 0).unwrap();
        assert_eq!(fam.disks.len(), 1);
        assert!(validate_balanced(&fam.disks, 4.0, 1.0).unwrap().ok);
    }

    #[test]
    fn generate_is_deterministic() {
        let domain = BoundingBox::new(Point::new(0.0, 0.0), Point::new(40.0, 40.0));
        let f1 = generate_balanced(&domain, 4.0, 8.0, 3, 1.0, 42).unwrap();
        let f2 = generate_balanced(&domain, 4.0, 8.0, 3, 1.0, 42).unwrap();
        let c1: Vec<_> = f1.disks.iter().map(|d| (d.cx, d.cy, d.r)).collect();
        let c2: Vec<_> = f2.disks.iter().map(|d| (d.cx, d.cy, d.r)).collect();
        assert_eq!(c1, c2);
    }

    #[test]
    fn generate_three_bands_of_eight() {
        let domain = BoundingBox::new(Point::new(0.0, 0.0), Point::new(40.0, 40.0));
        let fam = generate_balanced(&domain, 4.0, 8.0, 3, 1.0, 7).unwrap();
        assert_eq!(fam.disks.len(), 24);
        let check = validate_balanced(&fam.disks, 4.0, 1.0).unwrap();
        assert!(check.ok, "{:?}", check.violations);
        assert_eq!(check.m, 3);
        assert_eq!(check.nu, 8.0);
    }

    #[test]
    fn infeasible_geometry_is_an_error() {
        let domain = BoundingBox::new(Point::new(0.0, 0.0), Point::new(3.0, 3.0));
        assert!(generate_balanced(&domain, 4.0, 8.0, 3, 1.0, 0).is_err());
    }

    #[test]
    fn family_json_roundtrip() {
        let domain = BoundingBox::new(Point::new(0.0, 0.0), Point::new(40.0, 40.0));
        let fam = generate_balanced(&domain, 4.0, 4.0, 2, 1.0, 3).unwrap();
        let json = crate::jsonfmt::to_json_string(&fam).unwrap();
        let back: BalancedFamily = serde_json::from_str(&json).unwrap();
        assert_eq!(back.disks.len(), fam.disks.len());
        assert_eq!(back.lambda, fam.lambda);
        for (a, b) in back.disks.iter().zip(fam.disks.iter()) {
            assert_eq!(a.r, b.r);
            assert_eq!(a.cx, b.cx);
        }
    }
}
