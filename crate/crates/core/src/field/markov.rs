//! Markov decomposition of a lattice field over a disk: an interior part
//! vanishing on and outside the discrete disk boundary, plus a part that is
//! discrete-harmonic strictly inside and agrees with the field elsewhere.

use crate::error::{Error, Result};
use crate::field::grid::GridField;
use crate::geom::Point;

/// Result of [`markov_decompose`].
#[derive(Debug, Clone)]
pub struct Decomposition {
    /// Zero on the discrete boundary layer and outside the ball.
    pub interior: GridField,
    /// Discrete-harmonic at every interior vertex of the ball, equal to the
    /// original field on the boundary layer and outside.
    pub harmonic: GridField,
    pub center: Point,
    pub radius: f64,
}

/// Vertex classification for a lattice ball. `interior` vertices lie in the
/// closed ball with all four lattice neighbors also in the ball; `boundary`
/// vertices are ball vertices adjacent to the outside.
struct BallIndex {
    interior: Vec<usize>,
    interior_rank: Vec<i32>,
}

fn classify_ball(field: &GridField, center: Point, radius: f64) -> Result<BallIndex> {
    let n = field.n();
    let r2 = radius * radius;
    let inside = |ix: isize, iy: isize| -> bool {
        if ix < 0 || iy < 0 || ix >= n as isize || iy >= n as isize {
            return false;
        }
        field.position(ix as usize, iy as usize).dist2(center) <= r2
    };
    // the closed ball must not touch the grid edge
    let lo = field.position(0, 0);
    let hi = field.position(n - 1, n - 1);
    if center.x - radius <= lo.x
        || center.y - radius <= lo.y
        || center.x + radius >= hi.x
        || center.y + radius >= hi.y
    {
        return Err(Error::geometry(format!(
            "ball of radius {radius} about ({}, {}) touches the grid edge",
            center.x, center.y
        )));
    }
    let mut interior = Vec::new();
    let mut interior_rank = vec![-1i32; n * n];
    for iy in 0..n {
        for ix in 0..n {
            let (jx, jy) = (ix as isize, iy as isize);
            if !inside(jx, jy) {
                continue;
            }
            let all_in = inside(jx - 1, jy) && inside(jx + 1, jy) && inside(jx, jy - 1)
                && inside(jx, jy + 1);
            if all_in {
                interior_rank[iy * n + ix] = interior.len() as i32;
                interior.push(iy * n + ix);
            }
        }
    }
    Ok(BallIndex {
        interior,
        interior_rank,
    })
}

/// Splits `field = interior + harmonic` over the disk `B(center, radius)`.
///
/// The harmonic part solves the discrete Dirichlet problem for the 4-neighbor
/// Laplacian inside the ball, with boundary data given by the field on the
/// boundary layer (ball vertices adjacent to the outside).
pub fn markov_decompose(field: &GridField, center: Point, radius: f64) -> Result<Decomposition> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::geometry("ball radius must be positive"));
    }
    let ball = classify_ball(field, center, radius)?;
    let n = field.n();
    let m = ball.interior.len();

    let mut harmonic_vals = field.values().to_vec();
    if m > 0 {
        let sol = solve_dirichlet(field, &ball)?;
        for (rank, &v) in ball.interior.iter().enumerate() {
            harmonic_vals[v] = sol[rank];
        }
    }
    let mut interior_vals = vec![0.0; n * n];
    for &v in &ball.interior {
        interior_vals[v] = field.values()[v] - harmonic_vals[v];
    }

    let harmonic = GridField::new(
        n,
        field.spacing(),
        field.origin(),
        field.periodic(),
        field.normalization(),
        harmonic_vals,
    )?;
    let interior = GridField::new(
        n,
        field.spacing(),
        field.origin(),
        field.periodic(),
        crate::field::Normalization::Raw,
        interior_vals,
    )?;
    Ok(Decomposition {
        interior,
        harmonic,
        center,
        radius,
    })
}

/// Conjugate gradient solve of the interior Dirichlet system. The unknowns
/// are the interior vertices; boundary-layer values enter the right-hand
/// side. Converges to a max-norm residual tight enough for the mean-value
/// property to hold within 1e-9 at every interior vertex.
fn solve_dirichlet(field: &GridField, ball: &BallIndex) -> Result<Vec<f64>> {
    let n = field.n() as isize;
    let m = ball.interior.len();
    let rank = &ball.interior_rank;
    let vals = field.values();

    let neighbor_offsets = [-1isize, 1, -n, n];
    let mut rhs = vec![0.0; m];
    let mut scale: f64 = 0.0;
    for (i, &v) in ball.interior.iter().enumerate() {
        let mut b = 0.0;
        for &off in &neighbor_offsets {
            let u = v as isize + off;
            if rank[u as usize] < 0 {
                b += vals[u as usize];
            }
        }
        rhs[i] = b;
        scale = scale.max(b.abs());
    }
    for &v in &ball.interior {
        scale = scale.max(vals[v].abs());
    }

    // A x = rhs with A = 4 I - adjacency (SPD)
    let matvec = |x: &[f64], out: &mut [f64]| {
        for (i, &v) in ball.interior.iter().enumerate() {
            let mut acc = 4.0 * x[i];
            for &off in &neighbor_offsets {
                let u = (v as isize + off) as usize;
                let r = rank[u];
                if r >= 0 {
                    acc -= x[r as usize];
                }
            }
            out[i] = acc;
        }
    };

    let tol = 1e-12 * (1.0 + scale);
    // warm start at the mean boundary value: exact for constant data
    let boundary_count: f64 = ball
        .interior
        .iter()
        .map(|&v| {
            neighbor_offsets
                .iter()
                .filter(|&&off| rank[(v as isize + off) as usize] < 0)
                .count() as f64
        })
        .sum();
    let rhs_sum: f64 = rhs.iter().sum();
    let start = if boundary_count > 0.0 {
        rhs_sum / boundary_count
    } else {
        0.0
    };
    let mut x = vec![start; m];
    let mut r = vec![0.0; m];
    matvec(&x, &mut r);
    for i in 0..m {
        r[i] = rhs[i] - r[i];
    }
    let mut p = r.clone();
    let mut ap = vec![0.0; m];
    let mut rs_old: f64 = r.iter().map(|v| v * v).sum();
    let max_iters = 40 * (m as f64).sqrt() as usize + 200;
    for _ in 0..max_iters {
        let rmax = r.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        if rmax <= tol {
            return Ok(x);
        }
        matvec(&p, &mut ap);
        let pap: f64 = p.iter().zip(ap.iter()).map(|(a, b)| a * b).sum();
        if pap <= 0.0 {
            break;
        }
        let alpha = rs_old / pap;
        for i in 0..m {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let rs_new: f64 = r.iter().map(|v| v * v).sum();
        let beta = rs_new / rs_old;
        rs_old = rs_new;
        for i in 0..m {
            p[i] = r[i] + beta * p[i];
        }
    }
    let rmax = r.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if rmax <= tol * 10.0 {
        Ok(x)
    } else {
        Err(Error::Config(format!(
            "Dirichlet solve did not converge (residual {rmax:.3e}, tol {tol:.3e})"
        )))
    }
}

/// Max minus min of the harmonic part over lattice vertices within
/// `s * radius` of the center.
pub fn harmonic_fluctuation(dec: &Decomposition, s: f64) -> Result<f64> {
    if !(0.0 < s && s < 1.0) {
        return Err(Error::config("s must lie in (0, 1)"));
    }
    let field = &dec.harmonic;
    if s * dec.radius < 2.0 * field.spacing() {
        return Err(Error::geometry(format!(
            "s * radius = {} below two lattice spacings",
            s * dec.radius
        )));
    }
    let n = field.n();
    let r2 = (s * dec.radius).powi(2);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for iy in 0..n {
        for ix in 0..n {
            if field.position(ix, iy).dist2(dec.center) <= r2 {
                let v = field.get(ix, iy);
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
    }
    if lo > hi {
        return Err(Error::geometry("no lattice vertices inside the ball"));
    }
    Ok(hi - lo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{sample_field, SamplerConfig};

    fn test_field() -> GridField {
        sample_field(&SamplerConfig::torus(64, 4.0, 41)).unwrap()
    }

    #[test]
    fn decomposition_reconstructs_field_exactly() {
        let f = test_field();
        let dec = markov_decompose(&f, Point::new(0.2, -0.3), 0.9).unwrap();
        for v in 0..f.values().len() {
            let sum = dec.interior.values()[v] + dec.harmonic.values()[v];
            assert!((sum - f.values()[v]).abs() <= 1e-12);
        }
    }

    #[test]
    fn interior_vanishes_outside_ball() {
        let f = test_field();
        let c = Point::new(0.2, -0.3);
        let r = 0.9;
        let dec = markov_decompose(&f, c, r).unwrap();
        let n = f.n();
        for iy in 0..n {
            for ix in 0..n {
                if f.position(ix, iy).dist(c) > r {
                    assert_eq!(dec.interior.get(ix, iy), 0.0);
                }
            }
        }
    }

    #[test]
    fn harmonic_part_has_mean_value_property() {
        let f = test_field();
        let dec = markov_decompose(&f, Point::new(0.0, 0.0), 1.1).unwrap();
        let n = f.n();
        let h = dec.harmonic.values();
        let r2 = dec.radius * dec.radius;
        let in_ball = |ix: isize, iy: isize| {
            ix >= 0
                && iy >= 0
                && (ix as usize) < n
                && (iy as usize) < n
                && f.position(ix as usize, iy as usize).dist2(dec.center) <= r2
        };
        for iy in 1..n - 1 {
            for ix in 1..n - 1 {
                let (jx, jy) = (ix as isize, iy as isize);
                if in_ball(jx, jy)
                    && in_ball(jx - 1, jy)
                    && in_ball(jx + 1, jy)
                    && in_ball(jx, jy - 1)
                    && in_ball(jx, jy + 1)
                {
                    let mean = 0.25
                        * (h[iy * n + ix - 1]
                            + h[iy * n + ix + 1]
                            + h[(iy - 1) * n + ix]
                            + h[(iy + 1) * n + ix]);
                    assert!((h[iy * n + ix] - mean).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn harmonic_input_has_zero_interior_part() {
        // A linear function is discrete-harmonic, so the interior part is 0.
        let f = GridField::from_fn(48, 0.05, (-1.2, -1.2), false, |x, y| 3.0 * x - 2.0 * y);
        let dec = markov_decompose(&f, Point::new(0.0, 0.0), 0.8).unwrap();
        for &v in dec.interior.values() {
            assert!(v.abs() < 1e-9);
        }
    }

    #[test]
    fn center_value_matches_dense_solve() {
        // Brute-force dense linear solve of the same Dirichlet system.
        let f = test_field();
        let c = Point::new(-0.4, 0.5);
        let r = 0.7;
        let dec = markov_decompose(&f, c, r).unwrap();

        let ball = classify_ball(&f, c, r).unwrap();
        let m = ball.interior.len();
        let n = f.n() as isize;
        let mut a = nalgebra::DMatrix::<f64>::zeros(m, m);
        let mut b = nalgebra::DVector::<f64>::zeros(m);
        for (i, &v) in ball.interior.iter().enumerate() {
            a[(i, i)] = 4.0;
            for off in [-1isize, 1, -n, n] {
                let u = (v as isize + off) as usize;
                let rnk = ball.interior_rank[u];
                if rnk >= 0 {
                    a[(i, rnk as usize)] = -1.0;
                } else {
                    b[i] += f.values()[u];
                }
            }
        }
        let sol = a.lu().solve(&b).expect("dense solve");
        let center_v = f.nearest_vertex(c).unwrap();
        let rank = ball.interior_rank[center_v];
        assert!(rank >= 0);
        assert!((dec.harmonic.values()[center_v] - sol[rank as usize]).abs() < 1e-9);
    }

    #[test]
    fn fluctuation_of_linear_boundary_data() {
        // Linear field: the harmonic part equals it. The grid is laid out in
        // exact binary fractions so that s * r lands on lattice vertices and
        // max - min over B(0, s r) is exactly 2 s r.
        let nsz = 256;
        let a = 1.0 / 128.0;
        let f = GridField::from_fn(nsz, a, (-1.0, -1.0), false, |x, _| x);
        let r = 0.75;
        let s = 0.875; // s * r = 0.65625 = 84 a
        let dec = markov_decompose(&f, Point::new(0.0, 0.0), r).unwrap();
        let fl = harmonic_fluctuation(&dec, s).unwrap();
        assert!((fl - 2.0 * s * r).abs() < 1e-6, "fl={fl}");
    }

    #[test]
    fn fluctuation_monotone_in_s() {
        let f = test_field();
        let dec = markov_decompose(&f, Point::new(0.0, 0.0), 1.2).unwrap();
        let mut prev = 0.0;
        for s in [0.3, 0.5, 0.7, 0.9] {
            let fl = harmonic_fluctuation(&dec, s).unwrap();
            assert!(fl >= prev);
            prev = fl;
        }
    }

    #[test]
    fn constant_boundary_data_gives_zero_fluctuation() {
        let f = GridField::constant(64, 0.05, (-1.6, -1.6), false, 2.0);
        let dec = markov_decompose(&f, Point::new(0.0, 0.0), 1.0).unwrap();
        assert_eq!(harmonic_fluctuation(&dec, 0.875).unwrap(), 0.0);
    }

    #[test]
    fn ball_touching_edge_rejected() {
        let f = test_field();
        assert!(markov_decompose(&f, Point::new(1.5, 0.0), 0.8).is_err());
    }
}
