//! Minimal 2D FFT on top of rustfft, used by the spectral sampler and the
//! convolution path of the mollifier.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

/// In-place 2D FFT of an `n x n` row-major complex buffer.
pub fn fft2(buf: &mut [Complex<f64>], n: usize, inverse: bool) {
    debug_assert_eq!(buf.len(), n * n);
    let mut planner = FftPlanner::new();
    let fft = if inverse {
        planner.plan_fft_inverse(n)
    } else {
        planner.plan_fft_forward(n)
    };
    // rows
    for row in buf.chunks_exact_mut(n) {
        fft.process(row);
    }
    // columns, via a scratch column buffer
    let mut col = vec![Complex::default(); n];
    for ix in 0..n {
        for iy in 0..n {
            col[iy] = buf[iy * n + ix];
        }
        fft.process(&mut col);
        for iy in 0..n {
            buf[iy * n + ix] = col[iy];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let n = 8;
        let mut buf: Vec<Complex<f64>> = (0..n * n)
            .map(|i| Complex::new((i as f64 * 0.37).sin(), 0.0))
            .collect();
        let orig = buf.clone();
        fft2(&mut buf, n, false);
        fft2(&mut buf, n, true);
        let scale = (n * n) as f64;
        for (a, b) in buf.iter().zip(orig.iter()) {
            assert!((a.re / scale - b.re).abs() < 1e-12);
            assert!((a.im / scale).abs() < 1e-12);
        }
    }
}
