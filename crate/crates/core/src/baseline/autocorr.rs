use num_complex::Complex;

use crate::error::{Error, Result};
use crate::numerics::{Direction, Fft2, RealGrid};
use crate::scalar::Real;
use crate::scatter::SpecklePattern;

/// Mean-subtracted circular autocorrelation, zero shift at the grid center,
/// peak normalized to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Autocorrelogram<T> {
    grid: RealGrid<T>,
}

impl<T: Real> Autocorrelogram<T> {
    pub fn from_grid(grid: RealGrid<T>) -> Result<Self> {
        if !grid.rows().is_power_of_two() || !grid.cols().is_power_of_two() {
            return Err(Error::Dimension(format!(
                "autocorrelogram must be power-of-two sized, got {}x{}",
                grid.rows(),
                grid.cols()
            )));
        }
        Ok(Self { grid })
    }

    pub fn grid(&self) -> &RealGrid<T> {
        &self.grid
    }

    pub fn center(&self) -> (usize, usize) {
        (self.grid.rows() / 2, self.grid.cols() / 2)
    }
}

/// Averages `A(u, v)` with `A(-u, -v)` (indices mod the grid), which makes
/// the point symmetry exact in floating point.
fn symmetrized<T: Real>(raw: &RealGrid<T>) -> RealGrid<T> {
    let (rows, cols) = (raw.rows(), raw.cols());
    let half = T::of(0.5);
    RealGrid::from_fn(rows, cols, |u, v| {
        (raw.get(u, v) + raw.get((rows - u) % rows, (cols - v) % cols)) * half
    })
}

/// Wiener–Khinchin: `IFFT(|FFT(I - mean)|^2)`, recentred and peak-normalized.
pub fn autocorr<T: Real>(pattern: &SpecklePattern<T>) -> Result<Autocorrelogram<T>> {
    autocorr_grid(pattern.grid())
}

pub fn autocorr_grid<T: Real>(grid: &RealGrid<T>) -> Result<Autocorrelogram<T>> {
    let (rows, cols) = (grid.rows(), grid.cols());
    let fft = Fft2::<T>::new(rows, cols)?;
    let mean = grid.mean();
    let mut buf: Vec<Complex<T>> = grid
        .as_slice()
        .iter()
        .map(|&v| Complex::new(v - mean, T::zero()))
        .collect();
    fft.process(&mut buf, Direction::Forward);
    for z in &mut buf {
        *z = Complex::new(z.norm_sqr(), T::zero());
    }
    fft.process(&mut buf, Direction::Inverse);
    let raw = symmetrized(&RealGrid::from_vec(rows, cols, buf.iter().map(|z| z.re).collect())?);
    let peak = raw.get(0, 0);
    let scale = grid.as_slice().iter().map(|v| v.abs()).fold(T::zero(), T::max);
    if !(peak > T::of(1e-12) * scale * scale) {
        return Err(Error::Degenerate(
            "constant pattern has no autocorrelation structure".into(),
        ));
    }
    Autocorrelogram::from_grid(raw.map(|v| v / peak).fftshift())
}

/// Brute-force circular autocorrelation with the same conventions.
pub fn autocorr_direct<T: Real>(grid: &RealGrid<T>) -> Result<Autocorrelogram<T>> {
    let (rows, cols) = (grid.rows(), grid.cols());
    let mean = grid.mean();
    let d: Vec<T> = grid.as_slice().iter().map(|&v| v - mean).collect();
    let raw = symmetrized(&RealGrid::from_fn(rows, cols, |u, v| {
        let mut acc = T::zero();
        for r in 0..rows {
            for c in 0..cols {
                acc += d[r * cols + c] * d[((r + u) % rows) * cols + (c + v) % cols];
            }
        }
        acc
    }));
    let peak = raw.get(0, 0);
    if !(peak > T::zero()) {
        return Err(Error::Degenerate(
            "constant pattern has no autocorrelation structure".into(),
        ));
    }
    Autocorrelogram::from_grid(raw.map(|v| v / peak).fftshift())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::SeededRng;

    #[test]
    fn impulse_gives_central_peak() {
        let mut g = RealGrid::zeros(16, 16);
        g.set(5, 9, 1.0f64);
        let ac = autocorr_grid(&g).unwrap();
        let (cr, cc) = ac.center();
        assert!((ac.grid().get(cr, cc) - 1.0).abs() < 1e-12);
        let off = ac
            .grid()
            .as_slice()
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != cr * 16 + cc);
        for (_, v) in off {
            assert!(v.abs() < 0.01);
        }
    }

    #[test]
    fn matches_direct_correlation() {
        let mut rng = SeededRng::new(21);
        for (r, c) in [(16, 16), (8, 32), (4, 4)] {
            let g = RealGrid::from_fn(r, c, |_, _| rng.uniform() * 3.0);
            let fast = autocorr_grid(&g).unwrap();
            let slow = autocorr_direct(&g).unwrap();
            for (a, b) in fast.grid().as_slice().iter().zip(slow.grid().as_slice()) {
                assert!((a - b).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn point_symmetric() {
        let mut rng = SeededRng::new(2);
        let g = RealGrid::from_fn(16, 16, |_, _| rng.uniform());
        let ac = autocorr_direct(&g).unwrap();
        let a = ac.grid().ifftshift();
        for u in 0..16 {
            for v in 0..16 {
                assert_eq!(a.get(u, v), a.get((16 - u) % 16, (16 - v) % 16));
            }
        }
        let fast = autocorr_grid(&g).unwrap().grid().ifftshift();
        for u in 0..16 {
            for v in 0..16 {
                assert_eq!(fast.get(u, v), fast.get((16 - u) % 16, (16 - v) % 16));
            }
        }
    }

    #[test]
    fn constant_pattern_is_degenerate() {
        let g = RealGrid::filled(8, 8, 2.5f64);
        assert!(matches!(autocorr_grid(&g), Err(Error::Degenerate(_))));
        let odd = RealGrid::from_fn(6, 6, |r, _| r as f64);
        assert!(matches!(autocorr_grid(&odd), Err(Error::Dimension(_))));
    }
}
