//! Radix-2 2D FFT with unitary normalization.
//!
//! Both directions scale by `1/sqrt(rows * cols)`, so the transform preserves
//! energy and `inverse(forward(x)) == x`. Forward uses `exp(-2πi kn/N)`.

use num_complex::Complex;

use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Precomputed 1D radix-2 transform of one length.
#[derive(Debug, Clone)]
struct Radix2<T> {
    n: usize,
    bits: u32,
    // exp(-2πi k/n), k < n/2
    twiddles: Vec<Complex<T>>,
    scale: T,
}

impl<T: Real> Radix2<T> {
    fn new(n: usize) -> Result<Self> {
        if n == 0 || !n.is_power_of_two() {
            return Err(Error::Dimension(format!("FFT length {n} is not a power of two")));
        }
        let twiddles = (0..n / 2)
            .map(|k| {
                let angle = -std::f64::consts::TAU * k as f64 / n as f64;
                Complex::new(T::of(angle.cos()), T::of(angle.sin()))
            })
            .collect();
        Ok(Self {
            n,
            bits: n.trailing_zeros(),
            twiddles,
            scale: T::of(1.0 / (n as f64).sqrt()),
        })
    }

    fn process(&self, buf: &mut [Complex<T>], dir: Direction) {
        let n = self.n;
        debug_assert_eq!(buf.len(), n);
        if n == 1 {
            return;
        }
        for i in 0..n {
            let j = i.reverse_bits() >> (usize::BITS - self.bits);
            if j > i {
                buf.swap(i, j);
            }
        }
        let mut half = 1;
        while half < n {
            let step = n / (2 * half);
            for start in (0..n).step_by(2 * half) {
                for k in 0..half {
                    let w = self.twiddles[k * step];
                    let w = match dir {
                        Direction::Forward => w,
                        Direction::Inverse => w.conj(),
                    };
                    let a = buf[start + k];
                    let b = buf[start + k + half] * w;
                    buf[start + k] = a + b;
                    buf[start + k + half] = a - b;
                }
            }
            half *= 2;
        }
        for z in buf.iter_mut() {
            *z = *z * self.scale;
        }
    }
}

/// Reusable plan for `rows x cols` transforms.
#[derive(Debug, Clone)]
pub struct Fft2<T> {
    rows: Radix2<T>,
    cols: Radix2<T>,
}

impl<T: Real> Fft2<T> {
    pub fn new(rows: usize, cols: usize) -> Result<Self> {
        Ok(Self {
            rows: Radix2::new(rows)?,
            cols: Radix2::new(cols)?,
        })
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows.n, self.cols.n)
    }

    /// Transforms a row-major buffer in place.
    pub fn process(&self, data: &mut [Complex<T>], dir: Direction) {
        let (rows, cols) = self.shape();
        assert_eq!(data.len(), rows * cols, "buffer does not match plan shape");
        for row in data.chunks_exact_mut(cols) {
            self.cols.process(row, dir);
        }
        let mut column = vec![Complex::new(T::zero(), T::zero()); rows];
        for c in 0..cols {
            for r in 0..rows {
                column[r] = data[r * cols + c];
            }
            self.rows.process(&mut column, dir);
            for r in 0..rows {
                data[r * cols + c] = column[r];
            }
        }
    }
}

/// One-shot 2D transform.
pub fn fft2<T: Real>(grid: &ComplexMatrix<T>, dir: Direction) -> Result<ComplexMatrix<T>> {
    let plan = Fft2::new(grid.rows(), grid.cols())?;
    let mut out = grid.clone();
    plan.process(out.as_mut_slice(), dir);
    Ok(out)
}
