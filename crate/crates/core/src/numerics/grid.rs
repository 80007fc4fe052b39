use crate::error::{Error, Result};
use crate::scalar::Real;

/// Row-major raster of real values (intensity or amplitude images).
#[derive(Debug, Clone, PartialEq)]
pub struct RealGrid<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Real> RealGrid<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Self {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    /// Wraps `data`; fails if its length is not `rows * cols` or any value is non-finite.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "grid {rows}x{cols} needs {} values, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("non-finite value at index {i}")));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> T {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn cast<U: Real>(&self) -> RealGrid<U> {
        RealGrid {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| U::of(v.as_f64())).collect(),
        }
    }

    pub fn sum(&self) -> T {
        self.data.iter().copied().sum()
    }

    pub fn mean(&self) -> T {
        self.sum() / T::of_usize(self.data.len().max(1))
    }

    pub fn max(&self) -> T {
        self.data.iter().copied().fold(T::neg_infinity(), T::max)
    }

    pub fn min(&self) -> T {
        self.data.iter().copied().fold(T::infinity(), T::min)
    }

    /// Circular shift: output `(r, c)` takes input `(r - dy, c - dx)` modulo the grid.
    pub fn roll(&self, dy: isize, dx: isize) -> Self {
        let (rows, cols) = (self.rows as isize, self.cols as isize);
        Self::from_fn(self.rows, self.cols, |r, c| {
            let sr = (r as isize - dy).rem_euclid(rows) as usize;
            let sc = (c as isize - dx).rem_euclid(cols) as usize;
            self.get(sr, sc)
        })
    }

    /// Point reflection `(r, c) -> (-r, -c)` modulo the grid.
    pub fn point_reflect(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| {
            self.get((self.rows - r) % self.rows, (self.cols - c) % self.cols)
        })
    }

    /// Copies `self` into the top-left corner of a zero grid of the given size.
    pub fn embed(&self, rows: usize, cols: usize) -> Result<Self> {
        if rows < self.rows || cols < self.cols {
            return Err(Error::Dimension(format!(
                "cannot embed {}x{} into {rows}x{cols}",
                self.rows, self.cols
            )));
        }
        let mut out = Self::zeros(rows, cols);
        for r in 0..self.rows {
            let src = &self.data[r * self.cols..(r + 1) * self.cols];
            out.data[r * cols..r * cols + self.cols].copy_from_slice(src);
        }
        Ok(out)
    }

    /// Swaps quadrants so the zero-shift element moves to `(rows/2, cols/2)`.
    pub fn fftshift(&self) -> Self {
        self.roll((self.rows / 2) as isize, (self.cols / 2) as isize)
    }

    /// Inverse of [`RealGrid::fftshift`].
    pub fn ifftshift(&self) -> Self {
        self.roll(-((self.rows / 2) as isize), -((self.cols / 2) as isize))
    }
}
