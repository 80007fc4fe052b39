use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::new(T::zero(), T::zero()); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "complex matrix {rows}x{cols} needs {} values, got {}",
                rows * cols,
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Domain("non-finite complex entry".into()));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Complex matrix with zero imaginary part.
    pub fn from_real(rows: usize, cols: usize, re: &[T]) -> Result<Self> {
        Self::from_vec(rows, cols, re.iter().map(|&v| Complex::new(v, T::zero())).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex<T>] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<Complex<T>> {
        self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex<T> {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[Complex<T>] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn matvec(&self, v: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "matvec: matrix has {} columns, vector has {} entries",
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    /// `self · v` for a real vector, skipping zero entries of `v`.
    pub fn matvec_real(&self, v: &[T]) -> Result<Vec<Complex<T>>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "matvec: matrix has {} columns, vector has {} entries",
                self.cols,
                v.len()
            )));
        }
        let nz: Vec<(usize, T)> = v.iter().copied().enumerate().filter(|&(_, x)| x != T::zero()).collect();
        Ok((0..self.rows)
            .map(|r| {
                let row = self.row(r);
                nz.iter()
                    .fold(Complex::new(T::zero(), T::zero()), |acc, &(c, x)| acc + row[c] * x)
            })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::SeededRng;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn random_matrix(rng: &mut SeededRng, rows: usize, cols: usize) -> ComplexMatrix<f64> {
        ComplexMatrix::from_fn(rows, cols, |_, _| {
            let (a, b) = rng.gaussian_pair();
            c(a, b)
        })
    }

    fn random_vec(rng: &mut SeededRng, n: usize) -> Vec<Complex<f64>> {
        (0..n)
            .map(|_| {
                let (a, b) = rng.gaussian_pair();
                c(a, b)
            })
            .collect()
    }

    #[test]
    fn identity_is_neutral() {
        let v = vec![c(1.0, 2.0), c(-3.0, 0.5), c(0.0, -1.0)];
        assert_eq!(ComplexMatrix::identity(3).matvec(&v).unwrap(), v);
    }

    #[test]
    fn scalar_case() {
        let t = c(0.3, -0.7);
        let a = c(2.0, 1.0);
        let m = ComplexMatrix::from_vec(1, 1, vec![t]).unwrap();
        assert_eq!(m.matvec(&[a]).unwrap(), vec![t * a]);
    }

    #[test]
    fn matches_naive_double_loop() {
        let mut rng = SeededRng::new(3);
        let m = random_matrix(&mut rng, 8, 6);
        let v = random_vec(&mut rng, 6);
        let got = m.matvec(&v).unwrap();
        for r in 0..8 {
            let (mut re, mut im) = (0.0, 0.0);
            for k in 0..6 {
                let a = m.get(r, k);
                re += a.re * v[k].re - a.im * v[k].im;
                im += a.re * v[k].im + a.im * v[k].re;
            }
            assert!((got[r].re - re).abs() < 1e-12);
            assert!((got[r].im - im).abs() < 1e-12);
        }
    }

    #[test]
    fn real_path_agrees() {
        let mut rng = SeededRng::new(4);
        let m = random_matrix(&mut rng, 5, 7);
        let v: Vec<f64> = (0..7).map(|i| if i % 3 == 0 { 0.0 } else { rng.uniform() }).collect();
        let vc: Vec<_> = v.iter().map(|&x| c(x, 0.0)).collect();
        let a = m.matvec_real(&v).unwrap();
        let b = m.matvec(&vc).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn length_mismatch() {
        let m = ComplexMatrix::<f64>::zeros(2, 3);
        assert!(matches!(m.matvec(&[c(1.0, 0.0)]), Err(Error::Dimension(_))));
        assert!(m.matvec_real(&[1.0; 4]).is_err());
    }

    #[test]
    fn distributive_over_addition() {
        let mut rng = SeededRng::new(11);
        let m = random_matrix(&mut rng, 6, 9);
        let a = random_vec(&mut rng, 9);
        let b = random_vec(&mut rng, 9);
        let sum: Vec<_> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let lhs = m.matvec(&sum).unwrap();
        let ma = m.matvec(&a).unwrap();
        let mb = m.matvec(&b).unwrap();
        for i in 0..6 {
            assert!((lhs[i] - (ma[i] + mb[i])).norm() < 1e-12);
        }
    }
}
