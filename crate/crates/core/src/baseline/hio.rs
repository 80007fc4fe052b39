use num_complex::Complex;
use rayon::prelude::*;

use super::autocorr::Autocorrelogram;
use crate::error::{Error, Result};
use crate::numerics::{Direction, Fft2, RealGrid, SeededRng};

/// Binary object-domain support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportMask {
    rows: usize,
    cols: usize,
    mask: Vec<bool>,
}

impl SupportMask {
    pub fn new(rows: usize, cols: usize, mask: Vec<bool>) -> Result<Self> {
        if mask.len() != rows * cols {
            return Err(Error::Length {
                expected: rows * cols,
                found: mask.len(),
            });
        }
        if !mask.contains(&true) {
            return Err(Error::Config("support mask is empty".into()));
        }
        Ok(Self { rows, cols, mask })
    }

    /// `height x width` box anchored at the origin of a `rows x cols` grid.
    pub fn top_left_box(rows: usize, cols: usize, height: usize, width: usize) -> Result<Self> {
        if height > rows || width > cols {
            return Err(Error::Config(format!(
                "{height}x{width} support does not fit a {rows}x{cols} grid"
            )));
        }
        let mask = (0..rows * cols)
            .map(|i| i / cols < height && i % cols < width)
            .collect();
        Self::new(rows, cols, mask)
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn contains(&self, index: usize) -> bool {
        self.mask[index]
    }

    pub fn count(&self) -> usize {
        self.mask.iter().filter(|m| **m).count()
    }

    /// Circular shifts `a - b` for `a`, `b` in the support, in unshifted
    /// (origin-first) layout.
    pub fn difference_set(&self) -> Result<Vec<bool>> {
        let fft = Fft2::<f64>::new(self.rows, self.cols)?;
        let mut buf: Vec<Complex<f64>> = self
            .mask
            .iter()
            .map(|&m| Complex::new(if m { 1.0 } else { 0.0 }, 0.0))
            .collect();
        fft.process(&mut buf, Direction::Forward);
        for z in buf.iter_mut() {
            *z = Complex::new(z.norm_sqr(), 0.0);
        }
        fft.process(&mut buf, Direction::Inverse);
        // The zero shift overlaps every support pixel; a single overlapping pair is 1/count of that.
        let threshold = 0.5 * buf[0].re / self.count() as f64;
        Ok(buf.iter().map(|z| z.re > threshold).collect())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RetrievalConfig {
    pub iterations: usize,
    pub beta: f64,
    pub er_tail: usize,
    pub restarts: usize,
    pub support: SupportMask,
    pub seed: u64,
}

impl RetrievalConfig {
    /// beta 0.9, 500 HIO iterations, 50 error-reduction iterations, 10 restarts.
    pub fn standard(support: SupportMask, seed: u64) -> Self {
        Self {
            iterations: 500,
            beta: 0.9,
            er_tail: 50,
            restarts: 10,
            support,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::Config("iterations must be >= 1".into()));
        }
        if !(self.beta > 0.0 && self.beta <= 1.0) {
            return Err(Error::Config(format!("beta must be in (0, 1], got {}", self.beta)));
        }
        if self.restarts == 0 {
            return Err(Error::Config("restarts must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Retrieval {
    pub estimate: RealGrid<f64>,
    /// `|| |F x| - M || / || M ||` of the returned estimate.
    pub residual: f64,
    pub restart: usize,
    /// Residual after each error-reduction iteration of the winning restart.
    pub er_residuals: Vec<f64>,
}

/// Fourier modulus implied by an autocorrelogram:
/// `sqrt(max(Re FFT(max(ifftshift(ac), 0) * W), 0))`, where `W` keeps only the
/// shifts an object confined to `support` can produce.
pub fn fourier_modulus<T: crate::Real>(ac: &Autocorrelogram<T>, support: &SupportMask) -> Result<Vec<f64>> {
    let g = ac.grid().cast::<f64>().ifftshift();
    if support.shape() != (g.rows(), g.cols()) {
        return Err(Error::Dimension(format!(
            "support {:?} vs autocorrelogram {}x{}",
            support.shape(),
            g.rows(),
            g.cols()
        )));
    }
    let window = support.difference_set()?;
    let fft = Fft2::<f64>::new(g.rows(), g.cols())?;
    let mut buf: Vec<Complex<f64>> = g
        .as_slice()
        .iter()
        .zip(&window)
        .map(|(&v, &w)| Complex::new(if w { v.max(0.0) } else { 0.0 }, 0.0))
        .collect();
    fft.process(&mut buf, Direction::Forward);
    Ok(buf.iter().map(|z| z.re.max(0.0).sqrt()).collect())
}

fn residual(spectrum: &[Complex<f64>], modulus: &[f64], modulus_norm: f64) -> f64 {
    spectrum
        .iter()
        .zip(modulus)
        .map(|(z, m)| (z.norm() - m).powi(2))
        .sum::<f64>()
        .sqrt()
        / modulus_norm
}

struct Run {
    estimate: Vec<f64>,
    residual: f64,
    er_residuals: Vec<f64>,
}

fn run_once(fft: &Fft2<f64>, modulus: &[f64], norm: f64, cfg: &RetrievalConfig, restart: usize) -> Option<Run> {
    let n = modulus.len();
    let mut rng = SeededRng::derived(cfg.seed, restart as u64);
    let mut x: Vec<f64> = (0..n)
        .map(|i| if cfg.support.contains(i) { rng.uniform() } else { 0.0 })
        .collect();
    let mut buf = vec![Complex::new(0.0, 0.0); n];
    let mut er_residuals = Vec::with_capacity(cfg.er_tail);
    let beta = cfg.beta;
    for it in 0..cfg.iterations + cfg.er_tail {
        for (b, &v) in buf.iter_mut().zip(&x) {
            *b = Complex::new(v, 0.0);
        }
        fft.process(&mut buf, Direction::Forward);
        if it >= cfg.iterations {
            er_residuals.push(residual(&buf, modulus, norm));
        }
        for (z, &m) in buf.iter_mut().zip(modulus) {
            let a = z.norm();
            *z = if a > 0.0 { *z * (m / a) } else { Complex::new(m, 0.0) };
        }
        fft.process(&mut buf, Direction::Inverse);
        let hio = it < cfg.iterations;
        for (i, (xi, z)) in x.iter_mut().zip(&buf).enumerate() {
            let p = z.re;
            *xi = if cfg.support.contains(i) && p >= 0.0 {
                p
            } else if hio {
                *xi - beta * p
            } else {
                0.0
            };
        }
        if x.iter().any(|v| !v.is_finite()) {
            return None;
        }
    }
    for (b, &v) in buf.iter_mut().zip(&x) {
        *b = Complex::new(v, 0.0);
    }
    fft.process(&mut buf, Direction::Forward);
    let res = residual(&buf, modulus, norm);
    res.is_finite().then_some(Run {
        estimate: x,
        residual: res,
        er_residuals,
    })
}

/// Hybrid input-output phase retrieval from an autocorrelogram.
///
/// Restarts run in parallel; the lowest residual wins, ties going to the
/// lower restart index.
pub fn hio_retrieve<T: crate::Real>(ac: &Autocorrelogram<T>, cfg: &RetrievalConfig) -> Result<Retrieval> {
    cfg.validate()?;
    let (rows, cols) = (ac.grid().rows(), ac.grid().cols());
    if cfg.support.shape() != (rows, cols) {
        return Err(Error::Dimension(format!(
            "support {:?} vs autocorrelogram {rows}x{cols}",
            cfg.support.shape()
        )));
    }
    let modulus = fourier_modulus(ac, &cfg.support)?;
    let norm = modulus.iter().map(|m| m * m).sum::<f64>().sqrt();
    if !(norm > 0.0) {
        return Err(Error::Degenerate("autocorrelogram has no positive spectrum".into()));
    }
    let fft = Fft2::<f64>::new(rows, cols)?;
    let runs: Vec<Option<Run>> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| run_once(&fft, &modulus, norm, cfg, r))
        .collect();
    let (restart, best) = runs
        .into_iter()
        .enumerate()
        .filter_map(|(i, r)| r.map(|r| (i, r)))
        .min_by(|(ia, a), (ib, b)| a.residual.total_cmp(&b.residual).then(ia.cmp(ib)))
        .ok_or_else(|| Error::Retrieval(format!("all {} restarts diverged", cfg.restarts)))?;
    Ok(Retrieval {
        estimate: RealGrid::from_vec(rows, cols, best.estimate)?,
        residual: best.residual,
        restart,
        er_residuals: best.er_residuals,
    })
}
