use rand_distr::{Distribution, Poisson};

use crate::error::{Error, Result};
use crate::numerics::{RealGrid, SeededRng};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Normalization {
    Raw,
    MeanOne,
    MaxOne,
}

impl Normalization {
    pub fn as_str(self) -> &'static str {
        match self {
            Normalization::Raw => "raw",
            Normalization::MeanOne => "mean-one",
            Normalization::MaxOne => "max-one",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "raw" => Ok(Normalization::Raw),
            "mean-one" => Ok(Normalization::MeanOne),
            "max-one" => Ok(Normalization::MaxOne),
            other => Err(Error::Config(format!("unknown normalization `{other}`"))),
        }
    }
}

/// Detector model: Poisson shot noise at `photon_scale` photons per unit
/// intensity, then additive Gaussian read noise clamped at zero.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NoiseModel {
    pub photon_scale: f64,
    pub read_sigma: f64,
}

impl NoiseModel {
    pub const NONE: NoiseModel = NoiseModel {
        photon_scale: 0.0,
        read_sigma: 0.0,
    };

    pub fn is_noiseless(&self) -> bool {
        self.photon_scale == 0.0 && self.read_sigma == 0.0
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.photon_scale >= 0.0 && self.photon_scale.is_finite()) {
            return Err(Error::Config(format!(
                "photon_scale must be finite and >= 0, got {}",
                self.photon_scale
            )));
        }
        if !(self.read_sigma >= 0.0 && self.read_sigma.is_finite()) {
            return Err(Error::Config(format!(
                "read_sigma must be finite and >= 0, got {}",
                self.read_sigma
            )));
        }
        Ok(())
    }
}

/// Nonnegative camera intensity image.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecklePattern<T> {
    grid: RealGrid<T>,
    normalization: Normalization,
}

impl<T: Real> SpecklePattern<T> {
    pub fn new(grid: RealGrid<T>, normalization: Normalization) -> Result<Self> {
        if let Some(v) = grid.as_slice().iter().find(|v| **v < T::zero()) {
            return Err(Error::Domain(format!("negative speckle intensity {v}")));
        }
        if grid.as_slice().iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("non-finite speckle intensity".into()));
        }
        Ok(Self { grid, normalization })
    }

    pub(crate) fn new_unchecked(grid: RealGrid<T>, normalization: Normalization) -> Self {
        Self { grid, normalization }
    }

    pub fn raw(grid: RealGrid<T>) -> Result<Self> {
        Self::new(grid, Normalization::Raw)
    }

    pub fn grid(&self) -> &RealGrid<T> {
        &self.grid
    }

    pub fn into_grid(self) -> RealGrid<T> {
        self.grid
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn side(&self) -> usize {
        self.grid.rows()
    }

    /// Rescales to the requested mode. An all-zero pattern cannot be
    /// rescaled and comes back unchanged, still flagged `Raw`.
    pub fn normalized(&self, mode: Normalization) -> Self {
        let divisor = match mode {
            Normalization::Raw => return self.clone(),
            Normalization::MeanOne => self.grid.mean(),
            Normalization::MaxOne => self.grid.max(),
        };
        if divisor <= T::zero() {
            return Self::new_unchecked(self.grid.clone(), Normalization::Raw);
        }
        Self::new_unchecked(self.grid.map(|v| v / divisor), mode)
    }
}

/// Applies the detector model. Output keeps the input's normalization tag.
pub fn noise_apply<T: Real>(
    pattern: &SpecklePattern<T>,
    noise: &NoiseModel,
    rng: &mut SeededRng,
) -> Result<SpecklePattern<T>> {
    noise.validate()?;
    if noise.is_noiseless() {
        return Ok(pattern.clone());
    }
    let mut grid = pattern.grid.clone();
    if noise.photon_scale > 0.0 {
        for v in grid.as_mut_slice() {
            let lambda = noise.photon_scale * v.as_f64();
            let counts = if lambda > 0.0 {
                Poisson::new(lambda)
                    .map_err(|e| Error::Domain(format!("poisson rate {lambda}: {e}")))?
                    .sample(rng)
            } else {
                0.0
            };
            *v = T::of(counts / noise.photon_scale);
        }
    }
    if noise.read_sigma > 0.0 {
        for v in grid.as_mut_slice() {
            let (g, _) = rng.gaussian_pair();
            *v = T::of((v.as_f64() + noise.read_sigma * g).max(0.0));
        }
    }
    Ok(SpecklePattern::new_unchecked(grid, pattern.normalization))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pattern(vals: Vec<f64>, side: usize) -> SpecklePattern<f64> {
        SpecklePattern::raw(RealGrid::from_vec(side, side, vals).unwrap()).unwrap()
    }

    #[test]
    fn rejects_negative() {
        let g = RealGrid::from_vec(1, 2, vec![1.0, -0.5]).unwrap();
        assert!(SpecklePattern::raw(g).is_err());
    }

    #[test]
    fn normalization_modes() {
        let p = pattern(vec![1.0, 2.0, 3.0, 6.0], 2);
        let m = p.normalized(Normalization::MeanOne);
        assert_eq!(m.normalization(), Normalization::MeanOne);
        assert!((m.grid().mean() - 1.0).abs() < 1e-15);
        let x = p.normalized(Normalization::MaxOne);
        assert_eq!(x.grid().max(), 1.0);
        let z = pattern(vec![0.0; 4], 2).normalized(Normalization::MeanOne);
        assert_eq!(z.normalization(), Normalization::Raw);
        assert_eq!(z.grid().sum(), 0.0);
    }

    #[test]
    fn noiseless_is_identity() {
        let p = pattern(vec![0.5, 1.5, 2.0, 0.0], 2);
        let mut rng = SeededRng::new(0);
        assert_eq!(noise_apply(&p, &NoiseModel::NONE, &mut rng).unwrap(), p);
    }

    #[test]
    fn high_photon_count_is_close() {
        let mut rng = SeededRng::new(9);
        let vals: Vec<f64> = (0..1024).map(|_| 0.2 + rng.uniform() * 3.0).collect();
        let p = pattern(vals.clone(), 32);
        let noise = NoiseModel {
            photon_scale: 1e6,
            read_sigma: 0.0,
        };
        let out = noise_apply(&p, &noise, &mut rng).unwrap();
        let within = out
            .grid()
            .as_slice()
            .iter()
            .zip(&vals)
            .filter(|(o, i)| ((**o - **i) / **i).abs() < 0.01)
            .count();
        assert!(within as f64 / 1024.0 > 0.99);
    }

    #[test]
    fn read_noise_on_zero_pattern() {
        let mut rng = SeededRng::new(10);
        let p = pattern(vec![0.0; 4096], 64);
        let noise = NoiseModel {
            photon_scale: 0.0,
            read_sigma: 0.1,
        };
        let out = noise_apply(&p, &noise, &mut rng).unwrap();
        assert!(out.grid().as_slice().iter().all(|v| *v >= 0.0));
        let mean = out.grid().mean();
        // Clamped half-normal: E = sigma / sqrt(2 pi) ~ 0.0399
        assert!(mean > 0.0 && mean < 0.1, "mean {mean}");
    }

    #[test]
    fn rejects_negative_noise_parameters() {
        let p = pattern(vec![1.0; 4], 2);
        let mut rng = SeededRng::new(0);
        let bad = NoiseModel {
            photon_scale: -1.0,
            read_sigma: 0.0,
        };
        assert!(noise_apply(&p, &bad, &mut rng).is_err());
    }
}
