//! Synthetic scattering media.
//!
//! Thick regime: an iid circular complex-Gaussian transmission matrix maps the
//! flattened object amplitude to the output field, `I_m = |Σ_n t_mn o_n|²`.
//! Columns are independent, so there is no memory effect at all.
//!
//! Thin regime: the intensity is the circular convolution of the object
//! (zero-embedded into the speckle grid) with a fully developed speckle PSF,
//! which is exactly shift-equivariant.

use num_complex::Complex;

use super::pattern::{noise_apply, NoiseModel, Normalization, SpecklePattern};
use crate::error::{Error, Result};
use crate::numerics::{ComplexMatrix, RealGrid, SeededRng};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    Thick,
    Thin,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Thick => "thick",
            Regime::Thin => "thin",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "thick" => Ok(Regime::Thick),
            "thin" => Ok(Regime::Thin),
            other => Err(Error::Config(format!("unknown regime `{other}` (thick|thin)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MediumSpec {
    pub regime: Regime,
    pub object_side: usize,
    pub speckle_side: usize,
    pub seed: u64,
    /// Slab thickness; metadata for optical-depth reporting only.
    pub thickness_mm: f64,
    /// Scattering mean free path; metadata for optical-depth reporting only.
    pub ls_um: f64,
    pub noise: NoiseModel,
}

impl MediumSpec {
    /// 16x16 objects, 32x32 speckle, thick regime, 3 mm slab with 224 µm mean free path.
    pub fn desk() -> Self {
        Self {
            regime: Regime::Thick,
            object_side: 16,
            speckle_side: 32,
            seed: 1,
            thickness_mm: 3.0,
            ls_um: 224.0,
            noise: NoiseModel::NONE,
        }
    }

    /// 28x28 objects, 64x64 speckle.
    pub fn full() -> Self {
        Self {
            object_side: 28,
            speckle_side: 64,
            ..Self::desk()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.object_side == 0 {
            return Err(Error::Config("object_side must be >= 1".into()));
        }
        if !self.speckle_side.is_power_of_two() {
            return Err(Error::Config(format!(
                "speckle_side {} is not a power of two",
                self.speckle_side
            )));
        }
        if self.regime == Regime::Thin && self.object_side > self.speckle_side {
            return Err(Error::Config(format!(
                "thin regime embeds the object into the speckle grid; object_side {} > speckle_side {}",
                self.object_side, self.speckle_side
            )));
        }
        if !(self.thickness_mm >= 0.0 && self.thickness_mm.is_finite()) {
            return Err(Error::Config(format!(
                "thickness_mm must be >= 0, got {}",
                self.thickness_mm
            )));
        }
        if !(self.ls_um > 0.0 && self.ls_um.is_finite()) {
            return Err(Error::Config(format!("ls_um must be > 0, got {}", self.ls_um)));
        }
        self.noise.validate()
    }
}

/// Field-level operator of the thick regime, shape `(speckle_side², object_side²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransmissionMatrix<T> {
    t: ComplexMatrix<T>,
}

impl<T: Real> TransmissionMatrix<T> {
    /// Entries `(g1 + i g2) / sqrt(2 N)` with `N = inputs`, drawn in row-major order.
    pub fn sample(outputs: usize, inputs: usize, rng: &mut SeededRng) -> Self {
        let scale = (1.0 / (2.0 * inputs as f64)).sqrt();
        let t = ComplexMatrix::from_fn(outputs, inputs, |_, _| {
            let (re, im) = rng.gaussian_pair();
            Complex::new(T::of(re * scale), T::of(im * scale))
        });
        Self { t }
    }

    pub fn from_matrix(t: ComplexMatrix<T>) -> Self {
        Self { t }
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.t
    }

    pub fn shape(&self) -> (usize, usize) {
        self.t.shape()
    }
}

/// Incoherent point-spread intensity of the thin regime (mean one).
#[derive(Debug, Clone, PartialEq)]
pub struct SpecklePsf<T> {
    h: RealGrid<T>,
}

impl<T: Real> SpecklePsf<T> {
    pub fn sample(side: usize, rng: &mut SeededRng) -> Self {
        let raw: Vec<f64> = (0..side * side)
            .map(|_| {
                let (re, im) = rng.gaussian_pair();
                0.5 * (re * re + im * im)
            })
            .collect();
        let mean = raw.iter().sum::<f64>() / raw.len() as f64;
        let h = RealGrid::from_fn(side, side, |r, c| T::of(raw[r * side + c] / mean));
        Self { h }
    }

    pub fn from_grid(h: RealGrid<T>) -> Self {
        Self { h }
    }

    pub fn grid(&self) -> &RealGrid<T> {
        &self.h
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Operator<T> {
    Thick(TransmissionMatrix<T>),
    Thin(SpecklePsf<T>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Medium<T> {
    spec: MediumSpec,
    operator: Operator<T>,
}

/// Draws the medium operator from `spec.seed`.
pub fn sample_medium<T: Real>(spec: &MediumSpec) -> Result<Medium<T>> {
    spec.validate()?;
    let mut rng = SeededRng::new(spec.seed);
    let operator = match spec.regime {
        Regime::Thick => Operator::Thick(TransmissionMatrix::sample(
            spec.speckle_side * spec.speckle_side,
            spec.object_side * spec.object_side,
            &mut rng,
        )),
        Regime::Thin => Operator::Thin(SpecklePsf::sample(spec.speckle_side, &mut rng)),
    };
    Ok(Medium {
        spec: spec.clone(),
        operator,
    })
}

impl<T: Real> Medium<T> {
    /// Assembles a medium from an explicit operator (checked against `spec`).
    pub fn from_parts(spec: MediumSpec, operator: Operator<T>) -> Result<Self> {
        let ok = match (&operator, spec.regime) {
            (Operator::Thick(tm), Regime::Thick) => {
                tm.shape()
                    == (
                        spec.speckle_side * spec.speckle_side,
                        spec.object_side * spec.object_side,
                    )
            }
            (Operator::Thin(psf), Regime::Thin) => {
                psf.grid().rows() == spec.speckle_side && psf.grid().cols() == spec.speckle_side
            }
            _ => false,
        };
        if !ok {
            return Err(Error::Dimension("operator does not match medium spec".into()));
        }
        Ok(Self { spec, operator })
    }

    pub fn spec(&self) -> &MediumSpec {
        &self.spec
    }

    pub fn operator(&self) -> &Operator<T> {
        &self.operator
    }

    pub fn regime(&self) -> Regime {
        self.spec.regime
    }

    pub(crate) fn check_object(&self, object: &RealGrid<T>) -> Result<()> {
        let n = self.spec.object_side;
        if object.rows() != n || object.cols() != n {
            return Err(Error::Dimension(format!(
                "object is {}x{}, medium expects {n}x{n}",
                object.rows(),
                object.cols()
            )));
        }
        if let Some(v) = object.as_slice().iter().find(|v| **v < T::zero()) {
            return Err(Error::Domain(format!("negative object amplitude {v}")));
        }
        Ok(())
    }

    /// Pre-noise, unnormalized intensity.
    pub fn intensity(&self, object: &RealGrid<T>) -> Result<SpecklePattern<T>> {
        self.check_object(object)?;
        let side = self.spec.speckle_side;
        match &self.operator {
            Operator::Thick(tm) => {
                let field = tm.matrix().matvec_real(object.as_slice())?;
                let data = field.iter().map(|z| z.norm_sqr()).collect();
                Ok(SpecklePattern::new_unchecked(
                    RealGrid::from_vec(side, side, data)?,
                    Normalization::Raw,
                ))
            }
            Operator::Thin(_) => self.thin_intensity(&object.embed(side, side)?),
        }
    }

    /// Thin regime only: intensity of an object already placed on the speckle grid.
    pub(crate) fn thin_intensity(&self, embedded: &RealGrid<T>) -> Result<SpecklePattern<T>> {
        let Operator::Thin(psf) = &self.operator else {
            return Err(Error::Config("embedded intensity requires the thin regime".into()));
        };
        let side = self.spec.speckle_side;
        let h = psf.grid();
        let mut out = RealGrid::zeros(side, side);
        for sr in 0..side {
            for sc in 0..side {
                let o = embedded.get(sr, sc);
                if o == T::zero() {
                    continue;
                }
                // out(r, c) += o * h(r - sr, c - sc)
                for r in 0..side {
                    let hr = (r + side - sr) % side;
                    let row = &h.as_slice()[hr * side..(hr + 1) * side];
                    let dst = &mut out.as_mut_slice()[r * side..(r + 1) * side];
                    for (c, d) in dst.iter_mut().enumerate() {
                        *d = *d + o * row[(c + side - sc) % side];
                    }
                }
            }
        }
        Ok(SpecklePattern::new_unchecked(out, Normalization::Raw))
    }

    /// Full camera model: intensity, detector noise, then mean-one normalization.
    pub fn forward(&self, object: &RealGrid<T>, noise_rng: &mut SeededRng) -> Result<SpecklePattern<T>> {
        let clean = self.intensity(object)?;
        let noisy = noise_apply(&clean, &self.spec.noise, noise_rng)?;
        Ok(noisy.normalized(Normalization::MeanOne))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(regime: Regime, object_side: usize, speckle_side: usize) -> MediumSpec {
        MediumSpec {
            regime,
            object_side,
            speckle_side,
            ..MediumSpec::desk()
        }
    }

    #[test]
    fn deterministic_operator() {
        let s = spec(Regime::Thick, 4, 8);
        let a: Medium<f64> = sample_medium(&s).unwrap();
        let b: Medium<f64> = sample_medium(&s).unwrap();
        assert_eq!(a, b);
        let t = sample_medium::<f64>(&spec(Regime::Thin, 4, 8)).unwrap();
        assert_eq!(t, sample_medium::<f64>(&spec(Regime::Thin, 4, 8)).unwrap());
    }

    #[test]
    fn thick_shape() {
        let m: Medium<f64> = sample_medium(&spec(Regime::Thick, 16, 32)).unwrap();
        let Operator::Thick(tm) = m.operator() else { panic!() };
        assert_eq!(tm.shape(), (1024, 256));
    }

    #[test]
    fn entry_power_statistics() {
        let m: Medium<f64> = sample_medium(&spec(Regime::Thick, 16, 32)).unwrap();
        let Operator::Thick(tm) = m.operator() else { panic!() };
        let p: Vec<f64> = tm.matrix().as_slice().iter().map(|z| z.norm_sqr()).collect();
        let n = p.len() as f64;
        let mean = p.iter().sum::<f64>() / n;
        let var = p.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let se = (var / n).sqrt();
        assert!((mean - 1.0 / 256.0).abs() < 3.0 * se, "mean {mean} se {se}");
    }

    #[test]
    fn psf_mean_one() {
        let m: Medium<f64> = sample_medium(&spec(Regime::Thin, 4, 16)).unwrap();
        let Operator::Thin(psf) = m.operator() else { panic!() };
        assert!((psf.grid().mean() - 1.0).abs() < 1e-12);
        assert!(psf.grid().min() >= 0.0);
    }

    #[test]
    fn invalid_specs() {
        assert!(sample_medium::<f64>(&spec(Regime::Thick, 0, 8)).is_err());
        assert!(sample_medium::<f64>(&spec(Regime::Thick, 4, 12)).is_err());
        assert!(sample_medium::<f64>(&spec(Regime::Thin, 16, 8)).is_err());
        let mut s = spec(Regime::Thick, 4, 8);
        s.ls_um = 0.0;
        assert!(sample_medium::<f64>(&s).is_err());
    }

    #[test]
    fn zero_object_gives_zero_flagged_raw() {
        let m: Medium<f64> = sample_medium(&spec(Regime::Thick, 4, 8)).unwrap();
        let p = m.forward(&RealGrid::zeros(4, 4), &mut SeededRng::new(0)).unwrap();
        assert_eq!(p.grid().sum(), 0.0);
        assert_eq!(p.normalization(), Normalization::Raw);
    }

    #[test]
    fn scalar_medium() {
        let t = Complex::new(0.6f64, -0.4);
        let tm = TransmissionMatrix::from_matrix(ComplexMatrix::from_vec(1, 1, vec![t]).unwrap());
        let m = Medium::from_parts(spec(Regime::Thick, 1, 1), Operator::Thick(tm)).unwrap();
        let a = 0.7;
        let i = m.intensity(&RealGrid::filled(1, 1, a)).unwrap();
        assert!((i.grid().get(0, 0) - t.norm_sqr() * a * a).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_objects() {
        let m: Medium<f64> = sample_medium(&spec(Regime::Thick, 4, 8)).unwrap();
        assert!(matches!(m.intensity(&RealGrid::zeros(3, 4)), Err(Error::Dimension(_))));
        let mut o = RealGrid::zeros(4, 4);
        o.set(1, 1, -0.1);
        assert!(matches!(m.intensity(&o), Err(Error::Domain(_))));
    }

    #[test]
    fn quadratic_scaling() {
        for regime in [Regime::Thick, Regime::Thin] {
            let m: Medium<f64> = sample_medium(&spec(regime, 8, 16)).unwrap();
            let mut rng = SeededRng::new(5);
            let o = RealGrid::from_fn(8, 8, |_, _| rng.uniform());
            let base = m.intensity(&o).unwrap();
            let scaled = m.intensity(&o.map(|v| 0.5 * v)).unwrap();
            let expect = if regime == Regime::Thick { 0.25 } else { 0.5 };
            for (s, b) in scaled.grid().as_slice().iter().zip(base.grid().as_slice()) {
                assert!((s - expect * b).abs() <= 1e-12 * b.abs().max(1e-300));
            }
        }
    }

    #[test]
    fn thin_convolution_matches_definition() {
        let m: Medium<f64> = sample_medium(&spec(Regime::Thin, 2, 4)).unwrap();
        let Operator::Thin(psf) = m.operator() else { panic!() };
        let o = RealGrid::from_vec(2, 2, vec![0.2, 0.0, 0.5, 1.0]).unwrap();
        let got = m.intensity(&o).unwrap();
        for r in 0..4 {
            for c in 0..4 {
                let mut acc = 0.0;
                for (sr, sc) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                    acc += o.get(sr, sc) * psf.grid().get((r + 4 - sr) % 4, (c + 4 - sc) % 4);
                }
                assert!((got.grid().get(r, c) - acc).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn forward_normalizes_mean_one() {
        let m: Medium<f64> = sample_medium(&spec(Regime::Thick, 4, 8)).unwrap();
        let o = RealGrid::filled(4, 4, 0.5);
        let p = m.forward(&o, &mut SeededRng::new(0)).unwrap();
        assert_eq!(p.normalization(), Normalization::MeanOne);
        assert!((p.grid().mean() - 1.0).abs() < 1e-12);
    }
}
