//! Speckle formation behind a synthetic scattering slab.

mod medium;
mod metrics;
mod pattern;

pub use medium::{sample_medium, Medium, MediumSpec, Operator, Regime, SpecklePsf, TransmissionMatrix};
pub use metrics::{optical_depth, shift_correlation, speckle_contrast};
pub use pattern::{noise_apply, NoiseModel, Normalization, SpecklePattern};
