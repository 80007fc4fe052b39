//! Simulated imaging through scattering media.
//!
//! * [`numerics`]: seeded sampling, grids, complex algebra, radix-2 FFT.
//! * [`scatter`]: thick (transmission-matrix) and thin (convolutional) speckle formation.
//! * [`dataset`]: IDX images, preprocessing, synthetic objects, on-disk corpora.
//! * [`dnn`]: dense reconstruction network, SGD training, checkpoints.
//! * [`baseline`]: autocorrelation and phase-retrieval reconstruction.

pub mod baseline;
pub mod dataset;
pub mod dnn;
pub mod error;
pub mod numerics;
pub mod scalar;
pub mod scatter;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Grid32 = numerics::RealGrid<f32>;
pub type Grid64 = numerics::RealGrid<f64>;
pub type Medium32 = scatter::Medium<f32>;
pub type Medium64 = scatter::Medium<f64>;
pub type Speckle32 = scatter::SpecklePattern<f32>;
pub type Speckle64 = scatter::SpecklePattern<f64>;
pub type Network32 = dnn::Network<f32>;
pub type Network64 = dnn::Network<f64>;
pub type Autocorrelogram64 = baseline::Autocorrelogram<f64>;
