//! Memory-effect reconstruction: speckle autocorrelation followed by
//! hybrid input-output phase retrieval.

mod align;
mod autocorr;
mod hio;

pub use align::align_score;
pub use autocorr::{autocorr, autocorr_direct, autocorr_grid, Autocorrelogram};
pub use hio::{fourier_modulus, hio_retrieve, Retrieval, RetrievalConfig, SupportMask};
