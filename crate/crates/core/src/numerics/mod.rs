//! Seeded sampling, grids, complex linear algebra and the 2D FFT.

mod complex;
mod fft;
mod grid;
mod rng;
pub mod stats;

pub use complex::ComplexMatrix;
pub use fft::{fft2, Direction, Fft2};
pub use grid::RealGrid;
pub use rng::{box_muller, derive_seed, splitmix64, SeededRng};
