//! Byte image -> object amplitude grid.
//!
//! Order: scale to `[0, 1]`, nearest-neighbour magnify, centered zero-pad,
//! block-mean downsample.

use crate::error::{Error, Result};
use crate::numerics::RealGrid;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Preprocessing {
    pub magnify: usize,
    pub pad_to: Option<usize>,
    pub downsample_to: Option<usize>,
}

impl Preprocessing {
    /// 28 -> pad 32 -> 2x2 block mean -> 16.
    pub const DESK: Preprocessing = Preprocessing {
        magnify: 1,
        pad_to: Some(32),
        downsample_to: Some(16),
    };

    /// 18x magnification (504 px), reduced back to 28 for the object grid.
    pub const FULL: Preprocessing = Preprocessing {
        magnify: 18,
        pad_to: Some(504),
        downsample_to: Some(28),
    };

    /// Side length produced for a square source of side `source`.
    pub fn output_side(&self, source: usize) -> Result<usize> {
        if self.magnify == 0 {
            return Err(Error::Config("magnify must be >= 1".into()));
        }
        let mut side = source * self.magnify;
        if let Some(p) = self.pad_to {
            if p < side {
                return Err(Error::Config(format!(
                    "pad_to {p} is smaller than the magnified image ({side})"
                )));
            }
            side = p;
        }
        if let Some(d) = self.downsample_to {
            if d == 0 || !side.is_multiple_of(d) {
                return Err(Error::Config(format!("cannot block-reduce {side} pixels to {d}")));
            }
            side = d;
        }
        Ok(side)
    }
}

pub fn magnify<T: Real>(grid: &RealGrid<T>, factor: usize) -> Result<RealGrid<T>> {
    if factor == 0 {
        return Err(Error::Config("magnify must be >= 1".into()));
    }
    Ok(RealGrid::from_fn(grid.rows() * factor, grid.cols() * factor, |r, c| {
        grid.get(r / factor, c / factor)
    }))
}

pub fn pad_centered<T: Real>(grid: &RealGrid<T>, side: usize) -> Result<RealGrid<T>> {
    if side < grid.rows() || side < grid.cols() {
        return Err(Error::Config(format!(
            "cannot pad {}x{} to {side}",
            grid.rows(),
            grid.cols()
        )));
    }
    let (top, left) = ((side - grid.rows()) / 2, (side - grid.cols()) / 2);
    let mut out = RealGrid::zeros(side, side);
    for r in 0..grid.rows() {
        for c in 0..grid.cols() {
            out.set(top + r, left + c, grid.get(r, c));
        }
    }
    Ok(out)
}

pub fn block_downsample<T: Real>(grid: &RealGrid<T>, side: usize) -> Result<RealGrid<T>> {
    if side == 0 || !grid.rows().is_multiple_of(side) || !grid.cols().is_multiple_of(side) {
        return Err(Error::Config(format!(
            "cannot block-reduce {}x{} to {side}",
            grid.rows(),
            grid.cols()
        )));
    }
    let (br, bc) = (grid.rows() / side, grid.cols() / side);
    let norm = T::of_usize(br * bc);
    let mut out = RealGrid::zeros(side, side);
    for r in 0..grid.rows() {
        for c in 0..grid.cols() {
            let (o_r, o_c) = (r / br, c / bc);
            out.set(o_r, o_c, out.get(o_r, o_c) + grid.get(r, c));
        }
    }
    Ok(out.map(|v| v / norm))
}

/// Full pipeline for a square byte image.
pub fn preprocess<T: Real>(pixels: &[u8], side: usize, cfg: &Preprocessing) -> Result<RealGrid<T>> {
    if pixels.len() != side * side {
        return Err(Error::Dimension(format!(
            "{} pixels is not a {side}x{side} image",
            pixels.len()
        )));
    }
    cfg.output_side(side)?;
    let base = RealGrid::from_fn(side, side, |r, c| T::of(pixels[r * side + c] as f64 / 255.0));
    let mut grid = if cfg.magnify > 1 {
        magnify(&base, cfg.magnify)?
    } else {
        base
    };
    if let Some(p) = cfg.pad_to {
        grid = pad_centered(&grid, p)?;
    }
    if let Some(d) = cfg.downsample_to {
        grid = block_downsample(&grid, d)?;
    }
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::SeededRng;

    #[test]
    fn zeros_stay_zero() {
        let g: RealGrid<f64> = preprocess(&[0u8; 784], 28, &Preprocessing::DESK).unwrap();
        assert_eq!((g.rows(), g.sum()), (16, 0.0));
    }

    #[test]
    fn nearest_neighbour_magnify() {
        let g = RealGrid::from_vec(2, 2, vec![1.0f64, 0.0, 0.0, 0.0]).unwrap();
        let m = magnify(&g, 2).unwrap();
        assert_eq!(m.rows(), 4);
        for r in 0..4 {
            for c in 0..4 {
                let expect = if r < 2 && c < 2 { 1.0 } else { 0.0 };
                assert_eq!(m.get(r, c), expect);
            }
        }
    }

    #[test]
    fn block_mean_matches_naive_loop() {
        let mut rng = SeededRng::new(8);
        let g = RealGrid::from_fn(28, 28, |_, _| (rng.below(256) as f64) / 255.0);
        let d = block_downsample(&g, 14).unwrap();
        for r in 0..14 {
            for c in 0..14 {
                let mut acc = 0.0;
                for i in 0..2 {
                    for j in 0..2 {
                        acc += g.get(2 * r + i, 2 * c + j);
                    }
                }
                assert_eq!(d.get(r, c), acc / 4.0);
            }
        }
    }

    #[test]
    fn centered_padding() {
        let g = RealGrid::filled(2, 2, 1.0f64);
        let p = pad_centered(&g, 6).unwrap();
        assert_eq!(p.get(2, 2), 1.0);
        assert_eq!(p.get(3, 3), 1.0);
        assert_eq!(p.get(1, 1), 0.0);
        assert_eq!(p.sum(), 4.0);
    }

    #[test]
    fn geometry_errors() {
        let bad_pad = Preprocessing {
            magnify: 2,
            pad_to: Some(40),
            downsample_to: None,
        };
        assert!(matches!(
            preprocess::<f64>(&[0; 784], 28, &bad_pad),
            Err(Error::Config(_))
        ));
        let bad_down = Preprocessing {
            magnify: 1,
            pad_to: None,
            downsample_to: Some(16),
        };
        assert!(preprocess::<f64>(&[0; 784], 28, &bad_down).is_err());
        assert!(preprocess::<f64>(&[0; 10], 28, &Preprocessing::DESK).is_err());
    }

    #[test]
    fn full_geometry_preserves_image() {
        let mut rng = SeededRng::new(1);
        let px: Vec<u8> = (0..784).map(|_| rng.below(256) as u8).collect();
        let g: RealGrid<f64> = preprocess(&px, 28, &Preprocessing::FULL).unwrap();
        assert_eq!(g.rows(), 28);
        for (v, p) in g.as_slice().iter().zip(&px) {
            assert!((v - *p as f64 / 255.0).abs() < 1e-12);
        }
    }

    #[test]
    fn desk_values_in_unit_range() {
        let px = [255u8; 784];
        let g: RealGrid<f64> = preprocess(&px, 28, &Preprocessing::DESK).unwrap();
        assert!(g.as_slice().iter().all(|v| (0.0..=1.0).contains(v)));
        // the 2-pixel pad fills exactly the outer ring of blocks
        assert_eq!(g.get(0, 0), 0.0);
        assert_eq!(g.get(15, 7), 0.0);
        assert_eq!(g.get(1, 1), 1.0);
        assert_eq!(g.sum(), 196.0);
    }
}
