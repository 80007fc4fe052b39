//! Binary PGM (P5, maxval 255) images.

use std::path::Path;

use speckle_core::numerics::RealGrid;
use speckle_core::{Error, Real, Result};

/// Encodes values in `[0, 1]` as `round(255 v)`; values outside are clamped.
pub fn encode_pgm<T: Real>(grid: &RealGrid<T>) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", grid.cols(), grid.rows()).into_bytes();
    out.extend(grid.as_slice().iter().map(|v| {
        let v = v.as_f64();
        let v = if v.is_finite() { v.clamp(0.0, 1.0) } else { 0.0 };
        (255.0 * v).round() as u8
    }));
    out
}

pub fn write_pgm<T: Real>(path: &Path, grid: &RealGrid<T>) -> Result<()> {
    std::fs::write(path, encode_pgm(grid)).map_err(|e| Error::io(path, e))
}

/// Scales a non-negative image by its maximum for display.
pub fn max_normalized<T: Real>(grid: &RealGrid<T>) -> RealGrid<T> {
    let m = grid.max();
    if m > T::zero() {
        grid.map(|v| v / m)
    } else {
        grid.clone()
    }
}

/// Decodes a P5 image with maxval 255 back to `[0, 1]` values.
pub fn decode_pgm(bytes: &[u8]) -> Result<RealGrid<f64>> {
    let mut fields = Vec::new();
    let mut at = 0;
    while fields.len() < 4 {
        while at < bytes.len() && bytes[at].is_ascii_whitespace() {
            at += 1;
        }
        let start = at;
        while at < bytes.len() && !bytes[at].is_ascii_whitespace() {
            at += 1;
        }
        if start == at {
            return Err(Error::Format("truncated PGM header".into()));
        }
        fields.push(String::from_utf8_lossy(&bytes[start..at]).into_owned());
    }
    if fields[0] != "P5" || fields[3] != "255" {
        return Err(Error::Format("only P5 with maxval 255 is supported".into()));
    }
    let parse = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| Error::Format(format!("bad PGM size `{s}`")))
    };
    let (cols, rows) = (parse(&fields[1])?, parse(&fields[2])?);
    let data = &bytes[at + 1..];
    if data.len() != rows * cols {
        return Err(Error::Length {
            expected: rows * cols,
            found: data.len(),
        });
    }
    RealGrid::from_vec(rows, cols, data.iter().map(|&b| b as f64 / 255.0).collect())
}
