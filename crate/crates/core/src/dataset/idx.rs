//! IDX container (MNIST / EMNIST): big-endian magic, big-endian u32 dims, raw bytes.

use std::path::Path;

use crate::error::{Error, Result};

pub const IMAGE_MAGIC: u32 = 0x0000_0803;
pub const LABEL_MAGIC: u32 = 0x0000_0801;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdxImageSet {
    pub count: usize,
    pub rows: usize,
    pub cols: usize,
    pixels: Vec<u8>,
}

impl IdxImageSet {
    pub fn new(count: usize, rows: usize, cols: usize, pixels: Vec<u8>) -> Result<Self> {
        let expected = count * rows * cols;
        if pixels.len() != expected {
            return Err(Error::Length {
                expected,
                found: pixels.len(),
            });
        }
        Ok(Self {
            count,
            rows,
            cols,
            pixels,
        })
    }

    pub fn image(&self, index: usize) -> &[u8] {
        let n = self.rows * self.cols;
        &self.pixels[index * n..(index + 1) * n]
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    /// Encodes back into IDX bytes.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(16 + self.pixels.len());
        out.extend_from_slice(&IMAGE_MAGIC.to_be_bytes());
        for d in [self.count, self.rows, self.cols] {
            out.extend_from_slice(&(d as u32).to_be_bytes());
        }
        out.extend_from_slice(&self.pixels);
        out
    }
}

fn be_u32(bytes: &[u8], at: usize) -> Result<u32> {
    bytes
        .get(at..at + 4)
        .map(|b| u32::from_be_bytes([b[0], b[1], b[2], b[3]]))
        .ok_or(Error::Length {
            expected: at + 4,
            found: bytes.len(),
        })
}

pub fn parse_idx(bytes: &[u8]) -> Result<IdxImageSet> {
    let magic = be_u32(bytes, 0)?;
    if magic != IMAGE_MAGIC {
        return Err(Error::Format(format!(
            "IDX magic {magic:#010x}, expected {IMAGE_MAGIC:#010x} (unsigned byte, 3 dims)"
        )));
    }
    let count = be_u32(bytes, 4)? as usize;
    let rows = be_u32(bytes, 8)? as usize;
    let cols = be_u32(bytes, 12)? as usize;
    let expected = 16 + count * rows * cols;
    if bytes.len() < expected {
        return Err(Error::Length {
            expected,
            found: bytes.len(),
        });
    }
    if bytes.len() > expected {
        return Err(Error::Format(format!(
            "{} trailing bytes after IDX payload",
            bytes.len() - expected
        )));
    }
    IdxImageSet::new(count, rows, cols, bytes[16..].to_vec())
}

pub fn parse_idx_labels(bytes: &[u8]) -> Result<Vec<u8>> {
    let magic = be_u32(bytes, 0)?;
    if magic != LABEL_MAGIC {
        return Err(Error::Format(format!(
            "IDX label magic {magic:#010x}, expected {LABEL_MAGIC:#010x}"
        )));
    }
    let count = be_u32(bytes, 4)? as usize;
    if bytes.len() != 8 + count {
        return Err(Error::Length {
            expected: 8 + count,
            found: bytes.len(),
        });
    }
    Ok(bytes[8..].to_vec())
}

pub fn read_idx(path: &Path) -> Result<IdxImageSet> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    parse_idx(&bytes)
}

pub fn read_idx_labels(path: &Path) -> Result<Vec<u8>> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    parse_idx_labels(&bytes)
}
