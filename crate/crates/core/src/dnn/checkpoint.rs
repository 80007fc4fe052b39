//! SPKN checkpoint files.
//!
//! Little-endian layout:
//!
//! ```text
//! "SPKN" | version: u16
//! input_side: u32 | output_side: u32 | hidden count: u32 | hidden sizes: u32...
//! hidden activation: u8 | output activation: u8 | input offset: f32
//! per layer: w (row-major, out x in) as f32, then b as f32
//! CRC32 (IEEE) of every preceding byte: u32
//! ```

use std::path::Path;

use ndarray::{Array1, Array2};

use super::network::{Activation, DenseLayer, Network, NetworkSpec};
use crate::error::{Error, Result};
use crate::scalar::Real;

pub const CHECKPOINT_MAGIC: &[u8; 4] = b"SPKN";
pub const CHECKPOINT_VERSION: u16 = 1;

pub fn encode_checkpoint<T: Real>(net: &Network<T>) -> Vec<u8> {
    let spec = net.spec();
    let mut out = Vec::with_capacity(32 + 4 * spec.parameter_count());
    out.extend_from_slice(CHECKPOINT_MAGIC);
    out.extend_from_slice(&CHECKPOINT_VERSION.to_le_bytes());
    for v in [spec.input_side, spec.output_side, spec.hidden_sizes.len()]
        .into_iter()
        .chain(spec.hidden_sizes.iter().copied())
    {
        out.extend_from_slice(&(v as u32).to_le_bytes());
    }
    out.push(spec.hidden_activation.code());
    out.push(spec.output_activation.code());
    out.extend_from_slice(&spec.input_offset.to_le_bytes());
    for layer in net.layers() {
        for v in layer.w.iter().chain(&layer.b) {
            out.extend_from_slice(&v.as_f32().to_le_bytes());
        }
    }
    let crc = crc32fast::hash(&out);
    out.extend_from_slice(&crc.to_le_bytes());
    out
}

struct Reader<'a> {
    bytes: &'a [u8],
    at: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.at + n;
        let chunk = self.bytes.get(self.at..end).ok_or(Error::Length {
            expected: end,
            found: self.bytes.len(),
        })?;
        self.at = end;
        Ok(chunk)
    }

    fn u32(&mut self) -> Result<usize> {
        let b = self.take(4)?;
        Ok(u32::from_le_bytes([b[0], b[1], b[2], b[3]]) as usize)
    }

    fn f32s(&mut self, n: usize) -> Result<Vec<f32>> {
        let raw = self.take(n.checked_mul(4).ok_or_else(|| Error::Format("size overflow".into()))?)?;
        Ok(raw
            .chunks_exact(4)
            .map(|b| f32::from_le_bytes([b[0], b[1], b[2], b[3]]))
            .collect())
    }
}

pub fn decode_checkpoint<T: Real>(bytes: &[u8]) -> Result<Network<T>> {
    if bytes.len() < 10 {
        return Err(Error::Length {
            expected: 10,
            found: bytes.len(),
        });
    }
    let (payload, tail) = bytes.split_at(bytes.len() - 4);
    let stored = u32::from_le_bytes([tail[0], tail[1], tail[2], tail[3]]);
    if &payload[..4] != CHECKPOINT_MAGIC {
        return Err(Error::Format("checkpoint magic is not SPKN".into()));
    }
    if crc32fast::hash(payload) != stored {
        return Err(Error::Checksum {
            what: "checkpoint payload".into(),
        });
    }
    let mut r = Reader { bytes: payload, at: 4 };
    let version = {
        let b = r.take(2)?;
        u16::from_le_bytes([b[0], b[1]])
    };
    if version != CHECKPOINT_VERSION {
        return Err(Error::Format(format!("unsupported checkpoint version {version}")));
    }
    let input_side = r.u32()?;
    let output_side = r.u32()?;
    let hidden = r.u32()?;
    if hidden > 64 {
        return Err(Error::Format(format!("implausible hidden layer count {hidden}")));
    }
    let hidden_sizes = (0..hidden).map(|_| r.u32()).collect::<Result<Vec<_>>>()?;
    let codes = r.take(2)?;
    let spec = NetworkSpec {
        input_side,
        output_side,
        hidden_sizes,
        hidden_activation: Activation::from_code(codes[0])?,
        output_activation: Activation::from_code(codes[1])?,
        input_offset: r.f32s(1)?[0],
    };
    spec.validate()?;
    let mut layers = Vec::new();
    for (i, (fan_in, fan_out)) in spec.layer_shapes().into_iter().enumerate() {
        let w = r.f32s(fan_in * fan_out)?;
        let b = r.f32s(fan_out)?;
        layers.push(DenseLayer {
            w: Array2::from_shape_vec((fan_out, fan_in), w.into_iter().map(|v| T::of(v as f64)).collect())
                .expect("sized read"),
            b: Array1::from_iter(b.into_iter().map(|v| T::of(v as f64))),
            activation: spec.activation(i),
        });
    }
    if r.at != payload.len() {
        return Err(Error::Format(format!(
            "{} unexpected bytes after parameters",
            payload.len() - r.at
        )));
    }
    Network::from_layers(spec, layers)
}

pub fn save_checkpoint<T: Real>(net: &Network<T>, path: &Path) -> Result<()> {
    std::fs::write(path, encode_checkpoint(net)).map_err(|e| Error::io(path, e))
}

pub fn load_checkpoint<T: Real>(path: &Path) -> Result<Network<T>> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_checkpoint(&bytes)
}
