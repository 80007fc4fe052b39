//! Paired (object, speckle) corpora on disk.
//!
//! A corpus directory holds `manifest.txt` plus up to three shards
//! (`train.spkc`, `test.spkc`, `letters.spkc`). Shard layout, all little-endian:
//!
//! ```text
//! "SPKC" | version: u16 | record count: u64
//! per record: label: i16 (-1 = none)
//!             object:  object_side²  x f32
//!             speckle: speckle_side² x f32
//! ```
//!
//! Object and speckle sides live in the manifest, not the shard header.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use super::idx::IdxImageSet;
use super::kv::KeyValues;
use super::preprocess::{preprocess, Preprocessing};
use super::synth;
use crate::error::{Error, Result};
use crate::numerics::{derive_seed, RealGrid, SeededRng};
use crate::scatter::{sample_medium, Medium, MediumSpec, NoiseModel, Regime};

pub const SHARD_MAGIC: &[u8; 4] = b"SPKC";
pub const SHARD_VERSION: u16 = 1;
pub const MANIFEST_VERSION: u32 = 1;
pub const MANIFEST_FILE: &str = "manifest.txt";

const LETTER_STREAM: u64 = 0x1E77_E125;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Shard {
    Train,
    Test,
    Letters,
}

impl Shard {
    pub const ALL: [Shard; 3] = [Shard::Train, Shard::Test, Shard::Letters];

    pub fn name(self) -> &'static str {
        match self {
            Shard::Train => "train",
            Shard::Test => "test",
            Shard::Letters => "letters",
        }
    }

    pub fn file_name(self) -> String {
        format!("{}.spkc", self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub object: RealGrid<f32>,
    pub speckle: RealGrid<f32>,
    pub label: Option<i16>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Split {
    pub train_count: usize,
    pub test_count: usize,
    pub letters_count: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjectKind {
    Mnist,
    Blobs,
}

impl ObjectKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ObjectKind::Mnist => "mnist",
            ObjectKind::Blobs => "blobs",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "mnist" => Ok(ObjectKind::Mnist),
            "blobs" => Ok(ObjectKind::Blobs),
            other => Err(Error::Config(format!("unknown object source `{other}` (mnist|blobs)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LetterKind {
    Emnist,
    Synthetic,
}

impl LetterKind {
    pub fn as_str(self) -> &'static str {
        match self {
            LetterKind::Emnist => "emnist",
            LetterKind::Synthetic => "synthetic",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "emnist" => Ok(LetterKind::Emnist),
            "synthetic" => Ok(LetterKind::Synthetic),
            other => Err(Error::Config(format!("unknown letter source `{other}`"))),
        }
    }
}

/// An IDX image set together with optional labels and the digest of its file.
#[derive(Debug, Clone)]
pub struct IdxSource {
    pub images: IdxImageSet,
    pub labels: Option<Vec<u8>>,
    pub digest: String,
}

impl IdxSource {
    pub fn from_bytes(image_bytes: &[u8], label_bytes: Option<&[u8]>) -> Result<Self> {
        let images = super::idx::parse_idx(image_bytes)?;
        let labels = label_bytes.map(super::idx::parse_idx_labels).transpose()?;
        if let Some(l) = &labels {
            if l.len() != images.count {
                return Err(Error::Mismatch(format!(
                    "{} labels for {} images",
                    l.len(),
                    images.count
                )));
            }
        }
        Ok(Self {
            images,
            labels,
            digest: sha256_hex(image_bytes),
        })
    }

    pub fn load(images: &Path, labels: Option<&Path>) -> Result<Self> {
        let ib = fs::read(images).map_err(|e| Error::io(images, e))?;
        let lb = labels.map(|p| fs::read(p).map_err(|e| Error::io(p, e))).transpose()?;
        Self::from_bytes(&ib, lb.as_deref())
    }
}

pub enum ObjectSource<'a> {
    Mnist(&'a IdxSource),
    Blobs,
}

pub enum LetterSource<'a> {
    Emnist(&'a IdxSource),
    Synthetic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusManifest {
    pub version: u32,
    pub medium: MediumSpec,
    pub preprocessing: Preprocessing,
    pub split: Split,
    pub objects: ObjectKind,
    pub letters: LetterKind,
    /// `digest.*` entries: source files and shards (SHA-256, hex).
    pub digests: Vec<(String, String)>,
}

fn opt_usize(v: Option<usize>) -> String {
    v.map_or_else(|| "none".to_string(), |x| x.to_string())
}

fn parse_opt_usize(kv: &KeyValues, key: &str) -> Result<Option<usize>> {
    match kv.require(key)? {
        "none" => Ok(None),
        _ => kv.parsed(key).map(Some),
    }
}

impl CorpusManifest {
    pub fn to_key_values(&self) -> KeyValues {
        let mut kv = KeyValues::default();
        let m = &self.medium;
        kv.insert("format.version", self.version);
        kv.insert("source.objects", self.objects.as_str());
        kv.insert("source.letters", self.letters.as_str());
        kv.insert("medium.regime", m.regime.as_str());
        kv.insert("medium.object_side", m.object_side);
        kv.insert("medium.speckle_side", m.speckle_side);
        kv.insert("medium.seed", m.seed);
        kv.insert("medium.thickness_mm", m.thickness_mm);
        kv.insert("medium.ls_um", m.ls_um);
        kv.insert("medium.noise.photon_scale", m.noise.photon_scale);
        kv.insert("medium.noise.read_sigma", m.noise.read_sigma);
        kv.insert("medium.normalization", "mean-one");
        kv.insert("preprocessing.magnify", self.preprocessing.magnify);
        kv.insert("preprocessing.pad_to", opt_usize(self.preprocessing.pad_to));
        kv.insert(
            "preprocessing.downsample_to",
            opt_usize(self.preprocessing.downsample_to),
        );
        kv.insert("split.train_count", self.split.train_count);
        kv.insert("split.test_count", self.split.test_count);
        kv.insert("split.letters_count", self.split.letters_count);
        kv.insert("split.seed", self.split.seed);
        for (k, v) in &self.digests {
            kv.insert(format!("digest.{k}"), v);
        }
        kv
    }

    pub fn render(&self) -> String {
        self.to_key_values().render()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let kv = KeyValues::parse(text)?;
        let version: u32 = kv.parsed("format.version")?;
        if version != MANIFEST_VERSION {
            return Err(Error::Format(format!("unsupported manifest version {version}")));
        }
        let medium = MediumSpec {
            regime: Regime::parse(kv.require("medium.regime")?)?,
            object_side: kv.parsed("medium.object_side")?,
            speckle_side: kv.parsed("medium.speckle_side")?,
            seed: kv.parsed("medium.seed")?,
            thickness_mm: kv.parsed("medium.thickness_mm")?,
            ls_um: kv.parsed("medium.ls_um")?,
            noise: NoiseModel {
                photon_scale: kv.parsed("medium.noise.photon_scale")?,
                read_sigma: kv.parsed("medium.noise.read_sigma")?,
            },
        };
        let preprocessing = Preprocessing {
            magnify: kv.parsed("preprocessing.magnify")?,
            pad_to: parse_opt_usize(&kv, "preprocessing.pad_to")?,
            downsample_to: parse_opt_usize(&kv, "preprocessing.downsample_to")?,
        };
        let split = Split {
            train_count: kv.parsed("split.train_count")?,
            test_count: kv.parsed("split.test_count")?,
            letters_count: kv.parsed("split.letters_count")?,
            seed: kv.parsed("split.seed")?,
        };
        let digests = kv
            .keys()
            .filter_map(|k| k.strip_prefix("digest."))
            .map(|k| (k.to_string(), kv.get(&format!("digest.{k}")).unwrap_or("").to_string()))
            .collect();
        Ok(Self {
            version,
            medium,
            preprocessing,
            split,
            objects: ObjectKind::parse(kv.require("source.objects")?)?,
            letters: LetterKind::parse(kv.require("source.letters")?)?,
            digests,
        })
    }

    pub fn digest(&self, key: &str) -> Option<&str> {
        self.digests.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn count(&self, shard: Shard) -> usize {
        match shard {
            Shard::Train => self.split.train_count,
            Shard::Test => self.split.test_count,
            Shard::Letters => self.split.letters_count,
        }
    }

    /// Checks a source file against its recorded digest.
    pub fn verify_source(&self, key: &str, path: &Path) -> Result<()> {
        let expected = self
            .digest(&format!("source.{key}"))
            .ok_or_else(|| Error::Mismatch(format!("manifest has no digest for source `{key}`")))?;
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        if sha256_hex(&bytes) != expected {
            return Err(Error::Checksum {
                what: path.display().to_string(),
            });
        }
        Ok(())
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn encode_shard(samples: &[Sample]) -> Vec<u8> {
    let per = samples
        .first()
        .map_or(0, |s| 2 + 4 * (s.object.len() + s.speckle.len()));
    let mut out = Vec::with_capacity(14 + per * samples.len());
    out.extend_from_slice(SHARD_MAGIC);
    out.extend_from_slice(&SHARD_VERSION.to_le_bytes());
    out.extend_from_slice(&(samples.len() as u64).to_le_bytes());
    for s in samples {
        out.extend_from_slice(&s.label.unwrap_or(-1).to_le_bytes());
        for v in s.object.as_slice().iter().chain(s.speckle.as_slice()) {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}

pub fn decode_shard(bytes: &[u8], object_side: usize, speckle_side: usize) -> Result<Vec<Sample>> {
    if bytes.len() < 14 {
        return Err(Error::Length {
            expected: 14,
            found: bytes.len(),
        });
    }
    if &bytes[..4] != SHARD_MAGIC {
        return Err(Error::Format("shard magic is not SPKC".into()));
    }
    let version = u16::from_le_bytes([bytes[4], bytes[5]]);
    if version != SHARD_VERSION {
        return Err(Error::Format(format!("unsupported shard version {version}")));
    }
    let count = u64::from_le_bytes(bytes[6..14].try_into().expect("8 bytes")) as usize;
    let (on, sn) = (object_side * object_side, speckle_side * speckle_side);
    let per = 2 + 4 * (on + sn);
    let expected = count
        .checked_mul(per)
        .and_then(|n| n.checked_add(14))
        .ok_or_else(|| Error::Format(format!("record count {count} overflows")))?;
    if bytes.len() != expected {
        return Err(Error::Length {
            expected,
            found: bytes.len(),
        });
    }
    let floats = |chunk: &[u8]| -> Vec<f32> {
        chunk
            .chunks_exact(4)
            .map(|b| f32::from_le_bytes([b[0], b[1], b[2], b[3]]))
            .collect()
    };
    bytes[14..]
        .chunks_exact(per)
        .map(|rec| {
            let label = i16::from_le_bytes([rec[0], rec[1]]);
            let object = RealGrid::from_vec(object_side, object_side, floats(&rec[2..2 + 4 * on]))?;
            let speckle = RealGrid::from_vec(speckle_side, speckle_side, floats(&rec[2 + 4 * on..]))?;
            Ok(Sample {
                object,
                speckle,
                label: (label >= 0).then_some(label),
            })
        })
        .collect()
}

/// Everything needed to build a corpus besides the source images.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusPlan {
    pub medium: MediumSpec,
    pub preprocessing: Preprocessing,
    pub split: Split,
}

#[derive(Debug, Clone)]
pub struct Corpus {
    pub manifest: CorpusManifest,
    pub train: Vec<Sample>,
    pub test: Vec<Sample>,
    pub letters: Vec<Sample>,
}

impl Corpus {
    pub fn shard(&self, shard: Shard) -> &[Sample] {
        match shard {
            Shard::Train => &self.train,
            Shard::Test => &self.test,
            Shard::Letters => &self.letters,
        }
    }

    /// Loads and verifies a corpus directory (digests, counts, value ranges).
    pub fn load(dir: &Path) -> Result<Self> {
        let mpath = dir.join(MANIFEST_FILE);
        let text = fs::read_to_string(&mpath).map_err(|e| Error::io(&mpath, e))?;
        let manifest = CorpusManifest::parse(&text)?;
        let (os, ss) = (manifest.medium.object_side, manifest.medium.speckle_side);
        let mut shards = Vec::new();
        for shard in Shard::ALL {
            let path = dir.join(shard.file_name());
            let expected = manifest.digest(&format!("shard.{}", shard.name()));
            if !path.exists() && expected.is_none() && manifest.count(shard) == 0 {
                shards.push(Vec::new());
                continue;
            }
            let bytes = fs::read(&path).map_err(|e| Error::io(&path, e))?;
            match expected {
                Some(d) if d == sha256_hex(&bytes) => {}
                Some(_) => {
                    return Err(Error::Checksum {
                        what: path.display().to_string(),
                    })
                }
                None => {
                    return Err(Error::Mismatch(format!(
                        "manifest has no digest for {}",
                        path.display()
                    )))
                }
            }
            let samples = decode_shard(&bytes, os, ss)?;
            if samples.len() != manifest.count(shard) {
                return Err(Error::Mismatch(format!(
                    "{} holds {} records, manifest says {}",
                    path.display(),
                    samples.len(),
                    manifest.count(shard)
                )));
            }
            shards.push(samples);
        }
        let letters = shards.pop().unwrap_or_default();
        let test = shards.pop().unwrap_or_default();
        let train = shards.pop().unwrap_or_default();
        Ok(Self {
            manifest,
            train,
            test,
            letters,
        })
    }

    /// Regenerates the medium the corpus was simulated with.
    pub fn medium(&self) -> Result<Medium<f64>> {
        sample_medium(&self.manifest.medium)
    }
}

fn source_image(src: &IdxSource, index: usize, transpose: bool) -> Vec<u8> {
    let img = src.images.image(index);
    if !transpose {
        return img.to_vec();
    }
    let (rows, cols) = (src.images.rows, src.images.cols);
    let mut out = vec![0u8; rows * cols];
    for r in 0..rows {
        for c in 0..cols {
            out[c * rows + r] = img[r * cols + c];
        }
    }
    out
}

fn simulate(
    medium: &Medium<f64>,
    objects: Vec<(RealGrid<f64>, Option<i16>)>,
    first_index: usize,
) -> Result<Vec<Sample>> {
    let seed = medium.spec().seed;
    objects
        .into_par_iter()
        .enumerate()
        .map(|(i, (object, label))| {
            let mut rng = SeededRng::derived(seed, (first_index + i) as u64);
            let speckle = medium.forward(&object, &mut rng)?;
            Ok(Sample {
                object: object.cast(),
                speckle: speckle.grid().cast(),
                label,
            })
        })
        .collect()
}

fn prepared(
    src: &IdxSource,
    indices: &[usize],
    cfg: &Preprocessing,
    transpose: bool,
    label_of: impl Fn(u8) -> i16,
) -> Result<Vec<(RealGrid<f64>, Option<i16>)>> {
    if src.images.rows != src.images.cols {
        return Err(Error::Config("source images must be square".into()));
    }
    indices
        .iter()
        .map(|&i| {
            let px = source_image(src, i, transpose);
            let grid = preprocess(&px, src.images.rows, cfg)?;
            let label = src.labels.as_ref().map(|l| label_of(l[i]));
            Ok((grid, label))
        })
        .collect()
}

/// Simulates every split through one medium and writes shards plus manifest.
///
/// Deterministic: the same plan and sources give byte-identical files.
pub fn generate_corpus(
    dir: &Path,
    plan: &CorpusPlan,
    objects: &ObjectSource<'_>,
    letters: &LetterSource<'_>,
) -> Result<CorpusManifest> {
    let split = plan.split;
    let side = plan.medium.object_side;
    let medium: Medium<f64> = sample_medium(&plan.medium)?;
    let mut digests = Vec::new();

    let (train_objs, test_objs) = match objects {
        ObjectSource::Mnist(src) => {
            let need = split.train_count + split.test_count;
            if src.images.count < need {
                return Err(Error::Config(format!(
                    "{need} images requested, source has {}",
                    src.images.count
                )));
            }
            let produced = plan.preprocessing.output_side(src.images.rows)?;
            if produced != side {
                return Err(Error::Config(format!(
                    "preprocessing yields {produced}x{produced} objects, medium expects {side}x{side}"
                )));
            }
            let mut order: Vec<usize> = (0..src.images.count).collect();
            SeededRng::new(split.seed).shuffle(&mut order);
            digests.push(("source.images".to_string(), src.digest.clone()));
            let train = prepared(src, &order[..split.train_count], &plan.preprocessing, false, |l| {
                l as i16
            })?;
            let test = prepared(src, &order[split.train_count..need], &plan.preprocessing, false, |l| {
                l as i16
            })?;
            (train, test)
        }
        ObjectSource::Blobs => {
            let make = |offset: usize, n: usize| -> Vec<(RealGrid<f64>, Option<i16>)> {
                (0..n)
                    .map(|i| {
                        let mut rng = SeededRng::derived(split.seed, (offset + i) as u64);
                        (synth::blob_object(side, &mut rng), None)
                    })
                    .collect()
            };
            (make(0, split.train_count), make(split.train_count, split.test_count))
        }
    };

    let letter_objs = if split.letters_count == 0 {
        Vec::new()
    } else {
        match letters {
            LetterSource::Emnist(src) => {
                if src.images.count < split.letters_count {
                    return Err(Error::Config(format!(
                        "{} letters requested, source has {}",
                        split.letters_count, src.images.count
                    )));
                }
                let mut order: Vec<usize> = (0..src.images.count).collect();
                SeededRng::new(derive_seed(split.seed, LETTER_STREAM)).shuffle(&mut order);
                digests.push(("source.letters".to_string(), src.digest.clone()));
                // EMNIST stores images transposed and labels letters 1..=26.
                prepared(src, &order[..split.letters_count], &plan.preprocessing, true, |l| {
                    (b'a' as i16) + l as i16 - 1
                })?
            }
            LetterSource::Synthetic => synth::letter_set(split.letters_count, derive_seed(split.seed, LETTER_STREAM))
                .into_iter()
                .map(|(px, label)| Ok((preprocess(&px, synth::LETTER_SIDE, &plan.preprocessing)?, Some(label))))
                .collect::<Result<_>>()?,
        }
    };
    if let Some((g, _)) = letter_objs.first() {
        if g.rows() != side {
            return Err(Error::Config(format!(
                "letters preprocess to {}x{}, medium expects {side}x{side}",
                g.rows(),
                g.rows()
            )));
        }
    }

    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let sets = [
        (Shard::Train, train_objs, 0),
        (Shard::Test, test_objs, split.train_count),
        (Shard::Letters, letter_objs, split.train_count + split.test_count),
    ];
    for (shard, objs, first) in sets {
        let path: PathBuf = dir.join(shard.file_name());
        if shard == Shard::Letters && objs.is_empty() {
            if path.exists() {
                fs::remove_file(&path).map_err(|e| Error::io(&path, e))?;
            }
            continue;
        }
        let samples = simulate(&medium, objs, first)?;
        let bytes = encode_shard(&samples);
        digests.push((format!("shard.{}", shard.name()), sha256_hex(&bytes)));
        fs::write(&path, &bytes).map_err(|e| Error::io(&path, e))?;
    }

    digests.sort();
    let manifest = CorpusManifest {
        version: MANIFEST_VERSION,
        medium: plan.medium.clone(),
        preprocessing: plan.preprocessing,
        split,
        objects: match objects {
            ObjectSource::Mnist(_) => ObjectKind::Mnist,
            ObjectSource::Blobs => ObjectKind::Blobs,
        },
        letters: match letters {
            LetterSource::Emnist(_) => LetterKind::Emnist,
            LetterSource::Synthetic => LetterKind::Synthetic,
        },
        digests,
    };
    let mpath = dir.join(MANIFEST_FILE);
    fs::write(&mpath, manifest.render()).map_err(|e| Error::io(&mpath, e))?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_source(count: usize) -> IdxSource {
        let mut rng = SeededRng::new(99);
        let px: Vec<u8> = (0..count * 784).map(|_| rng.below(256) as u8).collect();
        let images = IdxImageSet::new(count, 28, 28, px).unwrap();
        let labels: Vec<u8> = (0..count).map(|i| (i % 10) as u8).collect();
        let mut lb = vec![0, 0, 8, 1];
        lb.extend_from_slice(&(count as u32).to_be_bytes());
        lb.extend_from_slice(&labels);
        IdxSource::from_bytes(&images.to_bytes(), Some(&lb)).unwrap()
    }

    fn plan(train: usize, test: usize, letters: usize) -> CorpusPlan {
        CorpusPlan {
            medium: MediumSpec::desk(),
            preprocessing: Preprocessing::DESK,
            split: Split {
                train_count: train,
                test_count: test,
                letters_count: letters,
                seed: 3,
            },
        }
    }

    #[test]
    fn shard_round_trip() {
        let s = Sample {
            object: RealGrid::from_vec(1, 1, vec![0.25]).unwrap(),
            speckle: RealGrid::from_vec(2, 2, vec![1.0, 0.5, 2.5, 0.0]).unwrap(),
            label: Some(4),
        };
        let n = Sample {
            label: None,
            ..s.clone()
        };
        let bytes = encode_shard(&[s.clone(), n.clone()]);
        assert_eq!(&bytes[..4], b"SPKC");
        assert_eq!(bytes.len(), 14 + 2 * (2 + 4 * 5));
        assert_eq!(decode_shard(&bytes, 1, 2).unwrap(), vec![s, n]);
        assert!(decode_shard(&bytes[..bytes.len() - 1], 1, 2).is_err());
        assert!(decode_shard(&bytes, 2, 2).is_err());
    }

    #[test]
    fn manifest_round_trip() {
        let m = CorpusManifest {
            version: 1,
            medium: MediumSpec::desk(),
            preprocessing: Preprocessing::DESK,
            split: plan(10, 2, 0).split,
            objects: ObjectKind::Mnist,
            letters: LetterKind::Synthetic,
            digests: vec![("shard.train".into(), "ab".into())],
        };
        assert_eq!(CorpusManifest::parse(&m.render()).unwrap(), m);
    }

    #[test]
    fn generate_load_and_detect_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let src = tiny_source(20);
        let manifest = generate_corpus(
            dir.path(),
            &plan(12, 3, 4),
            &ObjectSource::Mnist(&src),
            &LetterSource::Synthetic,
        )
        .unwrap();
        let corpus = Corpus::load(dir.path()).unwrap();
        assert_eq!(corpus.manifest, manifest);
        assert_eq!(
            (corpus.train.len(), corpus.test.len(), corpus.letters.len()),
            (12, 3, 4)
        );
        assert!(corpus.letters.iter().all(|s| s.label.is_some_and(|l| l >= 97)));
        for s in corpus.train.iter().chain(&corpus.test) {
            assert!(s.object.as_slice().iter().all(|v| (0.0..=1.0).contains(v)));
            assert!(s.speckle.as_slice().iter().all(|v| *v >= 0.0));
        }

        let path = dir.path().join("test.spkc");
        let mut bytes = fs::read(&path).unwrap();
        bytes[40] ^= 0x01;
        fs::write(&path, &bytes).unwrap();
        assert!(matches!(Corpus::load(dir.path()), Err(Error::Checksum { .. })));
    }

    #[test]
    fn empty_train_split() {
        let dir = tempfile::tempdir().unwrap();
        let src = tiny_source(5);
        generate_corpus(
            dir.path(),
            &plan(0, 2, 0),
            &ObjectSource::Mnist(&src),
            &LetterSource::Synthetic,
        )
        .unwrap();
        let corpus = Corpus::load(dir.path()).unwrap();
        assert!(corpus.train.is_empty());
        assert_eq!(corpus.test.len(), 2);
        assert_eq!(fs::read(dir.path().join("train.spkc")).unwrap().len(), 14);
    }

    #[test]
    fn too_few_images() {
        let dir = tempfile::tempdir().unwrap();
        let src = tiny_source(5);
        let err = generate_corpus(
            dir.path(),
            &plan(5, 1, 0),
            &ObjectSource::Mnist(&src),
            &LetterSource::Synthetic,
        );
        assert!(matches!(err, Err(Error::Config(_))));
    }

    #[test]
    fn geometry_mismatch() {
        let dir = tempfile::tempdir().unwrap();
        let src = tiny_source(5);
        let mut p = plan(2, 1, 0);
        p.medium.object_side = 8;
        let err = generate_corpus(dir.path(), &p, &ObjectSource::Mnist(&src), &LetterSource::Synthetic);
        assert!(matches!(err, Err(Error::Config(_))));
    }
}
