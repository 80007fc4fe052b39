//! Object sources, preprocessing and on-disk (object, speckle) corpora.

pub mod corpus;
pub mod idx;
pub mod kv;
pub mod preprocess;
pub mod synth;

pub use corpus::{
    generate_corpus, sha256_hex, Corpus, CorpusManifest, CorpusPlan, IdxSource, LetterKind, LetterSource, ObjectKind,
    ObjectSource, Sample, Shard, Split,
};
pub use idx::{parse_idx, parse_idx_labels, read_idx, read_idx_labels, IdxImageSet};
pub use kv::KeyValues;
pub use preprocess::{preprocess, Preprocessing};
