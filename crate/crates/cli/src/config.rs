//! Run configuration: a flat `key = value` file.
//!
//! Every key is optional and defaults to the desk-scale setup. Relative input
//! paths (`paths.mnist_dir`, `paths.emnist_*`) resolve against the directory
//! holding the config file; relative output paths resolve against `paths.out`.

use std::path::{Path, PathBuf};

use speckle_core::baseline::{RetrievalConfig, SupportMask};
use speckle_core::dataset::{CorpusPlan, KeyValues, LetterKind, ObjectKind, Preprocessing, Split};
use speckle_core::dnn::{Activation, NetworkSpec, TrainConfig};
use speckle_core::scatter::{MediumSpec, NoiseModel, Regime};

use crate::error::CliError;

pub const KEYS: &[&str] = &[
    "paths.out",
    "paths.mnist_dir",
    "paths.emnist_images",
    "paths.emnist_labels",
    "paths.corpus_dir",
    "paths.compare_corpus_dir",
    "paths.checkpoint",
    "paths.report_dir",
    "data.objects",
    "data.letters",
    "medium.regime",
    "medium.object_side",
    "medium.speckle_side",
    "medium.seed",
    "medium.thickness_mm",
    "medium.ls_um",
    "medium.noise.photon_scale",
    "medium.noise.read_sigma",
    "preprocessing.magnify",
    "preprocessing.pad_to",
    "preprocessing.downsample_to",
    "split.train_count",
    "split.test_count",
    "split.letters_count",
    "split.seed",
    "network.preset",
    "network.hidden_sizes",
    "network.hidden_activation",
    "network.output_activation",
    "network.input_offset",
    "network.init_seed",
    "network.precision",
    "train.lr",
    "train.epochs",
    "train.batch_size",
    "train.seed",
    "train.shuffle",
    "train.momentum",
    "train.checkpoint_every",
    "baseline.iterations",
    "baseline.beta",
    "baseline.er_tail",
    "baseline.restarts",
    "baseline.seed",
    "baseline.support_side",
    "baseline.count",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precision {
    F32,
    F64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Paths {
    pub out: PathBuf,
    pub mnist_dir: PathBuf,
    pub emnist_images: Option<PathBuf>,
    pub emnist_labels: Option<PathBuf>,
    pub corpus_dir: PathBuf,
    pub compare_corpus_dir: Option<PathBuf>,
    pub checkpoint: PathBuf,
    pub report_dir: PathBuf,
}

impl Paths {
    pub fn mnist_images(&self) -> PathBuf {
        self.mnist_dir.join("train-images-idx3-ubyte")
    }

    pub fn mnist_labels(&self) -> PathBuf {
        self.mnist_dir.join("train-labels-idx1-ubyte")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BaselineSettings {
    pub iterations: usize,
    pub beta: f64,
    pub er_tail: usize,
    pub restarts: usize,
    pub seed: u64,
    pub support_side: Option<usize>,
    pub count: Option<usize>,
}

impl BaselineSettings {
    pub fn retrieval(&self, speckle_side: usize, object_side: usize) -> Result<RetrievalConfig, CliError> {
        let side = self.support_side.unwrap_or(object_side);
        let support = SupportMask::top_left_box(speckle_side, speckle_side, side, side)?;
        let cfg = RetrievalConfig {
            iterations: self.iterations,
            beta: self.beta,
            er_tail: self.er_tail,
            restarts: self.restarts,
            support,
            seed: self.seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub paths: Paths,
    pub objects: ObjectKind,
    pub letters: LetterKind,
    pub medium: MediumSpec,
    pub preprocessing: Preprocessing,
    pub split: Split,
    pub network: NetworkSpec,
    pub init_seed: u64,
    pub precision: Precision,
    pub train: TrainConfig,
    pub baseline: BaselineSettings,
}

fn opt_size(kv: &KeyValues, key: &str, default: Option<usize>) -> Result<Option<usize>, CliError> {
    match kv.get(key) {
        None => Ok(default),
        Some("none") => Ok(None),
        Some(_) => Ok(Some(kv.parsed(key)?)),
    }
}

fn resolve(base: &Path, p: &str) -> PathBuf {
    let p = Path::new(p);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

fn parse_bool(kv: &KeyValues, key: &str, default: bool) -> Result<bool, CliError> {
    match kv.get(key) {
        None => Ok(default),
        Some("true" | "yes" | "1") => Ok(true),
        Some("false" | "no" | "0") => Ok(false),
        Some(other) => Err(CliError::input(format!("`{key}`: expected true/false, got `{other}`"))),
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("cannot read config {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base)
    }

    /// Parses config text; `base` anchors relative input paths.
    pub fn parse(text: &str, base: &Path) -> Result<Self, CliError> {
        let kv = KeyValues::parse(text)?;
        if let Some(unknown) = kv.keys().find(|k| !KEYS.contains(k)) {
            return Err(CliError::input(format!("unknown config key `{unknown}`")));
        }

        let out = PathBuf::from(kv.get("paths.out").unwrap_or("out"));
        let paths = Paths {
            mnist_dir: resolve(base, kv.get("paths.mnist_dir").unwrap_or("data/mnist")),
            emnist_images: kv.get("paths.emnist_images").map(|p| resolve(base, p)),
            emnist_labels: kv.get("paths.emnist_labels").map(|p| resolve(base, p)),
            corpus_dir: PathBuf::from(kv.get("paths.corpus_dir").unwrap_or("corpus")),
            compare_corpus_dir: kv.get("paths.compare_corpus_dir").map(PathBuf::from),
            checkpoint: PathBuf::from(kv.get("paths.checkpoint").unwrap_or("model.spkn")),
            report_dir: PathBuf::from(kv.get("paths.report_dir").unwrap_or("report")),
            out,
        };

        let desk = MediumSpec::desk();
        let medium = MediumSpec {
            regime: kv.get("medium.regime").map_or(Ok(desk.regime), Regime::parse)?,
            object_side: kv.parsed_or("medium.object_side", desk.object_side)?,
            speckle_side: kv.parsed_or("medium.speckle_side", desk.speckle_side)?,
            seed: kv.parsed_or("medium.seed", desk.seed)?,
            thickness_mm: kv.parsed_or("medium.thickness_mm", desk.thickness_mm)?,
            ls_um: kv.parsed_or("medium.ls_um", desk.ls_um)?,
            noise: NoiseModel {
                photon_scale: kv.parsed_or("medium.noise.photon_scale", 0.0)?,
                read_sigma: kv.parsed_or("medium.noise.read_sigma", 0.0)?,
            },
        };
        medium.validate()?;

        let preprocessing = Preprocessing {
            magnify: kv.parsed_or("preprocessing.magnify", Preprocessing::DESK.magnify)?,
            pad_to: opt_size(&kv, "preprocessing.pad_to", Preprocessing::DESK.pad_to)?,
            downsample_to: opt_size(&kv, "preprocessing.downsample_to", Preprocessing::DESK.downsample_to)?,
        };
        let split = Split {
            train_count: kv.parsed_or("split.train_count", 2000)?,
            test_count: kv.parsed_or("split.test_count", 25)?,
            letters_count: kv.parsed_or("split.letters_count", 25)?,
            seed: kv.parsed_or("split.seed", 7)?,
        };

        let mut network = match kv.get("network.preset").unwrap_or("desk") {
            "desk" => NetworkSpec::desk(),
            "full" => NetworkSpec::full(),
            other => return Err(CliError::input(format!("unknown network preset `{other}` (desk|full)"))),
        };
        network.input_side = medium.speckle_side;
        network.output_side = medium.object_side;
        if let Some(sizes) = kv.get("network.hidden_sizes") {
            network.hidden_sizes = sizes
                .split(',')
                .map(|s| s.trim().parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(|_| CliError::input(format!("`network.hidden_sizes`: cannot parse `{sizes}`")))?;
        }
        if let Some(a) = kv.get("network.hidden_activation") {
            network.hidden_activation = Activation::parse(a)?;
        }
        if let Some(a) = kv.get("network.output_activation") {
            network.output_activation = Activation::parse(a)?;
        }
        network.input_offset = kv.parsed_or("network.input_offset", network.input_offset)?;
        network.validate()?;
        let precision = match kv.get("network.precision").unwrap_or("f32") {
            "f32" => Precision::F32,
            "f64" => Precision::F64,
            other => return Err(CliError::input(format!("unknown precision `{other}` (f32|f64)"))),
        };

        let td = TrainConfig::default();
        let train = TrainConfig {
            lr: kv.parsed_or("train.lr", 0.05)?,
            epochs: kv.parsed_or("train.epochs", td.epochs)?,
            batch_size: kv.parsed_or("train.batch_size", 32)?,
            seed: kv.parsed_or("train.seed", td.seed)?,
            shuffle: parse_bool(&kv, "train.shuffle", true)?,
            momentum: kv.parsed_or("train.momentum", 0.0)?,
            checkpoint_every: opt_size(&kv, "train.checkpoint_every", None)?,
        };
        train.validate()?;

        let baseline = BaselineSettings {
            iterations: kv.parsed_or("baseline.iterations", 500)?,
            beta: kv.parsed_or("baseline.beta", 0.9)?,
            er_tail: kv.parsed_or("baseline.er_tail", 50)?,
            restarts: kv.parsed_or("baseline.restarts", 10)?,
            seed: kv.parsed_or("baseline.seed", 11)?,
            support_side: opt_size(&kv, "baseline.support_side", None)?,
            count: opt_size(&kv, "baseline.count", None)?,
        };
        if baseline.support_side.is_some_and(|s| s == 0 || s > medium.speckle_side) {
            return Err(CliError::input("baseline.support_side must be in 1..=speckle_side"));
        }

        Ok(Self {
            paths,
            objects: kv
                .get("data.objects")
                .map_or(Ok(ObjectKind::Mnist), ObjectKind::parse)?,
            letters: kv
                .get("data.letters")
                .map_or(Ok(LetterKind::Synthetic), LetterKind::parse)?,
            medium,
            preprocessing,
            split,
            network,
            init_seed: kv.parsed_or("network.init_seed", 1)?,
            precision,
            train,
            baseline,
        })
    }

    /// Applies `--out` and resolves output paths against it.
    pub fn finalize(mut self, out: Option<&Path>) -> Self {
        if let Some(o) = out {
            self.paths.out = o.to_path_buf();
        }
        let base = self.paths.out.clone();
        let anchor = |p: &PathBuf| if p.is_absolute() { p.clone() } else { base.join(p) };
        self.paths.corpus_dir = anchor(&self.paths.corpus_dir);
        self.paths.checkpoint = anchor(&self.paths.checkpoint);
        self.paths.report_dir = anchor(&self.paths.report_dir);
        self.paths.compare_corpus_dir = self.paths.compare_corpus_dir.as_ref().map(anchor);
        self
    }

    pub fn plan(&self) -> CorpusPlan {
        CorpusPlan {
            medium: self.medium.clone(),
            preprocessing: self.preprocessing,
            split: self.split,
        }
    }
}
