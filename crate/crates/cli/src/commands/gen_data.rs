use std::fmt;
use std::path::Path;

use speckle_core::dataset::{generate_corpus, IdxSource, LetterKind, LetterSource, ObjectKind, ObjectSource};
use speckle_core::scatter::{optical_depth, speckle_contrast, Normalization, SpecklePattern};

use crate::config::RunConfig;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct GenSummary {
    pub train: usize,
    pub test: usize,
    pub letters: usize,
    pub optical_depth: f64,
    pub probe_contrast: Option<f64>,
}

impl fmt::Display for GenSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "corpus: {} train, {} test, {} letters; optical depth {:.4}",
            self.train, self.test, self.letters, self.optical_depth
        )?;
        if let Some(c) = self.probe_contrast {
            write!(f, "; probe speckle contrast {c:.4}")?;
        }
        Ok(())
    }
}

pub(crate) fn require_file(path: &Path) -> Result<(), CliError> {
    if path.is_file() {
        Ok(())
    } else {
        Err(CliError::input(format!("missing input file {}", path.display())))
    }
}

pub fn gen_data(cfg: &RunConfig, seed: Option<u64>) -> Result<GenSummary, CliError> {
    let mut plan = cfg.plan();
    if let Some(s) = seed {
        plan.split.seed = s;
    }

    let mnist = match cfg.objects {
        ObjectKind::Mnist => {
            let (images, labels) = (cfg.paths.mnist_images(), cfg.paths.mnist_labels());
            require_file(&images)?;
            require_file(&labels)?;
            Some(IdxSource::load(&images, Some(&labels))?)
        }
        ObjectKind::Blobs => None,
    };
    let emnist = match cfg.letters {
        LetterKind::Emnist if plan.split.letters_count > 0 => {
            let (Some(images), Some(labels)) = (&cfg.paths.emnist_images, &cfg.paths.emnist_labels) else {
                return Err(CliError::input(
                    "data.letters = emnist needs paths.emnist_images and paths.emnist_labels",
                ));
            };
            require_file(images)?;
            require_file(labels)?;
            Some(IdxSource::load(images, Some(labels))?)
        }
        _ => None,
    };
    let objects = match &mnist {
        Some(src) => ObjectSource::Mnist(src),
        None => ObjectSource::Blobs,
    };
    let letters = match &emnist {
        Some(src) => LetterSource::Emnist(src),
        None => LetterSource::Synthetic,
    };

    eprintln!("simulating corpus into {}", cfg.paths.corpus_dir.display());
    let manifest = generate_corpus(&cfg.paths.corpus_dir, &plan, &objects, &letters)?;
    let corpus = speckle_core::dataset::Corpus::load(&cfg.paths.corpus_dir).map_err(CliError::artifact)?;
    let probe = corpus.train.first().or(corpus.test.first());
    let probe_contrast = probe
        .map(|s| {
            let pattern = SpecklePattern::new(s.speckle.cast::<f64>(), Normalization::MeanOne)?;
            speckle_contrast(&pattern)
        })
        .transpose()?;
    Ok(GenSummary {
        train: manifest.split.train_count,
        test: manifest.split.test_count,
        letters: manifest.split.letters_count,
        optical_depth: optical_depth(manifest.medium.thickness_mm, manifest.medium.ls_um)?,
        probe_contrast,
    })
}
