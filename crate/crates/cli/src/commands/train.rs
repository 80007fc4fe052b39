use std::fmt;
use std::fs;
use std::path::Path;

use speckle_core::dataset::{Corpus, Sample};
use speckle_core::dnn::{save_checkpoint, train as fit, Network, TrainData, TrainHistory};
use speckle_core::numerics::SeededRng;
use speckle_core::{Error, Real};

use crate::config::{Precision, RunConfig};
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct TrainSummary {
    pub history: TrainHistory,
}

impl fmt::Display for TrainSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.history.last() {
            Some(last) => {
                write!(f, "trained {} epochs: train MSE {:.6}", last.epoch, last.train_mse)?;
                if let Some(h) = last.heldout_mse {
                    write!(f, ", held-out MSE {h:.6}")?;
                }
                Ok(())
            }
            None => write!(f, "no epochs run"),
        }
    }
}

pub(crate) fn load_corpus(dir: &Path) -> Result<Corpus, CliError> {
    if !dir.join(speckle_core::dataset::corpus::MANIFEST_FILE).is_file() {
        return Err(CliError::input(format!(
            "no corpus at {} (run gen-data first)",
            dir.display()
        )));
    }
    Corpus::load(dir).map_err(CliError::artifact)
}

pub(crate) fn check_dims(cfg: &RunConfig, corpus: &Corpus) -> Result<(), CliError> {
    let m = &corpus.manifest.medium;
    let n = &cfg.network;
    if (m.speckle_side, m.object_side) != (n.input_side, n.output_side) {
        return Err(CliError::mismatch(format!(
            "corpus is {}x{} speckle -> {}x{} object, network expects {}x{} -> {}x{}",
            m.speckle_side,
            m.speckle_side,
            m.object_side,
            m.object_side,
            n.input_side,
            n.input_side,
            n.output_side,
            n.output_side
        )));
    }
    Ok(())
}

pub fn train_data<T: Real>(samples: &[Sample], input_len: usize, output_len: usize) -> Result<TrainData<T>, CliError> {
    let xs: Vec<Vec<T>> = samples.iter().map(|s| s.speckle.cast::<T>().into_vec()).collect();
    let ys: Vec<Vec<T>> = samples.iter().map(|s| s.object.cast::<T>().into_vec()).collect();
    Ok(TrainData::from_pairs(
        xs.iter().zip(&ys).map(|(x, y)| (x.as_slice(), y.as_slice())),
        input_len,
        output_len,
    )?)
}

fn run<T: Real>(cfg: &RunConfig, corpus: &Corpus, seed: Option<u64>) -> Result<TrainHistory, CliError> {
    let spec = &cfg.network;
    let data = train_data::<T>(&corpus.train, spec.input_len(), spec.output_len())?;
    let heldout = if corpus.test.is_empty() {
        None
    } else {
        Some(train_data::<T>(&corpus.test, spec.input_len(), spec.output_len())?)
    };
    let mut tc = cfg.train.clone();
    if let Some(s) = seed {
        tc.seed = s;
    }
    let mut net: Network<T> = Network::init(spec, &mut SeededRng::new(cfg.init_seed))?;
    let snapshots = cfg.paths.report_dir.join("checkpoints");
    let report = &cfg.paths.report_dir;
    let mut log = String::new();
    let result = fit(&mut net, &data, heldout.as_ref(), &tc, |e| {
        let r = e.record;
        let held = r.heldout_mse.map_or(String::from("-"), |h| format!("{h:.6}"));
        let line = format!(
            "epoch {}/{} train {:.6} heldout {held} ({:.2}s)",
            r.epoch, tc.epochs, r.train_mse, r.seconds
        );
        eprintln!("{line}");
        log.push_str(&line);
        log.push('\n');
        if e.checkpoint_due {
            if r.epoch == tc.epochs {
                save_checkpoint(e.network, &cfg.paths.checkpoint)?;
            } else {
                fs::create_dir_all(&snapshots).map_err(|err| Error::io(&snapshots, err))?;
                save_checkpoint(e.network, &snapshots.join(format!("epoch_{:04}.spkn", r.epoch)))?;
            }
        }
        Ok(())
    });
    let log_path = report.join("train.log");
    fs::write(&log_path, &log).map_err(|e| Error::io(&log_path, e))?;
    let history = result?;
    let csv = report.join("history.csv");
    fs::write(&csv, history.to_csv(false)).map_err(|e| Error::io(&csv, e))?;
    Ok(history)
}

pub fn train(cfg: &RunConfig, seed: Option<u64>) -> Result<TrainSummary, CliError> {
    let corpus = load_corpus(&cfg.paths.corpus_dir)?;
    check_dims(cfg, &corpus)?;
    if corpus.train.is_empty() {
        return Err(CliError::input("training split is empty"));
    }
    for dir in [Some(cfg.paths.report_dir.as_path()), cfg.paths.checkpoint.parent()]
        .into_iter()
        .flatten()
    {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let history = match cfg.precision {
        Precision::F32 => run::<f32>(cfg, &corpus, seed)?,
        Precision::F64 => run::<f64>(cfg, &corpus, seed)?,
    };
    Ok(TrainSummary { history })
}
