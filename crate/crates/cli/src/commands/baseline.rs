use std::fmt;
use std::fs;
use std::path::Path;

use speckle_core::baseline::{align_score, autocorr, hio_retrieve};
use speckle_core::dataset::Corpus;
use speckle_core::dnn::{load_checkpoint, Network};
use speckle_core::numerics::RealGrid;
use speckle_core::scatter::{Normalization, SpecklePattern};
use speckle_core::Error;

use super::eval::predict;
use super::train::load_corpus;
use crate::config::RunConfig;
use crate::error::CliError;
use crate::pgm::{max_normalized, write_pgm};

#[derive(Debug, Clone, PartialEq)]
pub struct BaselineRow {
    pub object_id: usize,
    pub regime: String,
    pub align_score: f64,
    pub residual: f64,
    pub dnn_score: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BaselineReport {
    pub rows: Vec<BaselineRow>,
}

impl BaselineReport {
    pub fn regimes(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for r in &self.rows {
            if !out.contains(&r.regime.as_str()) {
                out.push(&r.regime);
            }
        }
        out
    }

    pub fn mean_align(&self, regime: &str) -> Option<f64> {
        mean(self.rows.iter().filter(|r| r.regime == regime).map(|r| r.align_score))
    }

    pub fn mean_dnn(&self, regime: &str) -> Option<f64> {
        mean(
            self.rows
                .iter()
                .filter(|r| r.regime == regime)
                .filter_map(|r| r.dnn_score),
        )
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("object_id,regime,align_score,residual,dnn_score\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{:.6},{:.6},{}\n",
                r.object_id,
                r.regime,
                r.align_score,
                r.residual,
                r.dnn_score.map_or(String::new(), |d| format!("{d:.6}"))
            ));
        }
        out
    }
}

fn mean(it: impl Iterator<Item = f64>) -> Option<f64> {
    let v: Vec<f64> = it.collect();
    (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
}

impl fmt::Display for BaselineReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rows.is_empty() {
            return write!(f, "baseline: no test samples");
        }
        for (i, regime) in self.regimes().into_iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(
                f,
                "{regime}: baseline align_score {:.4}",
                self.mean_align(regime).unwrap_or(f64::NAN)
            )?;
            if let Some(d) = self.mean_dnn(regime) {
                write!(f, ", network align_score {d:.4}")?;
            }
        }
        Ok(())
    }
}

fn run_corpus(
    cfg: &RunConfig,
    corpus: &Corpus,
    label: &str,
    seed: Option<u64>,
    net: Option<&Network<f64>>,
    dir: &Path,
) -> Result<Vec<BaselineRow>, CliError> {
    let m = &corpus.manifest.medium;
    let mut settings = cfg.baseline.clone();
    if let Some(s) = seed {
        settings.seed = s;
    }
    let retrieval = settings.retrieval(m.speckle_side, m.object_side)?;
    let net = net.filter(|n| n.spec().input_side == m.speckle_side && n.spec().output_side == m.object_side);
    let count = settings.count.unwrap_or(corpus.test.len()).min(corpus.test.len());
    let mut rows = Vec::with_capacity(count);
    for (id, s) in corpus.test.iter().take(count).enumerate() {
        let speckle = SpecklePattern::new(s.speckle.cast::<f64>(), Normalization::MeanOne)?;
        let ac = autocorr(&speckle)?;
        let retrieved = hio_retrieve(&ac, &retrieval)?;
        let truth: RealGrid<f64> = s.object.cast();
        let truth_on_grid = truth.embed(m.speckle_side, m.speckle_side)?;
        let score = align_score(&retrieved.estimate, &truth_on_grid)?;
        let dnn_score = net
            .map(|n| -> Result<f64, CliError> { Ok(align_score(&predict(n, s)?, &truth)?) })
            .transpose()?;
        write_pgm(
            &dir.join(format!("{label}_{id:03}_estimate.pgm")),
            &max_normalized(&retrieved.estimate.map(|v| v.max(0.0))),
        )?;
        write_pgm(&dir.join(format!("{label}_{id:03}_truth.pgm")), &truth_on_grid)?;
        eprintln!(
            "{label} #{id}: align_score {score:.4} (residual {:.4})",
            retrieved.residual
        );
        rows.push(BaselineRow {
            object_id: id,
            regime: label.to_string(),
            align_score: score,
            residual: retrieved.residual,
            dnn_score,
        });
    }
    Ok(rows)
}

pub fn baseline(cfg: &RunConfig, seed: Option<u64>) -> Result<BaselineReport, CliError> {
    let mut corpora = vec![load_corpus(&cfg.paths.corpus_dir)?];
    if let Some(extra) = &cfg.paths.compare_corpus_dir {
        corpora.push(load_corpus(extra)?);
    }
    let net = if cfg.paths.checkpoint.is_file() {
        Some(load_checkpoint::<f64>(&cfg.paths.checkpoint).map_err(CliError::artifact)?)
    } else {
        None
    };
    let dir = cfg.paths.report_dir.join("baseline");
    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    let mut rows = Vec::new();
    let mut used: Vec<String> = Vec::new();
    for corpus in &corpora {
        let mut label = corpus.manifest.medium.regime.as_str().to_string();
        while used.contains(&label) {
            label.push_str("-b");
        }
        rows.extend(run_corpus(cfg, corpus, &label, seed, net.as_ref(), &dir)?);
        used.push(label);
    }
    let report = BaselineReport { rows };
    let csv = dir.join("baseline.csv");
    fs::write(&csv, report.to_csv()).map_err(|e| Error::io(&csv, e))?;
    Ok(report)
}
