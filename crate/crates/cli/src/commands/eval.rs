use std::fmt;
use std::fs;
use std::path::Path;

use speckle_core::dataset::synth::class_tag;
use speckle_core::dataset::Sample;
use speckle_core::dnn::{load_checkpoint, mse, predict_image, Network};
use speckle_core::numerics::{stats, RealGrid};
use speckle_core::scatter::{Normalization, SpecklePattern};
use speckle_core::Error;

use super::train::{check_dims, load_corpus};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::pgm::{max_normalized, write_pgm};

#[derive(Debug, Clone, PartialEq)]
pub struct EvalRow {
    pub id: usize,
    pub label: Option<i16>,
    pub mse: f64,
    /// `NaN` when the prediction is constant.
    pub pearson: f64,
    pub mean_image_mse: Option<f64>,
    /// Digit class whose mean training image best matches the prediction.
    pub nearest_digit: Option<u8>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SetSummary {
    pub name: &'static str,
    pub count: usize,
    pub mse: f64,
    /// Constant predictions count as zero correlation.
    pub pearson: f64,
    pub mean_image_mse: Option<f64>,
    pub mean_image_pearson: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub test: Vec<EvalRow>,
    pub letters: Vec<EvalRow>,
    pub summaries: Vec<SetSummary>,
}

impl EvalReport {
    pub fn summary(&self, name: &str) -> Option<&SetSummary> {
        self.summaries.iter().find(|s| s.name == name)
    }
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.summaries.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(
                f,
                "{}: {} samples, MSE {:.6}, Pearson {:.4}",
                s.name, s.count, s.mse, s.pearson
            )?;
            if let (Some(m), Some(p)) = (s.mean_image_mse, s.mean_image_pearson) {
                write!(f, " (mean-image predictor: MSE {m:.6}, Pearson {p:.4})")?;
            }
        }
        Ok(())
    }
}

fn mean_grid(samples: &[Sample], side: usize, filter: impl Fn(&Sample) -> bool) -> Option<RealGrid<f64>> {
    let picked: Vec<&Sample> = samples.iter().filter(|s| filter(s)).collect();
    if picked.is_empty() {
        return None;
    }
    let mut acc = RealGrid::zeros(side, side);
    for s in &picked {
        for (a, v) in acc.as_mut_slice().iter_mut().zip(s.object.as_slice()) {
            *a += *v as f64;
        }
    }
    let n = picked.len() as f64;
    Some(acc.map(|v| v / n))
}

pub fn predict(net: &Network<f64>, sample: &Sample) -> Result<RealGrid<f64>, CliError> {
    let pattern = SpecklePattern::new(sample.speckle.cast::<f64>(), Normalization::MeanOne)?;
    Ok(predict_image(net, &pattern)?)
}

fn pearson_or_nan(a: &[f64], b: &[f64]) -> f64 {
    stats::pearson(a, b).unwrap_or(f64::NAN)
}

fn evaluate_set(
    name: &'static str,
    net: &Network<f64>,
    samples: &[Sample],
    mean_image: Option<&RealGrid<f64>>,
    class_means: &[(u8, RealGrid<f64>)],
    dir: &Path,
) -> Result<(Vec<EvalRow>, SetSummary), CliError> {
    let mut rows = Vec::with_capacity(samples.len());
    let (mut mi_mse, mut mi_p) = (0.0, 0.0);
    for (id, s) in samples.iter().enumerate() {
        let truth = s.object.cast::<f64>();
        let pred = predict(net, s)?;
        let stem = format!("{name}_{id:03}");
        write_pgm(&dir.join(format!("{stem}_speckle.pgm")), &max_normalized(&s.speckle))?;
        write_pgm(&dir.join(format!("{stem}_prediction.pgm")), &pred)?;
        write_pgm(&dir.join(format!("{stem}_truth.pgm")), &truth)?;
        let mean_image_mse = mean_image.map(|m| mse(m.as_slice(), truth.as_slice())).transpose()?;
        if let Some(m) = mean_image {
            mi_mse += mean_image_mse.unwrap_or(0.0);
            let p = pearson_or_nan(m.as_slice(), truth.as_slice());
            mi_p += if p.is_finite() { p } else { 0.0 };
        }
        let nearest_digit = class_means
            .iter()
            .map(|(c, g)| (*c, pearson_or_nan(pred.as_slice(), g.as_slice())))
            .filter(|(_, p)| p.is_finite())
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(c, _)| c);
        rows.push(EvalRow {
            id,
            label: s.label,
            mse: mse(pred.as_slice(), truth.as_slice())?,
            pearson: pearson_or_nan(pred.as_slice(), truth.as_slice()),
            mean_image_mse,
            nearest_digit,
        });
    }
    let n = rows.len().max(1) as f64;
    let summary = SetSummary {
        name,
        count: rows.len(),
        mse: rows.iter().map(|r| r.mse).sum::<f64>() / n,
        pearson: rows
            .iter()
            .map(|r| if r.pearson.is_finite() { r.pearson } else { 0.0 })
            .sum::<f64>()
            / n,
        mean_image_mse: mean_image.map(|_| mi_mse / n),
        mean_image_pearson: mean_image.map(|_| mi_p / n),
    };
    Ok((rows, summary))
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or(String::new(), |x| format!("{x:.6}"))
}

fn rows_csv(rows: &[EvalRow], with_nearest: bool) -> String {
    let mut out = String::from("id,class,mse,pearson");
    if with_nearest {
        out.push_str(",nearest_digit");
    }
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{:.6},{:.6}",
            r.id,
            class_tag(r.label),
            r.mse,
            r.pearson
        ));
        if with_nearest {
            out.push_str(&format!(
                ",{}",
                r.nearest_digit.map_or(String::new(), |d| d.to_string())
            ));
        }
        out.push('\n');
    }
    out
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| Error::io(path, e).into())
}

pub fn eval(cfg: &RunConfig) -> Result<EvalReport, CliError> {
    let corpus = load_corpus(&cfg.paths.corpus_dir)?;
    check_dims(cfg, &corpus)?;
    if !cfg.paths.checkpoint.is_file() {
        return Err(CliError::input(format!(
            "no checkpoint at {} (run train first)",
            cfg.paths.checkpoint.display()
        )));
    }
    let net: Network<f64> = load_checkpoint(&cfg.paths.checkpoint).map_err(CliError::artifact)?;
    if net.spec() != &cfg.network {
        return Err(CliError::mismatch(format!(
            "checkpoint network {:?} differs from configured {:?}",
            net.spec(),
            cfg.network
        )));
    }
    let side = corpus.manifest.medium.object_side;
    let mean_image = mean_grid(&corpus.train, side, |_| true);
    let class_means: Vec<(u8, RealGrid<f64>)> = (0u8..10)
        .filter_map(|d| mean_grid(&corpus.train, side, |s| s.label == Some(d as i16)).map(|g| (d, g)))
        .collect();

    let dir = cfg.paths.report_dir.join("eval");
    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    let (test, s_test) = evaluate_set("test", &net, &corpus.test, mean_image.as_ref(), &[], &dir)?;
    let (letters, s_letters) = evaluate_set(
        "letters",
        &net,
        &corpus.letters,
        mean_image.as_ref(),
        &class_means,
        &dir,
    )?;
    write(&dir.join("test_metrics.csv"), &rows_csv(&test, false))?;
    write(&dir.join("letters_metrics.csv"), &rows_csv(&letters, true))?;

    let summaries = vec![s_test, s_letters];
    let mut csv = String::from("set,count,mse,pearson,mean_image_mse,mean_image_pearson\n");
    for s in &summaries {
        csv.push_str(&format!(
            "{},{},{:.6},{:.6},{},{}\n",
            s.name,
            s.count,
            s.mse,
            s.pearson,
            fmt_opt(s.mean_image_mse),
            fmt_opt(s.mean_image_pearson)
        ));
    }
    write(&dir.join("summary.csv"), &csv)?;
    Ok(EvalReport {
        test,
        letters,
        summaries,
    })
}
