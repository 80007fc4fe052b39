//! Small descriptive statistics used for validation and reporting.

use crate::error::{Error, Result};
use crate::scalar::Real;

pub fn mean<T: Real>(xs: &[T]) -> f64 {
    xs.iter().map(|v| v.as_f64()).sum::<f64>() / xs.len().max(1) as f64
}

/// Population standard deviation.
pub fn std_dev<T: Real>(xs: &[T]) -> f64 {
    let m = mean(xs);
    (xs.iter().map(|v| (v.as_f64() - m).powi(2)).sum::<f64>() / xs.len().max(1) as f64).sqrt()
}

/// Pearson correlation coefficient; fails when either input is constant.
pub fn pearson<T: Real>(a: &[T], b: &[T]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Dimension(format!(
            "pearson: lengths {} and {} differ",
            a.len(),
            b.len()
        )));
    }
    let (ma, mb) = (mean(a), mean(b));
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x.as_f64() - ma, y.as_f64() - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    if saa == 0.0 || sbb == 0.0 {
        return Err(Error::Domain("pearson correlation of a constant input".into()));
    }
    Ok(sab / (saa * sbb).sqrt())
}

/// Kolmogorov–Smirnov statistic of `xs` against an exponential with the given mean.
pub fn ks_exponential<T: Real>(xs: &[T], rate_mean: f64) -> f64 {
    let mut v: Vec<f64> = xs.iter().map(|x| x.as_f64()).collect();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    v.iter()
        .enumerate()
        .map(|(i, &x)| {
            let cdf = 1.0 - (-x.max(0.0) / rate_mean).exp();
            let lo = i as f64 / n;
            let hi = (i + 1) as f64 / n;
            (cdf - lo).abs().max((hi - cdf).abs())
        })
        .fold(0.0, f64::max)
}
