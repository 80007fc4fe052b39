use num_complex::Complex;

use crate::error::{Error, Result};
use crate::numerics::{Direction, Fft2, RealGrid};
use crate::scalar::Real;

fn centered(g: &RealGrid<f64>) -> Result<(Vec<f64>, f64)> {
    let m = g.mean();
    let d: Vec<f64> = g.as_slice().iter().map(|v| v - m).collect();
    let norm = d.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !(norm > 0.0) {
        return Err(Error::Domain("align_score of a constant image".into()));
    }
    Ok((d, norm))
}

/// Maximum Pearson correlation over every circular translation of the
/// estimate and of its point reflection.
pub fn align_score<T: Real>(estimate: &RealGrid<T>, truth: &RealGrid<T>) -> Result<f64> {
    if (estimate.rows(), estimate.cols()) != (truth.rows(), truth.cols()) {
        return Err(Error::Dimension(format!(
            "estimate {}x{} vs truth {}x{}",
            estimate.rows(),
            estimate.cols(),
            truth.rows(),
            truth.cols()
        )));
    }
    let est = estimate.cast::<f64>();
    let (t, tn) = centered(&truth.cast())?;
    let mut best = f64::NEG_INFINITY;
    for e in [est.clone(), est.point_reflect()] {
        let (e, en) = centered(&e)?;
        let peak = if est.rows().is_power_of_two() && est.cols().is_power_of_two() {
            max_xcorr_fft(&e, &t, est.rows(), est.cols())?
        } else {
            max_xcorr_direct(&e, &t, est.rows(), est.cols())
        };
        best = best.max(peak / (en * tn));
    }
    Ok(best.min(1.0))
}

fn max_xcorr_fft(e: &[f64], t: &[f64], rows: usize, cols: usize) -> Result<f64> {
    let fft = Fft2::<f64>::new(rows, cols)?;
    let mut fe: Vec<Complex<f64>> = e.iter().map(|&v| Complex::new(v, 0.0)).collect();
    let mut ft: Vec<Complex<f64>> = t.iter().map(|&v| Complex::new(v, 0.0)).collect();
    fft.process(&mut fe, Direction::Forward);
    fft.process(&mut ft, Direction::Forward);
    for (a, b) in fe.iter_mut().zip(&ft) {
        *a *= b.conj();
    }
    fft.process(&mut fe, Direction::Inverse);
    // Unitary transforms: the circular cross-correlation picks up sqrt(N).
    let scale = ((rows * cols) as f64).sqrt();
    Ok(fe.iter().map(|z| z.re * scale).fold(f64::NEG_INFINITY, f64::max))
}

fn max_xcorr_direct(e: &[f64], t: &[f64], rows: usize, cols: usize) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for dy in 0..rows {
        for dx in 0..cols {
            let mut acc = 0.0;
            for r in 0..rows {
                for c in 0..cols {
                    acc += e[((r + dy) % rows) * cols + (c + dx) % cols] * t[r * cols + c];
                }
            }
            best = best.max(acc);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{stats, SeededRng};

    fn random(rows: usize, cols: usize, seed: u64) -> RealGrid<f64> {
        let mut rng = SeededRng::new(seed);
        RealGrid::from_fn(rows, cols, |_, _| rng.uniform())
    }

    #[test]
    fn identical_and_shifted() {
        let t = random(16, 16, 1);
        assert!((align_score(&t, &t).unwrap() - 1.0).abs() < 1e-12);
        assert!((align_score(&t.roll(3, 2), &t).unwrap() - 1.0).abs() < 1e-12);
        assert!((align_score(&t.point_reflect().roll(-5, 7), &t).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fft_and_direct_agree() {
        let (a, b) = (random(8, 16, 2), random(8, 16, 3));
        let (ea, na) = centered(&a).unwrap();
        let (eb, nb) = centered(&b).unwrap();
        let fast = max_xcorr_fft(&ea, &eb, 8, 16).unwrap() / (na * nb);
        let slow = max_xcorr_direct(&ea, &eb, 8, 16) / (na * nb);
        assert!((fast - slow).abs() < 1e-12);
    }

    #[test]
    fn at_least_plain_pearson() {
        let (a, b) = (random(6, 6, 4), random(6, 6, 5));
        let p = stats::pearson(a.as_slice(), b.as_slice()).unwrap();
        assert!(align_score(&a, &b).unwrap() >= p - 1e-12);
    }

    #[test]
    fn errors() {
        let t = random(8, 8, 1);
        assert!(matches!(
            align_score(&RealGrid::filled(8, 8, 1.0), &t),
            Err(Error::Domain(_))
        ));
        assert!(matches!(align_score(&random(8, 4, 1), &t), Err(Error::Dimension(_))));
    }
}
