//! Minibatch SGD training with per-epoch history.

use std::time::Instant;

use ndarray::Array2;

use super::network::{gather_rows, Gradients, Network};
use crate::error::{Error, Result};
use crate::numerics::SeededRng;
use crate::scalar::Real;

/// Row-aligned inputs (speckles) and targets (objects).
#[derive(Debug, Clone, PartialEq)]
pub struct TrainData<T> {
    pub inputs: Array2<T>,
    pub targets: Array2<T>,
}

impl<T: Real> TrainData<T> {
    pub fn new(inputs: Array2<T>, targets: Array2<T>) -> Result<Self> {
        if inputs.nrows() != targets.nrows() {
            return Err(Error::Dimension(format!(
                "{} inputs vs {} targets",
                inputs.nrows(),
                targets.nrows()
            )));
        }
        Ok(Self { inputs, targets })
    }

    /// Builds from per-sample `(input, target)` slices.
    pub fn from_pairs<'a, I>(pairs: I, input_len: usize, target_len: usize) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a [T], &'a [T])>,
    {
        let (mut xs, mut ys, mut n) = (Vec::new(), Vec::new(), 0);
        for (x, y) in pairs {
            super::network::check_len(input_len, x.len())?;
            super::network::check_len(target_len, y.len())?;
            xs.extend_from_slice(x);
            ys.extend_from_slice(y);
            n += 1;
        }
        Self::new(
            Array2::from_shape_vec((n, input_len), xs).expect("lengths checked"),
            Array2::from_shape_vec((n, target_len), ys).expect("lengths checked"),
        )
    }

    pub fn len(&self) -> usize {
        self.inputs.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub lr: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub seed: u64,
    pub shuffle: bool,
    pub momentum: f64,
    /// Emit a checkpoint every k epochs (the final epoch always emits).
    pub checkpoint_every: Option<usize>,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            lr: 0.05,
            epochs: 200,
            batch_size: 16,
            seed: 1,
            shuffle: true,
            momentum: 0.0,
            checkpoint_every: None,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.lr >= 0.0 && self.lr.is_finite()) {
            return Err(Error::Config(format!(
                "lr must be a finite non-negative number, got {}",
                self.lr
            )));
        }
        if self.epochs == 0 {
            return Err(Error::Config("epochs must be >= 1".into()));
        }
        if self.batch_size == 0 {
            return Err(Error::Config("batch_size must be >= 1".into()));
        }
        if !(0.0..1.0).contains(&self.momentum) {
            return Err(Error::Config(format!(
                "momentum must be in [0, 1), got {}",
                self.momentum
            )));
        }
        if self.checkpoint_every == Some(0) {
            return Err(Error::Config("checkpoint_every must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpochRecord {
    /// 1-based.
    pub epoch: usize,
    pub train_mse: f64,
    pub heldout_mse: Option<f64>,
    pub seconds: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrainHistory {
    pub epochs: Vec<EpochRecord>,
}

impl TrainHistory {
    pub fn len(&self) -> usize {
        self.epochs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.epochs.is_empty()
    }

    pub fn train_curve(&self) -> Vec<f64> {
        self.epochs.iter().map(|e| e.train_mse).collect()
    }

    pub fn last(&self) -> Option<&EpochRecord> {
        self.epochs.last()
    }

    /// `epoch,train_mse,heldout_mse[,seconds]`; missing held-out values are empty.
    pub fn to_csv(&self, with_seconds: bool) -> String {
        let mut out = String::from("epoch,train_mse,heldout_mse");
        if with_seconds {
            out.push_str(",seconds");
        }
        out.push('\n');
        for e in &self.epochs {
            let held = e.heldout_mse.map_or(String::new(), |v| format!("{v:.9}"));
            out.push_str(&format!("{},{:.9},{held}", e.epoch, e.train_mse));
            if with_seconds {
                out.push_str(&format!(",{:.3}", e.seconds));
            }
            out.push('\n');
        }
        out
    }
}

/// Mean batch MSE over a data set, evaluated in chunks.
pub fn evaluate<T: Real>(net: &Network<T>, data: &TrainData<T>) -> Result<f64> {
    if data.is_empty() {
        return Err(Error::Dimension("empty evaluation set".into()));
    }
    let chunk = 256;
    let mut total = 0.0;
    let n = data.len();
    let mut start = 0;
    while start < n {
        let end = (start + chunk).min(n);
        let x = data.inputs.slice(ndarray::s![start..end, ..]);
        let y = data.targets.slice(ndarray::s![start..end, ..]);
        total += net.loss(x, y)?.as_f64() * (end - start) as f64;
        start = end;
    }
    Ok(total / n as f64)
}

/// Event passed to the training observer after every epoch.
pub struct EpochEnd<'a, T> {
    pub record: &'a EpochRecord,
    pub network: &'a Network<T>,
    /// Whether a checkpoint is due at this epoch.
    pub checkpoint_due: bool,
}

/// Trains in place. Batches are drawn from a per-epoch permutation seeded by
/// `(config.seed, epoch)`; the last batch of an epoch may be short.
pub fn train<T: Real>(
    net: &mut Network<T>,
    data: &TrainData<T>,
    heldout: Option<&TrainData<T>>,
    config: &TrainConfig,
    mut observer: impl FnMut(EpochEnd<'_, T>) -> Result<()>,
) -> Result<TrainHistory> {
    config.validate()?;
    if data.is_empty() {
        return Err(Error::Config("training corpus is empty".into()));
    }
    let spec = net.spec();
    if data.inputs.ncols() != spec.input_len() || data.targets.ncols() != spec.output_len() {
        return Err(Error::Dimension(format!(
            "corpus rows are {}->{}, network expects {}->{}",
            data.inputs.ncols(),
            data.targets.ncols(),
            spec.input_len(),
            spec.output_len()
        )));
    }
    let n = data.len();
    let bs = config.batch_size.min(n);
    let lr = T::of(config.lr);
    let mu = T::of(config.momentum);
    let mut velocity = (config.momentum > 0.0).then(|| Gradients::zeros_like(net));
    let mut order: Vec<usize> = (0..n).collect();
    let mut xb = Array2::zeros((bs, data.inputs.ncols()));
    let mut yb = Array2::zeros((bs, data.targets.ncols()));
    let mut history = TrainHistory::default();

    for epoch in 1..=config.epochs {
        let started = Instant::now();
        if config.shuffle {
            order.sort_unstable();
            SeededRng::derived(config.seed, epoch as u64).shuffle(&mut order);
        }
        let mut total = 0.0;
        for rows in order.chunks(bs) {
            if rows.len() != xb.nrows() {
                xb = Array2::zeros((rows.len(), data.inputs.ncols()));
                yb = Array2::zeros((rows.len(), data.targets.ncols()));
            }
            gather_rows(&data.inputs, rows, &mut xb);
            gather_rows(&data.targets, rows, &mut yb);
            let (loss, grads) = net.backward(xb.view(), yb.view())?;
            let loss = loss.as_f64();
            if !loss.is_finite() {
                return Err(Error::Diverged { epoch, loss });
            }
            total += loss * rows.len() as f64;
            match velocity.as_mut() {
                Some(v) => {
                    for ((vw, vb), (gw, gb)) in v.layers.iter_mut().zip(&grads.layers) {
                        vw.zip_mut_with(gw, |a, &g| *a = mu * *a + g);
                        vb.zip_mut_with(gb, |a, &g| *a = mu * *a + g);
                    }
                    net.sgd_step(v, lr);
                }
                None => net.sgd_step(&grads, lr),
            }
            if rows.len() != bs {
                xb = Array2::zeros((bs, data.inputs.ncols()));
                yb = Array2::zeros((bs, data.targets.ncols()));
            }
        }
        let train_mse = total / n as f64;
        if !net.parameters_finite() {
            return Err(Error::Diverged { epoch, loss: train_mse });
        }
        let heldout_mse = heldout.map(|h| evaluate(net, h)).transpose()?;
        let record = EpochRecord {
            epoch,
            train_mse,
            heldout_mse,
            seconds: started.elapsed().as_secs_f64(),
        };
        let checkpoint_due = epoch == config.epochs || config.checkpoint_every.is_some_and(|k| epoch % k == 0);
        observer(EpochEnd {
            record: &record,
            network: net,
            checkpoint_due,
        })?;
        history.epochs.push(record);
    }
    Ok(history)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dnn::network::{Activation, NetworkSpec};

    fn small_spec() -> NetworkSpec {
        NetworkSpec {
            input_side: 3,
            output_side: 2,
            hidden_sizes: vec![16, 16, 16, 16],
            hidden_activation: Activation::Relu,
            output_activation: Activation::Relu,
            input_offset: 0.0,
        }
    }

    fn toy_data(n: usize, seed: u64) -> TrainData<f64> {
        let mut rng = SeededRng::new(seed);
        let x = Array2::from_shape_fn((n, 9), |_| rng.uniform());
        let y = Array2::from_shape_fn((n, 4), |(r, c)| 0.5 * (x[[r, c]] + x[[r, c + 4]]));
        TrainData::new(x, y).unwrap()
    }

    #[test]
    fn null_training_leaves_parameters() {
        let mut net: Network<f64> = Network::init(&small_spec(), &mut SeededRng::new(1)).unwrap();
        let before = net.clone();
        let cfg = TrainConfig {
            lr: 0.0,
            epochs: 1,
            batch_size: 4,
            ..TrainConfig::default()
        };
        let h = train(&mut net, &toy_data(10, 2), None, &cfg, |_| Ok(())).unwrap();
        assert_eq!(h.len(), 1);
        assert_eq!(net, before);
    }

    #[test]
    fn training_is_deterministic_and_descends() {
        let data = toy_data(64, 3);
        let held = toy_data(16, 4);
        let cfg = TrainConfig {
            lr: 0.05,
            epochs: 40,
            batch_size: 8,
            seed: 7,
            ..TrainConfig::default()
        };
        let run = || {
            let mut net: Network<f64> = Network::init(&small_spec(), &mut SeededRng::new(5)).unwrap();
            let h = train(&mut net, &data, Some(&held), &cfg, |_| Ok(())).unwrap();
            (net, h)
        };
        let (na, ha) = run();
        let (nb, hb) = run();
        assert_eq!(na, nb);
        assert_eq!(ha.to_csv(false), hb.to_csv(false));
        let curve = ha.train_curve();
        assert!(curve[39] < 0.8 * curve[0], "{curve:?}");
        assert!(ha.last().unwrap().heldout_mse.is_some());
    }

    #[test]
    fn momentum_training_runs() {
        let data = toy_data(32, 3);
        let cfg = TrainConfig {
            lr: 0.02,
            epochs: 20,
            batch_size: 8,
            momentum: 0.5,
            ..TrainConfig::default()
        };
        let mut net: Network<f64> = Network::init(&small_spec(), &mut SeededRng::new(5)).unwrap();
        let h = train(&mut net, &data, None, &cfg, |_| Ok(())).unwrap();
        assert!(h.train_curve()[19] < h.train_curve()[0]);
    }

    #[test]
    fn divergence_is_reported() {
        let data = toy_data(16, 3);
        let cfg = TrainConfig {
            lr: 1e6,
            epochs: 50,
            batch_size: 4,
            ..TrainConfig::default()
        };
        let spec = NetworkSpec {
            output_activation: Activation::Identity,
            ..small_spec()
        };
        let mut net: Network<f64> = Network::init(&spec, &mut SeededRng::new(5)).unwrap();
        let err = train(&mut net, &data, None, &cfg, |_| Ok(())).unwrap_err();
        assert!(matches!(err, Error::Diverged { .. }), "{err:?}");
    }

    #[test]
    fn checkpoint_schedule() {
        let data = toy_data(8, 3);
        let cfg = TrainConfig {
            epochs: 7,
            batch_size: 3,
            checkpoint_every: Some(3),
            ..TrainConfig::default()
        };
        let mut net: Network<f64> = Network::init(&small_spec(), &mut SeededRng::new(5)).unwrap();
        let mut due = Vec::new();
        train(&mut net, &data, None, &cfg, |e| {
            if e.checkpoint_due {
                due.push(e.record.epoch);
            }
            Ok(())
        })
        .unwrap();
        assert_eq!(due, vec![3, 6, 7]);
    }

    #[test]
    fn config_validation() {
        let ok = TrainConfig::default();
        assert!(ok.validate().is_ok());
        assert!(TrainConfig {
            epochs: 0,
            ..ok.clone()
        }
        .validate()
        .is_err());
        assert!(TrainConfig {
            batch_size: 0,
            ..ok.clone()
        }
        .validate()
        .is_err());
        assert!(TrainConfig {
            lr: f64::NAN,
            ..ok.clone()
        }
        .validate()
        .is_err());
        assert!(TrainConfig { momentum: 1.0, ..ok }.validate().is_err());
    }

    #[test]
    fn history_csv() {
        let h = TrainHistory {
            epochs: vec![
                EpochRecord {
                    epoch: 1,
                    train_mse: 0.5,
                    heldout_mse: Some(0.25),
                    seconds: 1.5,
                },
                EpochRecord {
                    epoch: 2,
                    train_mse: 0.125,
                    heldout_mse: None,
                    seconds: 1.0,
                },
            ],
        };
        assert_eq!(
            h.to_csv(false),
            "epoch,train_mse,heldout_mse\n1,0.500000000,0.250000000\n2,0.125000000,\n"
        );
        assert!(h
            .to_csv(true)
            .starts_with("epoch,train_mse,heldout_mse,seconds\n1,0.500000000,0.250000000,1.500\n"));
    }
}
