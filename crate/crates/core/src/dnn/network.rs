//! Fully connected network: flatten, dense ReLU hidden stack, dense output.

use ndarray::{s, Array1, Array2, ArrayView2, Axis, Zip};

use crate::error::{Error, Result};
use crate::numerics::SeededRng;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Relu,
    Identity,
}

impl Activation {
    pub fn as_str(self) -> &'static str {
        match self {
            Activation::Relu => "relu",
            Activation::Identity => "identity",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "relu" => Ok(Activation::Relu),
            "identity" => Ok(Activation::Identity),
            other => Err(Error::Config(format!("unknown activation `{other}` (relu|identity)"))),
        }
    }

    pub fn code(self) -> u8 {
        match self {
            Activation::Relu => 1,
            Activation::Identity => 0,
        }
    }

    pub fn from_code(code: u8) -> Result<Self> {
        match code {
            1 => Ok(Activation::Relu),
            0 => Ok(Activation::Identity),
            other => Err(Error::Format(format!("unknown activation code {other}"))),
        }
    }

    #[inline]
    fn apply<T: Real>(self, z: T) -> T {
        match self {
            Activation::Relu if z > T::zero() => z,
            Activation::Relu => T::zero(),
            Activation::Identity => z,
        }
    }

    /// Derivative given the activation output (ReLU'(0) = 0).
    #[inline]
    fn slope<T: Real>(self, a: T) -> T {
        match self {
            Activation::Relu if a > T::zero() => T::one(),
            Activation::Relu => T::zero(),
            Activation::Identity => T::one(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkSpec {
    pub input_side: usize,
    pub output_side: usize,
    pub hidden_sizes: Vec<usize>,
    pub hidden_activation: Activation,
    pub output_activation: Activation,
    /// Constant subtracted from every input pixel before the first layer.
    pub input_offset: f32,
}

impl NetworkSpec {
    /// 32x32 speckle -> [2048, 1024, 512, 4096] -> 16x16 object.
    pub fn desk() -> Self {
        Self {
            input_side: 32,
            output_side: 16,
            hidden_sizes: vec![2048, 1024, 512, 4096],
            hidden_activation: Activation::Relu,
            output_activation: Activation::Relu,
            input_offset: 1.0,
        }
    }

    /// 64x64 speckle -> [8192, 4096, 2048, 16384] -> 28x28 object.
    pub fn full() -> Self {
        Self {
            input_side: 64,
            output_side: 28,
            hidden_sizes: vec![8192, 4096, 2048, 16384],
            ..Self::desk()
        }
    }

    pub fn input_len(&self) -> usize {
        self.input_side * self.input_side
    }

    pub fn output_len(&self) -> usize {
        self.output_side * self.output_side
    }

    /// `(fan_in, fan_out)` for each dense layer in order.
    pub fn layer_shapes(&self) -> Vec<(usize, usize)> {
        let mut sizes = vec![self.input_len()];
        sizes.extend_from_slice(&self.hidden_sizes);
        sizes.push(self.output_len());
        sizes.windows(2).map(|w| (w[0], w[1])).collect()
    }

    pub fn activation(&self, layer: usize) -> Activation {
        if layer == self.hidden_sizes.len() {
            self.output_activation
        } else {
            self.hidden_activation
        }
    }

    pub fn parameter_count(&self) -> usize {
        self.layer_shapes().iter().map(|(i, o)| (i + 1) * o).sum()
    }

    pub fn validate(&self) -> Result<()> {
        if self.input_side == 0 || self.output_side == 0 || self.hidden_sizes.contains(&0) {
            return Err(Error::Config(format!("network sizes must be >= 1: {self:?}")));
        }
        if !self.input_offset.is_finite() {
            return Err(Error::Config("input_offset must be finite".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseLayer<T> {
    /// `out x in`, row-major.
    pub w: Array2<T>,
    pub b: Array1<T>,
    pub activation: Activation,
}

impl<T: Real> DenseLayer<T> {
    pub fn fan_in(&self) -> usize {
        self.w.ncols()
    }

    pub fn fan_out(&self) -> usize {
        self.w.nrows()
    }

    /// `act(x W^T + b)` for a batch `x` of shape `batch x in`.
    fn forward(&self, x: ArrayView2<T>) -> Array2<T> {
        let mut z = x.dot(&self.w.t());
        let act = self.activation;
        Zip::from(z.rows_mut()).for_each(|mut row| {
            Zip::from(&mut row)
                .and(&self.b)
                .for_each(|v, &b| *v = act.apply(*v + b));
        });
        z
    }
}

/// Per-layer parameter gradients, same shapes as the layers.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients<T> {
    pub layers: Vec<(Array2<T>, Array1<T>)>,
}

impl<T: Real> Gradients<T> {
    pub fn zeros_like(net: &Network<T>) -> Self {
        Self {
            layers: net
                .layers
                .iter()
                .map(|l| (Array2::zeros(l.w.raw_dim()), Array1::zeros(l.b.len())))
                .collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        let mut m = T::zero();
        for ((wa, ba), (wb, bb)) in self.layers.iter().zip(&other.layers) {
            for (a, b) in wa.iter().chain(ba).zip(wb.iter().chain(bb)) {
                m = m.max((*a - *b).abs());
            }
        }
        m
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Network<T> {
    spec: NetworkSpec,
    layers: Vec<DenseLayer<T>>,
}

pub fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::Dimension(format!("expected length {expected}, got {found}")));
    }
    Ok(())
}

/// Mean over all elements of `(y_hat - y)^2`.
pub fn mse<T: Real>(y_hat: &[T], y: &[T]) -> Result<T> {
    check_len(y.len(), y_hat.len())?;
    if y.is_empty() {
        return Err(Error::Dimension("mse of empty vectors".into()));
    }
    let sum: T = y_hat.iter().zip(y).map(|(a, b)| (*a - *b) * (*a - *b)).sum();
    Ok(sum / T::of_usize(y.len()))
}

impl<T: Real> Network<T> {
    /// He-normal weights (variance `2 / fan_in`), biases 0.01.
    pub fn init(spec: &NetworkSpec, rng: &mut SeededRng) -> Result<Self> {
        spec.validate()?;
        let layers = spec
            .layer_shapes()
            .into_iter()
            .enumerate()
            .map(|(i, (fan_in, fan_out))| {
                let std = (2.0 / fan_in as f64).sqrt();
                let mut draws = Vec::with_capacity(fan_in * fan_out + 1);
                while draws.len() < fan_in * fan_out {
                    let (a, b) = rng.gaussian_pair();
                    draws.push(T::of(a * std));
                    draws.push(T::of(b * std));
                }
                draws.truncate(fan_in * fan_out);
                DenseLayer {
                    w: Array2::from_shape_vec((fan_out, fan_in), draws).expect("shape matches"),
                    b: Array1::from_elem(fan_out, T::of(0.01)),
                    activation: spec.activation(i),
                }
            })
            .collect();
        Ok(Self {
            spec: spec.clone(),
            layers,
        })
    }

    pub fn zeros(spec: &NetworkSpec) -> Result<Self> {
        spec.validate()?;
        let layers = spec
            .layer_shapes()
            .into_iter()
            .enumerate()
            .map(|(i, (fan_in, fan_out))| DenseLayer {
                w: Array2::zeros((fan_out, fan_in)),
                b: Array1::zeros(fan_out),
                activation: spec.activation(i),
            })
            .collect();
        Ok(Self {
            spec: spec.clone(),
            layers,
        })
    }

    pub fn from_layers(spec: NetworkSpec, layers: Vec<DenseLayer<T>>) -> Result<Self> {
        spec.validate()?;
        let shapes = spec.layer_shapes();
        if shapes.len() != layers.len() {
            return Err(Error::Dimension(format!(
                "spec has {} layers, got {}",
                shapes.len(),
                layers.len()
            )));
        }
        for (i, ((fan_in, fan_out), l)) in shapes.iter().zip(&layers).enumerate() {
            if l.w.dim() != (*fan_out, *fan_in) || l.b.len() != *fan_out {
                return Err(Error::Dimension(format!(
                    "layer {i}: expected {fan_out}x{fan_in}, got {:?} with {} biases",
                    l.w.dim(),
                    l.b.len()
                )));
            }
            if l.activation != spec.activation(i) {
                return Err(Error::Config(format!("layer {i}: activation disagrees with spec")));
            }
            if l.w.iter().chain(&l.b).any(|v| !v.is_finite()) {
                return Err(Error::Domain(format!("layer {i}: non-finite parameter")));
            }
        }
        Ok(Self { spec, layers })
    }

    pub fn spec(&self) -> &NetworkSpec {
        &self.spec
    }

    pub fn layers(&self) -> &[DenseLayer<T>] {
        &self.layers
    }

    pub fn layers_mut(&mut self) -> &mut [DenseLayer<T>] {
        &mut self.layers
    }

    pub fn cast<U: Real>(&self) -> Network<U> {
        Network {
            spec: self.spec.clone(),
            layers: self
                .layers
                .iter()
                .map(|l| DenseLayer {
                    w: l.w.mapv(|v| U::of(v.as_f64())),
                    b: l.b.mapv(|v| U::of(v.as_f64())),
                    activation: l.activation,
                })
                .collect(),
        }
    }

    fn check_batch(&self, x: &ArrayView2<T>) -> Result<()> {
        check_len(self.spec.input_len(), x.ncols())
    }

    fn centered(&self, x: ArrayView2<T>) -> Array2<T> {
        let off = T::of(self.spec.input_offset as f64);
        x.mapv(|v| v - off)
    }

    /// Activations of every layer for a batch; index 0 is the centered input.
    fn activations(&self, x: ArrayView2<T>) -> Vec<Array2<T>> {
        let mut acts = Vec::with_capacity(self.layers.len() + 1);
        acts.push(self.centered(x));
        for layer in &self.layers {
            let next = layer.forward(acts.last().expect("non-empty").view());
            acts.push(next);
        }
        acts
    }

    /// Batch forward pass; rows are samples.
    pub fn forward_batch(&self, x: ArrayView2<T>) -> Result<Array2<T>> {
        self.check_batch(&x)?;
        let mut a = self.centered(x);
        for layer in &self.layers {
            a = layer.forward(a.view());
        }
        Ok(a)
    }

    pub fn forward(&self, x: &[T]) -> Result<Vec<T>> {
        let view = ArrayView2::from_shape((1, x.len()), x).expect("row vector");
        Ok(self.forward_batch(view)?.into_raw_vec_and_offset().0)
    }

    /// Batch MSE: mean over samples of the per-sample element mean.
    pub fn loss(&self, x: ArrayView2<T>, y: ArrayView2<T>) -> Result<T> {
        let y_hat = self.forward_batch(x)?;
        batch_mse(y_hat.view(), y)
    }

    /// Loss and exact gradients of the batch MSE.
    pub fn backward(&self, x: ArrayView2<T>, y: ArrayView2<T>) -> Result<(T, Gradients<T>)> {
        self.check_batch(&x)?;
        if y.dim() != (x.nrows(), self.spec.output_len()) {
            return Err(Error::Dimension(format!(
                "targets {:?}, expected ({}, {})",
                y.dim(),
                x.nrows(),
                self.spec.output_len()
            )));
        }
        let acts = self.activations(x);
        let out = acts.last().expect("output");
        let loss = batch_mse(out.view(), y)?;
        let scale = T::of(2.0) / T::of_usize(y.len());
        let mut delta = Array2::zeros(out.raw_dim());
        Zip::from(&mut delta)
            .and(out)
            .and(y)
            .for_each(|d, &a, &t| *d = (a - t) * scale);

        let mut grads = Vec::with_capacity(self.layers.len());
        for (i, layer) in self.layers.iter().enumerate().rev() {
            let a_out = &acts[i + 1];
            let act = layer.activation;
            Zip::from(&mut delta)
                .and(a_out)
                .for_each(|d, &a| *d = *d * act.slope(a));
            let gw = delta.t().dot(&acts[i]);
            let gb = delta.sum_axis(Axis(0));
            if i > 0 {
                delta = delta.dot(&layer.w);
            }
            grads.push((gw, gb));
        }
        grads.reverse();
        Ok((loss, Gradients { layers: grads }))
    }

    /// `theta <- theta - lr * grad`.
    pub fn sgd_step(&mut self, grads: &Gradients<T>, lr: T) {
        for (layer, (gw, gb)) in self.layers.iter_mut().zip(&grads.layers) {
            layer.w.scaled_add(-lr, gw);
            layer.b.scaled_add(-lr, gb);
        }
    }

    pub fn parameters_finite(&self) -> bool {
        self.layers
            .iter()
            .all(|l| l.w.iter().chain(&l.b).all(|v| v.is_finite()))
    }
}

pub fn batch_mse<T: Real>(y_hat: ArrayView2<T>, y: ArrayView2<T>) -> Result<T> {
    if y_hat.dim() != y.dim() {
        return Err(Error::Dimension(format!("{:?} vs {:?}", y_hat.dim(), y.dim())));
    }
    if y.is_empty() {
        return Err(Error::Dimension("mse of empty batch".into()));
    }
    let mut sum = T::zero();
    Zip::from(&y_hat).and(&y).for_each(|&a, &b| sum += (a - b) * (a - b));
    Ok(sum / T::of_usize(y.len()))
}

/// Copies the listed rows of `src` into `dst` (which must have `rows.len()` rows).
pub fn gather_rows<T: Real>(src: &Array2<T>, rows: &[usize], dst: &mut Array2<T>) {
    for (k, &r) in rows.iter().enumerate() {
        dst.slice_mut(s![k, ..]).assign(&src.slice(s![r, ..]));
    }
}
