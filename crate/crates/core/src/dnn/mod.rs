//! Dense reconstruction network: model, SGD training, checkpoints, gradient check.

pub mod checkpoint;
pub mod gradcheck;
pub mod network;
pub mod train;

pub use checkpoint::{decode_checkpoint, encode_checkpoint, load_checkpoint, save_checkpoint};
pub use gradcheck::{gradient_check, GradCheck};
pub use network::{batch_mse, mse, Activation, DenseLayer, Gradients, Network, NetworkSpec};
pub use train::{evaluate, train, EpochEnd, EpochRecord, TrainConfig, TrainData, TrainHistory};

use crate::error::Result;
use crate::numerics::RealGrid;
use crate::scalar::Real;
use crate::scatter::SpecklePattern;

/// Forward pass reshaped to the object grid, clamped to `[0, 1]`.
pub fn predict_image<T: Real>(net: &Network<T>, speckle: &SpecklePattern<T>) -> Result<RealGrid<T>> {
    let side = net.spec().output_side;
    let y = net.forward(speckle.grid().as_slice())?;
    RealGrid::from_vec(
        side,
        side,
        y.into_iter().map(|v| v.max(T::zero()).min(T::one())).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::SeededRng;

    #[test]
    fn zero_network_predicts_black() {
        let spec = NetworkSpec {
            input_side: 4,
            output_side: 3,
            hidden_sizes: vec![2; 4],
            ..NetworkSpec::desk()
        };
        let net: Network<f64> = Network::zeros(&spec).unwrap();
        let sp = SpecklePattern::raw(RealGrid::filled(4, 4, 1.0)).unwrap();
        let img = predict_image(&net, &sp).unwrap();
        assert_eq!((img.rows(), img.sum()), (3, 0.0));
        let wrong = SpecklePattern::raw(RealGrid::filled(5, 5, 1.0)).unwrap();
        assert!(predict_image(&net, &wrong).is_err());
        let rand: Network<f64> = Network::init(&spec, &mut SeededRng::new(1)).unwrap();
        let img = predict_image(&rand, &sp).unwrap();
        assert!(img.as_slice().iter().all(|v| (0.0..=1.0).contains(v)));
    }
}
