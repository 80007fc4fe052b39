mod common;

use speckle_core::baseline::{align_score, autocorr, hio_retrieve, RetrievalConfig, SupportMask};
use speckle_core::dataset::synth::blob_object;
use speckle_core::numerics::{RealGrid, SeededRng};
use speckle_core::scatter::{sample_medium, shift_correlation, MediumSpec, Regime};
use speckle_core::Grid64;

fn medium_spec(regime: Regime, object_side: usize, speckle_side: usize, seed: u64) -> MediumSpec {
    MediumSpec {
        regime,
        object_side,
        speckle_side,
        seed,
        ..MediumSpec::desk()
    }
}

fn retrieve_score(spec: &MediumSpec, object: &Grid64, seed: u64) -> f64 {
    let medium = sample_medium::<f64>(spec).unwrap();
    let speckle = medium.forward(object, &mut SeededRng::new(0)).unwrap();
    let ac = autocorr(&speckle).unwrap();
    let (s, o) = (spec.speckle_side, spec.object_side);
    let cfg = RetrievalConfig::standard(SupportMask::top_left_box(s, s, o, o).unwrap(), seed);
    let out = hio_retrieve(&ac, &cfg).unwrap();
    align_score(&out.estimate, &object.embed(s, s).unwrap()).unwrap()
}

#[test]
fn thick_digit_is_not_recovered_by_phase_retrieval() {
    let images = common::mnist_train_images();
    let digit: Grid64 = RealGrid::from_fn(28, 28, |r, c| images.image(0)[r * 28 + c] as f64 / 255.0);
    let score = retrieve_score(&medium_spec(Regime::Thick, 28, 64, 2), &digit, 3);
    assert!(score <= 0.2, "thick digit align_score {score}");
}

#[test]
fn thin_blob_is_recovered_and_thick_blob_is_not() {
    let object: Grid64 = blob_object(16, &mut SeededRng::new(12));
    let thin = retrieve_score(&medium_spec(Regime::Thin, 16, 128, 4), &object, 1);
    let thick = retrieve_score(&medium_spec(Regime::Thick, 16, 128, 4), &object, 1);
    assert!(thin > thick + 0.4, "thin {thin} vs thick {thick}");
    assert!(thick <= 0.2, "thick {thick}");
}

#[test]
fn thin_speckle_follows_object_shifts_and_thick_does_not() {
    let mut rng = SeededRng::new(21);
    let object: Grid64 = RealGrid::from_fn(16, 16, |_, _| if rng.uniform() < 0.1 { 1.0 } else { 0.0 });
    let thin = sample_medium::<f64>(&medium_spec(Regime::Thin, 16, 32, 5)).unwrap();
    let thick = sample_medium::<f64>(&medium_spec(Regime::Thick, 16, 32, 5)).unwrap();
    assert!(shift_correlation(&thin, &object, 1, 0).unwrap() > 0.99);
    assert!(shift_correlation(&thick, &object, 1, 0).unwrap() < 0.2);
}
