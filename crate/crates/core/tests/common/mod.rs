use std::path::PathBuf;

use speckle_core::dataset::{read_idx, IdxImageSet};

pub fn mnist_dir() -> PathBuf {
    std::env::var_os("SPECKLE_MNIST_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/mnist"))
}

pub fn mnist_train_images() -> IdxImageSet {
    let path = mnist_dir().join("train-images-idx3-ubyte");
    read_idx(&path).unwrap_or_else(|e| {
        panic!(
            "MNIST not found at {} ({e}); run scripts/fetch-mnist.sh",
            path.display()
        )
    })
}
