use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const SMALL: &str = "\
data.objects = blobs
medium.regime = thick
medium.object_side = 16
medium.speckle_side = 16
medium.seed = 2
split.train_count = 40
split.test_count = 4
split.letters_count = 3
split.seed = 9
network.hidden_sizes = 16, 16
network.output_activation = identity
train.epochs = 3
train.batch_size = 8
train.lr = 0.02
baseline.iterations = 30
baseline.er_tail = 5
baseline.restarts = 2
";

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_speckle-invert"));
    cmd.env("SPECKLE_THREADS", "1");
    cmd
}

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn run(command: &str, config: &Path, out: &Path, extra: &[&str]) -> Output {
    bin()
        .args([command, "--config"])
        .arg(config)
        .arg("--out")
        .arg(out)
        .args(extra)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("terminated by signal")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn ok(o: Output) -> Output {
    assert_eq!(code(&o), 0, "stderr: {}", stderr(&o));
    o
}

fn pipeline(dir: &Path, config: &Path) {
    ok(run("gen-data", config, dir, &[]));
    ok(run("train", config, dir, &[]));
    ok(run("eval", config, dir, &[]));
}

#[test]
fn full_pipeline_writes_artifacts() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "small.conf", SMALL);
    let out = tmp.path().join("run");
    pipeline(&out, &cfg);
    let baseline = ok(run("baseline", &cfg, &out, &[]));
    assert!(String::from_utf8_lossy(&baseline.stdout).contains("thick: baseline align_score"));

    for f in [
        "corpus/manifest.txt",
        "corpus/train.spkc",
        "corpus/test.spkc",
        "corpus/letters.spkc",
        "model.spkn",
    ] {
        assert!(out.join(f).is_file(), "{f}");
    }
    let history = fs::read_to_string(out.join("report/history.csv")).unwrap();
    let lines: Vec<&str> = history.lines().collect();
    assert_eq!(lines[0], "epoch,train_mse,heldout_mse");
    assert_eq!(lines.len(), 4);
    assert!(lines[3].starts_with("3,"));
    assert_eq!(
        fs::read_to_string(out.join("report/train.log"))
            .unwrap()
            .lines()
            .count(),
        3
    );

    let test_csv = fs::read_to_string(out.join("report/eval/test_metrics.csv")).unwrap();
    assert_eq!(test_csv.lines().next(), Some("id,class,mse,pearson"));
    assert_eq!(test_csv.lines().count(), 5);
    let letters_csv = fs::read_to_string(out.join("report/eval/letters_metrics.csv")).unwrap();
    assert_eq!(letters_csv.lines().count(), 4);
    let pgm = fs::read(out.join("report/eval/test_000_prediction.pgm")).unwrap();
    assert!(pgm.starts_with(b"P5\n16 16\n255\n"));
    assert_eq!(pgm.len(), b"P5\n16 16\n255\n".len() + 256);

    let base_csv = fs::read_to_string(out.join("report/baseline/baseline.csv")).unwrap();
    assert_eq!(
        base_csv.lines().next(),
        Some("object_id,regime,align_score,residual,dnn_score")
    );
    assert_eq!(base_csv.lines().count(), 5);
}

#[test]
fn reruns_are_byte_identical() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "small.conf", SMALL);
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    pipeline(&a, &cfg);
    pipeline(&b, &cfg);
    for f in [
        "corpus/manifest.txt",
        "corpus/train.spkc",
        "corpus/test.spkc",
        "corpus/letters.spkc",
        "model.spkn",
        "report/history.csv",
        "report/eval/test_metrics.csv",
        "report/eval/summary.csv",
    ] {
        assert_eq!(
            fs::read(a.join(f)).unwrap(),
            fs::read(b.join(f)).unwrap(),
            "{f} differs"
        );
    }
}

#[test]
fn seed_flag_changes_the_split() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "small.conf", SMALL);
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    ok(run("gen-data", &cfg, &a, &[]));
    ok(run("gen-data", &cfg, &b, &["--seed", "10"]));
    let manifest = fs::read_to_string(b.join("corpus/manifest.txt")).unwrap();
    assert!(manifest.contains("split.seed=10"));
    assert_ne!(
        fs::read(a.join("corpus/train.spkc")).unwrap(),
        fs::read(b.join("corpus/train.spkc")).unwrap()
    );
}

#[test]
fn empty_test_split_gives_header_only_metrics() {
    let tmp = TempDir::new().unwrap();
    let text = SMALL.replace("split.test_count = 4", "split.test_count = 0");
    let cfg = write_config(tmp.path(), "small.conf", &text);
    let out = tmp.path().join("run");
    pipeline(&out, &cfg);
    let csv = fs::read_to_string(out.join("report/eval/test_metrics.csv")).unwrap();
    assert_eq!(csv, "id,class,mse,pearson\n");
    let history = fs::read_to_string(out.join("report/history.csv")).unwrap();
    assert!(history.lines().nth(1).unwrap().ends_with(','));
}

#[test]
fn missing_mnist_is_an_input_error() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "mnist.conf",
        "paths.mnist_dir = nowhere\nsplit.train_count = 10\n",
    );
    let o = run("gen-data", &cfg, &tmp.path().join("run"), &[]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("train-images-idx3-ubyte"), "{}", stderr(&o));
}

#[test]
fn config_errors_exit_with_2() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("run");
    let missing = tmp.path().join("absent.conf");
    assert_eq!(code(&run("gen-data", &missing, &out, &[])), 2);
    let unknown = write_config(tmp.path(), "unknown.conf", "medium.colour = blue\n");
    let o = run("gen-data", &unknown, &out, &[]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("medium.colour"));
    let bad = write_config(
        tmp.path(),
        "bad.conf",
        "medium.speckle_side = 48\ndata.objects = blobs\n",
    );
    assert_eq!(code(&run("gen-data", &bad, &out, &[])), 2);
    let garbled = write_config(tmp.path(), "garbled.conf", "this is not a config\n");
    assert_eq!(code(&run("train", &garbled, &out, &[])), 2);
}

#[test]
fn train_without_corpus_is_an_input_error() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "small.conf", SMALL);
    let o = run("train", &cfg, &tmp.path().join("run"), &[]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("gen-data"));
}

#[test]
fn corrupted_artifacts_exit_with_4() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "small.conf", SMALL);
    let out = tmp.path().join("run");
    pipeline(&out, &cfg);

    let model = out.join("model.spkn");
    let mut bytes = fs::read(&model).unwrap();
    let mid = bytes.len() / 2;
    bytes[mid] ^= 0x40;
    fs::write(&model, &bytes).unwrap();
    assert_eq!(code(&run("eval", &cfg, &out, &[])), 4);

    let shard = out.join("corpus/test.spkc");
    let mut bytes = fs::read(&shard).unwrap();
    let last = bytes.len() - 1;
    bytes[last] ^= 1;
    fs::write(&shard, &bytes).unwrap();
    let o = run("train", &cfg, &out, &[]);
    assert_eq!(code(&o), 4, "{}", stderr(&o));
}

#[test]
fn checkpoint_from_another_network_exits_with_4() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "small.conf", SMALL);
    let out = tmp.path().join("run");
    pipeline(&out, &cfg);
    let other = write_config(
        tmp.path(),
        "other.conf",
        &SMALL.replace("network.hidden_sizes = 16, 16", "network.hidden_sizes = 16, 8"),
    );
    assert_eq!(code(&run("eval", &other, &out, &[])), 4);
}

#[test]
fn divergence_exits_with_3() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "hot.conf",
        &SMALL.replace("train.lr = 0.02", "train.lr = 1e6"),
    );
    let out = tmp.path().join("run");
    ok(run("gen-data", &cfg, &out, &[]));
    let o = run("train", &cfg, &out, &[]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
}

#[test]
fn usage_errors() {
    let o = bin().arg("bogus").output().unwrap();
    assert_ne!(code(&o), 0);
    let o = bin().arg("train").output().unwrap();
    assert_ne!(code(&o), 0);
}
