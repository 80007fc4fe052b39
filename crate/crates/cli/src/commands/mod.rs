//! The four pipeline commands. Each returns a structured summary; the binary
//! prints its `Display` form.

mod baseline;
mod eval;
mod gen_data;
mod train;

pub use baseline::{baseline, BaselineReport, BaselineRow};
pub use eval::{eval, predict, EvalReport, EvalRow, SetSummary};
pub use gen_data::{gen_data, GenSummary};
pub use train::{train, train_data, TrainSummary};
