//! One module per subcommand; each exposes a single `cmd` entry point.

pub mod build_benchmark;
pub mod report;
pub mod score;
pub mod train_tokenizer;
pub mod validate;
