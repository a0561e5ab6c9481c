//! Files, reports and the `hyperpart` command line on top of
//! [`hyperpart_core`].

pub mod cli;
pub mod error;
pub mod io;
pub mod model_file;
pub mod report;
pub mod run_config;

pub use error::{AppError, Result};
pub use run_config::RunConfig;
