//! File formats, dataset orchestration and the command-line harness around
//! [`lpdmi_core`].

pub mod cli;
pub mod config;
pub mod error;
pub mod io;
pub mod model;
pub mod pipeline;
pub mod report;
pub mod synth;

pub use config::PipelineConfig;
pub use error::{Error, Result};
