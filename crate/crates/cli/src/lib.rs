//! Command-line front end for `modelsync-core`: configuration, report
//! rendering, chat transports and the subcommands.

pub mod app;
pub mod config;
pub mod error;
pub mod report;
pub mod transport;

pub use app::run;
pub use error::CliError;
