//! Library half of the `horizon` command-line tool: CSV ingestion, settings
//! and the subcommands, exposed for testing.

pub mod commands;
pub mod config;
pub mod error;
pub mod ingest;
pub mod output;

pub use commands::execute;
pub use config::Cli;
pub use error::{CliError, ExitKind};
pub use ingest::{ingest_returns, ColumnSel, IngestError};
