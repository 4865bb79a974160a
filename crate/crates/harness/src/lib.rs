//! Command-line plumbing for `lifi-orient`: JSON run configs, orientation
//! dataset ingestion, scenario dispatch and CSV table artifacts.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod artifact;
pub mod config;
pub mod error;
pub mod ingest;
pub mod scenarios;

pub use artifact::{Provenance, TableArtifact, Value};
pub use config::{load_config, parse_config, save_config, RunConfig, Scenario};
pub use error::{HarnessError, Result};
pub use ingest::{ingest_orientation_csv, OrientationSeries};
pub use scenarios::{fit_file, run};
