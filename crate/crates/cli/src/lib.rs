//! Manifest parsing, command dispatch and JSON reports for `wzeta`.

pub mod gen;
pub mod manifest;
pub mod report;
pub mod run;

pub use manifest::{parse_manifest, Manifest, ManifestError};
pub use report::{emit_report, Outcome};
pub use run::{run_command, RunResult};
