//! Batch front end for the verification suites: instance files in, text or
//! JSON reports out.

pub mod error;
pub mod run;
pub mod spec;

pub use error::{CliError, CliResult};
pub use run::{cmd_check, cmd_choquet, cmd_dyadic, cmd_extend, render_text, Overrides, RunReport};
pub use spec::InstanceSpec;
