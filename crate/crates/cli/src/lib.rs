//! Config-driven front end for the `mbsim` simulator: TOML configs,
//! batch runs, sweeps, binary snapshots and plot data.

pub mod check;
pub mod config;
pub mod error;
pub mod plot;
pub mod run;
pub mod setup;
pub mod snapshot;
pub mod sweep;
pub mod units;

pub use check::check;
pub use config::{load_config, parse_config, RunConfig};
pub use error::{CliError, Result};
pub use plot::emit_plot_data;
pub use run::{run, run_in, RunOutcome};
pub use snapshot::Snapshot;
pub use sweep::{sweep, Variation};
