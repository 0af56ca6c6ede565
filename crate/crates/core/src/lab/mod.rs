//! Map catalogs, experiment configs and self-contained JSON reports.
//!
//! An experiment is fully determined by its config and the catalog: every
//! random draw is keyed by the recorded seed, so rerunning a report's config
//! reproduces all of its numbers with any worker count. Only `timing` varies.

mod catalog;
mod config;
mod format;
mod report;
mod run;

pub use catalog::{
    parse_catalog, parse_catalog_str, power_exponents, CatalogEntry, CatalogError, MapCatalog, Tag, BUNDLED_CATALOG,
};
pub use config::{CharsetParams, ConfigError, DomainSpec, ExperimentConfig, ExperimentKind};
pub use format::{sig, sig_digits};
pub use report::{
    Assertion, CapturedError, ErrorClass, MapRecord, Measurement, Report, Timing, EXIT_ASSERTION, EXIT_INPUT,
    EXIT_NONCONVERGENCE, EXIT_PASS,
};
pub use run::{run_experiment, run_experiment_with_workers, with_workers, RATIO_BAND, SIGMAS};
