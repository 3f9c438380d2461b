//! Experiment harness for the vrcaptcha gateway: seeded simulation runs with
//! CSV output, calibration of the humanness models, timing reports and an
//! HTTP server.

pub mod calibrate;
pub mod config;
pub mod error;
pub mod report;
pub mod run;
pub mod seed;
pub mod serve;

pub use calibrate::{calibrate, CalibrationOutput, HoldoutReport};
pub use config::{CalibrationConfig, ExperimentConfig};
pub use error::{HarnessError, Result};
pub use report::{rank_report, RankEntry};
pub use run::{read_csv, run_experiment, summary_json, write_csv, Row, RunOutput, Summary};
