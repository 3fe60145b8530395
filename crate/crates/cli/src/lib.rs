//! Scenario-driven front end for `nilflow`: exact predictions, numeric
//! verification runs, and their report files.

pub mod commands;
pub mod predict;
pub mod report;
pub mod scenario;
pub mod verify;

pub use commands::{bundled, load_scenario, Bundled, BUNDLED};
pub use predict::{predict, Analysis};
pub use scenario::{Mode, Scenario};
pub use verify::{verify, VerificationReport};
