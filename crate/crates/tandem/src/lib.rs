//! Problem files, the cooperation pipeline and the command line around
//! `tandem-core`.

pub mod config;
pub mod format;
pub mod pipeline;
pub mod race;
pub mod report;

pub use format::{parse_problem, serialize, ParseError};
