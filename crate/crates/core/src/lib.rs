pub mod clique;
pub mod coarse;
pub mod cube;
pub mod error;
pub mod generate;
pub mod graph;
pub mod harness;
pub mod io;
pub mod median;
pub mod propa;
pub mod set;

pub use error::{Error, Result};
