//! Linear classifier geometry: soft- and hard-margin SVMs, mean difference,
//! Fisher and maximal data piling directions, and executable checks of how
//! the SVM direction moves between them as the cost parameter varies.

pub mod classifiers;
pub mod data;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod io;
pub mod kkt;
pub mod linalg;
pub mod regimes;
mod serde_vec;
pub mod simplex;
pub mod smo;
pub mod synth;

pub use data::{direction_angle, directions_equivalent, Dataset, Label, LinearModel};
pub use error::{Error, Result};
