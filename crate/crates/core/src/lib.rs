//! Finite element solution of the damped 1-D wave equation and proper
//! orthogonal decomposition (POD) reduced-order models built from snapshots
//! or from their first and second difference quotients.

mod error;
pub mod fem1d;
pub mod numerics;
pub mod pod;
pub mod rom;
pub mod wave;

pub use error::{Error, Result};
