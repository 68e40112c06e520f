//! Capacity-distortion bounds for state-dependent relay channels in which the
//! destination both decodes a message and estimates a channel state.

pub mod bounds;
pub mod channel;
pub mod error;
pub mod estimator;
pub mod montecarlo;
pub mod optimizer;
pub mod prob;
pub mod verify;

pub use error::{Error, Result};
