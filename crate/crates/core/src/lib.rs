//! Composite pulse sequences for systematic single-qubit control errors.
//!
//! The crate builds the π/3 correction sequence and its concatenations,
//! the B2 (BB1) and B4 sequences, and the π/5 variant; simulates them under
//! systematic over-rotation and vector error models in double or extended
//! precision; tracks leading error orders with min-plus rules; and verifies
//! those orders numerically by log-log fits and finite-difference series
//! coefficients.

pub mod analysis;
pub mod error;
pub mod error_models;
pub mod order;
pub mod par;
pub mod registry;
pub mod scalar;
pub mod sequences;
pub mod su2;

pub use error::{Error, Result};
pub use error_models::{ErrorModel, FrameTriad, Noise};
pub use scalar::{Ext, Real};
pub use sequences::{Channel, Gate, PiAngle, Pulse, PulseSequence, Role};
pub use su2::{AxisAngle, ErrorVector, Unitary, Vec3};
