//! Open-system simulation of dissipative GHZ-state preparation in registers
//! of Rydberg atoms.
//!
//! Two protocols are modeled:
//!
//! * [`scheme1`]: polychromatic drives plus engineered decay through a
//!   short-lived level, for rings of 3 or 5 atoms;
//! * [`scheme2`]: switched unconventional Rydberg pumping together with a
//!   continuously active antiblockade channel, for 3 four-level atoms.
//!
//! Both come as a full model and an effective (adiabatically reduced) model.
//! [`lindblad`] integrates either; [`scenario`] wraps them in configuration
//! files, named presets and CSV output.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod lindblad;
pub mod matrix;
pub mod ops;
pub mod scenario;
pub mod scheme1;
pub mod scheme2;

pub use error::{Error, Result};
pub use lindblad::{
    integrate, Envelope, HTerm, IntegrateOptions, MasterEq, Observable, Schedule, TimeSeries, Trajectory,
};
pub use matrix::CMatrix;
pub use num_complex::Complex64 as C64;
pub use ops::LevelScheme;
