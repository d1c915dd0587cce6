//! Forecasting and simulation toolkit for measuring Newton's constant and the
//! cosmological constant with phonons in a Bose-Einstein condensate.
//!
//! The crate is organised bottom-up:
//!
//! - [`constants`]: CODATA values and the ⁸⁷Rb preset.
//! - [`lambda_gravity`]: the two-term potential of an oscillating source mass
//!   and the resonant acceleration amplitude it imprints on the cloud.
//! - [`bec_model`]: condensate scalars (density, speed of sound, healing
//!   length, mode frequencies, coupling) and regime validation.
//! - [`gaussian`]: a small Gaussian-state engine in the complex
//!   representation with the squeezer / tritter / encoding interferometer and
//!   the Gaussian quantum Fisher information.
//! - [`sensitivity`]: acceleration, G and Λ sensitivities, both from the
//!   closed form and through the Gaussian engine.
//! - [`experiment`]: seeded synthetic measurement campaigns and the linear
//!   least-squares fit for (G, Λ).
//! - [`config`] and [`report`]: the run-configuration format and CSV output
//!   used by the command line tool.

// `!(x > 0.0)` is used deliberately so that NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bec_model;
pub mod config;
pub mod constants;
pub mod error;
pub mod experiment;
pub mod gaussian;
pub mod lambda_gravity;
pub mod report;
pub mod sensitivity;

pub use error::{Error, Result};
