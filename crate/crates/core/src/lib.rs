//! Restoration of aliasing artifacts seen through tilted lenticular lens
//! arrays, on grayscale images.
//!
//! Two restoration paths are provided:
//!
//! * [`notch`] keeps a narrow wedge of spectral orientations around the
//!   stroke ridge and discards the rest;
//! * [`degrade`] estimates a per-bin magnitude ratio from a clean/degraded
//!   pair and uses it for inverse or Wiener-radial restoration.
//!
//! [`synth`] generates the line charts and the slice-and-shift forward model
//! used to evaluate both.

// negated comparisons below are how parameter checks reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod degrade;
pub mod error;
pub mod notch;
pub mod preprocess;
pub mod raster;
pub mod spectral;
pub mod synth;

pub use error::{Error, Result};
pub use raster::{GrayImage, RealField};
pub use spectral::Spectrum;
