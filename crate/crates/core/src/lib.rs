//! Diffraction of diatomic molecular beams behind slits and gratings.
//!
//! The crate computes the center-of-mass marginal density of a two-body
//! molecule after an absorbing screen, to first order in the molecular
//! radius, for a harmonic interaction between the atoms. Every closed form
//! has a brute-force counterpart in [`oracle`].
//!
//! Units: lengths are in slit widths `L`, wavenumbers in `1/L`, masses in
//! atomic mass units. Densities carry no absolute normalization.
//!
//! The crate is `no_std` and needs only `alloc`; file formats, the CLI and
//! parallel grid evaluation live in the `mdiff` crate.

#![no_std]
#![forbid(unsafe_code)]
#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod error;
pub mod kernels;
pub mod molecule;
pub mod oracle;
pub mod pattern;
pub mod quad;
pub mod scenario;
pub mod specfun;

pub use error::{Error, Result};
pub use kernels::{EdgeGeometry, ModeWavenumber};
pub use molecule::{Cutoffs, HarmonicMolecule, InternalState, ModeWeight};
pub use pattern::{DensityModel, Severity, Warning};
pub use scenario::{Geometry, KernelChoice, Preset, Scenario};

/// Complex amplitude used throughout.
pub type ComplexValue = num_complex::Complex64;
