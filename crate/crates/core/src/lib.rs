//! Stress-relaxation fields of a finite rod with a distributed-order fractional
//! constitutive law, obtained by inverting Laplace-domain solutions through a
//! branch-cut integral plus a residue series over the complex poles.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, the CLI and
//! parallel grid evaluation live in the `rodwave` companion crate.

#![no_std]

extern crate alloc;

pub mod error;
pub mod fields;
pub mod forcing;
pub mod kernel;
mod math;
pub mod oracle;
pub mod poles;
pub mod quadrature;

pub use error::{Error, Result};
pub use fields::{Field, FieldGrid, FieldSample, GridSpec, SolverConfig, TimeAxis};
pub use forcing::{ForcingKind, ForcingSpec};
pub use kernel::{CutPlanePoint, CutSide, MaterialParams, TransferValue};
pub use poles::{Pole, PoleSet, RootConfig};
pub use quadrature::{CutWeight, IntegralResult, QuadratureConfig};
