//! Riesz-fractional Schrödinger equation tools: fractional operators on
//! grids, the similarity reduction and its residual checks, and the
//! similarity profile computed from its Fourier-space closed form.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod figure;
pub mod fracops;
pub mod grid;
pub mod io;
pub mod profile;
pub mod similarity;
pub mod window;

pub use error::{Error, Result};
pub use grid::{ComplexField, Grid1D};
pub use profile::{evaluate_profile, refine_profile, Profile, ProfileSpec, QuadratureControls};
pub use similarity::PdeParams;
