//! Localized-wave solutions of the coupled Hirota equations by the
//! generalized Darboux transformation, with independent verification.
//!
//! Layers, bottom up: [`numerics`] (complex scalars, Laurent jets, 3x3
//! kernels), [`model`] (seed, Lax pair, spectral seed), [`gdt`] (the Darboux
//! engine), [`oracles`] (closed-form solutions), [`verify`] (residuals and
//! phenomenology metrics) and [`appcli`] (grids, presets, export, CLI).

pub mod appcli;
pub mod error;
pub mod gdt;
pub mod model;
pub mod oracles;
pub mod verify;
pub mod numerics;

pub use error::{Error, Result};
