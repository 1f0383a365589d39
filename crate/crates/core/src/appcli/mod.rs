//! Grid driver, preset catalog, export and command line.

pub mod cli;
pub mod export;
pub mod grid;
pub mod presets;

pub use grid::{evaluate_grid, evaluate_grid_serial, FieldGrid, GridSpec};
pub use presets::{preset, presets, Preset};
