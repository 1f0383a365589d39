//! Parameter sets that reproduce the published figure families.

use crate::appcli::grid::GridSpec;
use crate::model::SeedParams;

#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub params: SeedParams,
    pub order: usize,
    pub grid: GridSpec,
    pub summary: &'static str,
}

const EPS: f64 = 0.01;

/// Frames dark-bright soliton collisions, including slices at `t = +-20`.
const SOLITON_GRID: GridSpec = GridSpec { xmin: -20.0, xmax: 20.0, nx: 401, tmin: -25.0, tmax: 25.0, nt: 501 };
/// Frames merged or rogue structures near the origin.
const ROGUE_GRID: GridSpec = GridSpec { xmin: -10.0, xmax: 10.0, nx: 201, tmin: -5.0, tmax: 5.0, nt: 101 };

fn entry(
    name: &'static str,
    (d1, d2, alpha): (f64, f64, f64),
    shift: Option<(f64, f64)>,
    order: usize,
    grid: GridSpec,
    summary: &'static str,
) -> Preset {
    let mut params = SeedParams::new(d1, d2, EPS, alpha);
    if let Some(s) = shift {
        params.s = vec![s];
    }
    Preset { name, params, order, grid, summary }
}

/// The catalog, in figure order.
pub fn presets() -> Vec<Preset> {
    let zero = Some((0.0, 0.0));
    vec![
        entry("fig1", (1.0, 0.0, 10.0), None, 1, SOLITON_GRID, "dark-bright soliton merged with a rogue wave"),
        entry("fig4", (1.0, 0.0, 0.1), None, 1, SOLITON_GRID, "dark-bright soliton separating from a rogue wave"),
        entry("fig5", (1.0, 1.0, 1.0), None, 1, ROGUE_GRID, "Akhmediev breather merged with a rogue wave"),
        entry("fig6", (1.0, 1.0, 0.01), None, 1, ROGUE_GRID, "breather separating from a rogue wave"),
        entry("fig7", (1.0, 0.0, 1.0), zero, 2, ROGUE_GRID, "two dark-bright solitons merged with a second-order rogue wave"),
        entry("fig10", (1.0, 0.0, 1e-4), zero, 2, ROGUE_GRID, "two dark-bright solitons separated from a second-order rogue wave"),
        entry("fig11", (1.0, 0.0, 1e-4), Some((10.0, 0.0)), 2, ROGUE_GRID, "second-order rogue wave split into a triangle"),
        entry("fig12", (1.0, 1.0, 10.0), zero, 2, ROGUE_GRID, "two breathers merged with a second-order rogue wave"),
        entry("fig13", (1.0, 1.0, 1e-4), zero, 2, ROGUE_GRID, "two breathers separated from a second-order rogue wave"),
        entry("fig14", (1.0, 1.0, 1e-4), Some((10.0, 0.0)), 2, ROGUE_GRID, "breathers with a triangular second-order rogue wave"),
    ]
}

pub fn preset(name: &str) -> Option<Preset> {
    presets().into_iter().find(|p| p.name == name)
}
