//! CSV field dumps with a TOML run manifest beside them.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::appcli::grid::{FieldGrid, GridSpec};
use crate::error::{Error, Result};
use crate::gdt;
use crate::model::SeedParams;
use crate::verify::PhaseArbitration;
use crate::numerics::Complex;

pub const CSV_HEADER: [&str; 8] = ["x", "t", "re_u", "im_u", "re_v", "im_v", "abs_u", "abs_v"];
pub const FIELD_FILE: &str = "field.csv";
pub const MANIFEST_FILE: &str = "manifest.toml";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub kernel: f64,
    pub odd_coefficients: f64,
    /// Truncation order of the seed series in `f`.
    pub truncation: i32,
}

impl Tolerances {
    pub fn for_order(order: usize) -> Self {
        Tolerances { kernel: gdt::KERNEL_TOL, odd_coefficients: gdt::ODD_TOL, truncation: gdt::truncation_order(order) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    pub order: usize,
    pub engine_version: String,
    pub params: SeedParams,
    pub grid: GridSpec,
    pub tolerances: Tolerances,
    pub phase: PhaseArbitration,
    pub wall_clock_seconds: f64,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io { path: path.to_path_buf(), source }
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    Error::Format { path: path.to_path_buf(), message: e.to_string() }
}

/// Writes `field.csv` and `manifest.toml` into `dir`, creating it if needed.
pub fn export(fg: &FieldGrid, manifest: &RunManifest, dir: &Path) -> Result<(PathBuf, PathBuf)> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let csv_path = dir.join(FIELD_FILE);
    write_csv(fg, &csv_path)?;
    let man_path = dir.join(MANIFEST_FILE);
    let text = toml::to_string_pretty(manifest)
        .map_err(|e| Error::Format { path: man_path.clone(), message: e.to_string() })?;
    fs::write(&man_path, text).map_err(io_err(&man_path))?;
    Ok((csv_path, man_path))
}

pub fn write_csv(fg: &FieldGrid, path: &Path) -> Result<()> {
    let file = fs::File::create(path).map_err(io_err(path))?;
    let mut w = csv::Writer::from_writer(std::io::BufWriter::new(file));
    w.write_record(CSV_HEADER).map_err(|e| csv_err(path, e))?;
    let gs = &fg.spec;
    for (i, j) in gs.points() {
        let (u, v) = (fg.u_at(i, j), fg.v_at(i, j));
        let row = [gs.x(i), gs.t(j), u.re, u.im, v.re, v.im, u.norm(), v.norm()];
        w.write_record(row.iter().map(|x| format!("{x:.16e}"))).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(io_err(path))?;
    Ok(())
}

pub fn read_manifest(path: &Path) -> Result<RunManifest> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    toml::from_str(&text).map_err(|e| Error::Format { path: path.to_path_buf(), message: e.to_string() })
}

/// Reads back a run directory written by [`export`].
pub fn import(dir: &Path) -> Result<(FieldGrid, RunManifest)> {
    let manifest = read_manifest(&dir.join(MANIFEST_FILE))?;
    let path = dir.join(FIELD_FILE);
    let mut r = csv::Reader::from_path(&path).map_err(|e| csv_err(&path, e))?;
    let header = r.headers().map_err(|e| csv_err(&path, e))?;
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::Format { path, message: format!("unexpected header {header:?}") });
    }
    let gs = manifest.grid;
    let (mut u, mut v) = (Vec::with_capacity(gs.len()), Vec::with_capacity(gs.len()));
    for rec in r.records() {
        let rec = rec.map_err(|e| csv_err(&path, e))?;
        let vals: Vec<f64> = rec
            .iter()
            .map(|s| s.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Format { path: path.clone(), message: e.to_string() })?;
        if vals.len() != CSV_HEADER.len() {
            return Err(Error::Format { path, message: format!("row with {} fields", vals.len()) });
        }
        u.push(Complex::new(vals[2], vals[3]));
        v.push(Complex::new(vals[4], vals[5]));
    }
    if u.len() != gs.len() {
        return Err(Error::Format { path, message: format!("{} rows for a {}x{} grid", u.len(), gs.nx, gs.nt) });
    }
    let fg = FieldGrid { spec: gs, u, v, params: manifest.params.clone(), order: manifest.order };
    Ok((fg, manifest))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::appcli::grid::evaluate_grid;
    use crate::model::PhaseReading;

    fn sample() -> (FieldGrid, RunManifest) {
        let p = SeedParams::new(1.0, 0.0, 0.01, 10.0);
        let gs = GridSpec::new(-2.0, 2.0, 5, -1.0, 1.0, 4).unwrap();
        let fg = evaluate_grid(&p, 1, &gs).unwrap();
        let manifest = RunManifest {
            preset: Some("fig1".into()),
            order: 1,
            engine_version: env!("CARGO_PKG_VERSION").into(),
            params: p,
            grid: gs,
            tolerances: Tolerances::for_order(1),
            phase: PhaseArbitration { selected: Some(PhaseReading::Imaginary), imaginary_slope: 2.0, real_slope: 0.0 },
            wall_clock_seconds: 0.25,
        };
        (fg, manifest)
    }

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let (fg, manifest) = sample();
        export(&fg, &manifest, dir.path()).unwrap();
        let (back, man) = import(dir.path()).unwrap();
        assert_eq!(man, manifest);
        for (a, b) in fg.abs_u().iter().zip(back.abs_u()) {
            assert!((a - b).abs() <= 1e-15 * a.max(1.0));
        }
        let text = fs::read_to_string(dir.path().join(FIELD_FILE)).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), fg.spec.len() + 1);
        assert_eq!(lines[0], "x,t,re_u,im_u,re_v,im_v,abs_u,abs_v");
        assert!(lines[1].starts_with("-2.0000000000000000e0,-1.0000000000000000e0,"));
        // t varies fastest
        assert!(lines[2].starts_with("-2.0000000000000000e0,-3.3333333333333337e-1,"));
        let man_text = fs::read_to_string(dir.path().join(MANIFEST_FILE)).unwrap();
        assert!(man_text.contains("selected = \"imaginary\""));
    }

    #[test]
    fn missing_directory_names_the_path() {
        let err = import(Path::new("/nonexistent/run")).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/run"));
    }
}
