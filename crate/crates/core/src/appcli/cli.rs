//! `hirota` command line: generate, verify, compare, presets.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, CommandFactory, Parser, Subcommand};
use serde::Deserialize;

use crate::appcli::export::{self, RunManifest, Tolerances};
use crate::appcli::grid::{self, GridSpec};
use crate::appcli::presets::{self, Preset};
use crate::error::{Error, Result};
use crate::gdt::GdtOptions;
use crate::model::{PhaseReading, SeedParams};
use crate::verify::{self, PointStudy};

/// Tolerance of `compare --order 1`.
pub const FIRST_ORDER_TOL: f64 = 1e-9;
/// Tolerance of `compare --order 2`.
pub const SECOND_ORDER_TOL: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(name = "hirota", version, about = "Localized waves of the coupled Hirota equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a solution on a grid and write field.csv + manifest.toml.
    Generate(GenerateArgs),
    /// Run the residual refinement suite.
    Verify(VerifyArgs),
    /// Compare the Darboux engine with the closed-form solutions.
    Compare(CompareArgs),
    /// List the preset catalog.
    Presets,
}

#[derive(Debug, Args, Default)]
struct ParamArgs {
    /// Named parameter set (see `presets`).
    #[arg(long)]
    preset: Option<String>,
    /// Flat `key = value` file with keys d1, d2, eps, alpha, m1, n1, m2, n2, order.
    #[arg(long)]
    params: Option<PathBuf>,
    #[arg(long)]
    d1: Option<f64>,
    #[arg(long)]
    d2: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    m1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    n1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    m2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    n2: Option<f64>,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long)]
    order: Option<usize>,
    /// xmin,xmax,nx,tmin,tmax,nt
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<GridSpec>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Run directory written by `generate`.
    #[arg(long = "in", conflicts_with_all = ["preset", "params"])]
    input: Option<PathBuf>,
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long)]
    order: Option<usize>,
    /// Coarsest spacing of the refinement windows.
    #[arg(long, default_value_t = 0.01)]
    h0: f64,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    order: u8,
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<GridSpec>,
}

/// Keys of a parameter file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamFile {
    d1: Option<f64>,
    d2: Option<f64>,
    eps: Option<f64>,
    alpha: Option<f64>,
    m1: Option<f64>,
    n1: Option<f64>,
    m2: Option<f64>,
    n2: Option<f64>,
    order: Option<usize>,
}

pub fn read_param_file(path: &Path) -> Result<(SeedParams, Option<usize>)> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.into(), source })?;
    let f: ParamFile =
        toml::from_str(&text).map_err(|e| Error::Format { path: path.into(), message: e.to_string() })?;
    let base = SeedParams::new(f.d1.unwrap_or(1.0), f.d2.unwrap_or(0.0), f.eps.unwrap_or(0.01), f.alpha.unwrap_or(0.0));
    let p = apply_shifts(base, [f.m1, f.n1, f.m2, f.n2]);
    Ok((p, f.order))
}

/// Overrides `(m1, n1, m2, n2)` where given; shift pairs past the last
/// given one are dropped only if never set.
fn apply_shifts(mut p: SeedParams, mn: [Option<f64>; 4]) -> SeedParams {
    for k in 0..2 {
        let (m, n) = (mn[2 * k], mn[2 * k + 1]);
        if m.is_none() && n.is_none() {
            continue;
        }
        while p.s.len() <= k {
            p.s.push((0.0, 0.0));
        }
        if let Some(m) = m {
            p.s[k].0 = m;
        }
        if let Some(n) = n {
            p.s[k].1 = n;
        }
    }
    p
}

/// Parameters, order, grid and preset name resolved from the arguments.
struct Resolved {
    params: SeedParams,
    order: Option<usize>,
    grid: Option<GridSpec>,
    preset: Option<String>,
}

fn resolve(a: &ParamArgs) -> Result<Option<Resolved>> {
    let mut r: Option<Resolved> = None;
    if let Some(name) = &a.preset {
        let Preset { params, order, grid, name, .. } =
            presets::preset(name).ok_or_else(|| Error::UnknownPreset(name.clone()))?;
        r = Some(Resolved { params, order: Some(order), grid: Some(grid), preset: Some(name.into()) });
    }
    if let Some(path) = &a.params {
        let (params, order) = read_param_file(path)?;
        r = Some(Resolved { params, order, grid: None, preset: None });
    }
    let inline = [a.d1, a.d2, a.eps, a.alpha, a.m1, a.n1, a.m2, a.n2];
    if inline.iter().any(Option::is_some) {
        let mut base = r.unwrap_or(Resolved {
            params: SeedParams::new(1.0, 0.0, 0.01, 0.0),
            order: None,
            grid: None,
            preset: None,
        });
        let p = &mut base.params;
        p.d1 = a.d1.unwrap_or(p.d1);
        p.d2 = a.d2.unwrap_or(p.d2);
        p.eps = a.eps.unwrap_or(p.eps);
        p.alpha = a.alpha.unwrap_or(p.alpha);
        base.params = apply_shifts(base.params.clone(), [a.m1, a.n1, a.m2, a.n2]);
        base.preset = None;
        r = Some(base);
    }
    if let Some(r) = &r {
        r.params.validate()?;
    }
    Ok(r)
}

fn require(a: &ParamArgs) -> Result<Resolved> {
    resolve(a)?.ok_or_else(|| Error::InvalidParams("give --preset, --params or inline parameters".into()))
}

/// Entry point; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let outcome = match cli.command {
        Command::Generate(a) => generate(a),
        Command::Verify(a) => verify_cmd(a),
        Command::Compare(a) => compare(a),
        Command::Presets => {
            list_presets();
            Ok(true)
        }
    };
    match outcome {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, Error::UnknownPreset(_) | Error::InvalidParams(_) | Error::InvalidGrid(_)) {
                eprintln!("{}", Cli::command().render_usage());
                eprintln!("known presets: {}", names().join(", "));
                2
            } else {
                1
            }
        }
    }
}

fn names() -> Vec<&'static str> {
    presets::presets().iter().map(|p| p.name).collect()
}

fn list_presets() {
    println!("{:<6} {:>5} {:>5} {:>6} {:>8} {:>9} {:>5}  summary", "name", "d1", "d2", "eps", "alpha", "s1", "order");
    for p in presets::presets() {
        let s1 = p.params.s.first().map(|(m, n)| format!("{m}{n:+}i")).unwrap_or_else(|| "-".into());
        println!(
            "{:<6} {:>5} {:>5} {:>6} {:>8} {:>9} {:>5}  {}",
            p.name, p.params.d1, p.params.d2, p.params.eps, p.params.alpha, s1, p.order, p.summary
        );
    }
}

fn generate(a: GenerateArgs) -> Result<bool> {
    let r = require(&a.params)?;
    let order = a.order.or(r.order).unwrap_or(1);
    let gs = a.grid.or(r.grid).unwrap_or(GridSpec { xmin: -10.0, xmax: 10.0, nx: 201, tmin: -5.0, tmax: 5.0, nt: 101 });
    gs.validate()?;

    let start = Instant::now();
    let phase = verify::arbitrate_phase(&r.params)?;
    let reading = phase.selected.ok_or_else(|| {
        Error::InvalidParams(format!(
            "phase arbitration inconclusive (slopes {:.2} / {:.2})",
            phase.imaginary_slope, phase.real_slope
        ))
    })?;
    let opts = GdtOptions { reading, ..Default::default() };
    let fg = grid::evaluate_grid_with(&r.params, order, &gs, &opts)?;
    let manifest = RunManifest {
        preset: r.preset,
        order,
        engine_version: env!("CARGO_PKG_VERSION").into(),
        params: r.params,
        grid: gs,
        tolerances: Tolerances::for_order(order),
        phase,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
    };
    let (csv, man) = export::export(&fg, &manifest, &a.out)?;
    println!("wrote {} ({} rows) and {}", csv.display(), gs.len(), man.display());
    Ok(true)
}

fn print_study(s: &PointStudy) {
    println!("  window at (x, t) = ({:.4}, {:.4})", s.x, s.t);
    for r in &s.pde_reports {
        println!(
            "    field eqs  h = {:<10.3e} max = {:<10.3e} rms = {:<10.3e} (u: {:.3e}, v: {:.3e})",
            r.hx, r.max_abs, r.rms, r.per_equation[0], r.per_equation[1]
        );
    }
    let fmt = |v: &[f64]| v.iter().map(|s| format!("{s:.3}")).collect::<Vec<_>>().join(", ");
    println!("    field-equation slopes [{}]  {}", fmt(&s.pde.slopes), verdict(s.pde.passes()));
    println!(
        "    zero-curvature slopes [{}]  {}",
        fmt(&s.zero_curvature.slopes),
        verdict(s.zero_curvature.passes())
    );
}

fn verdict(ok: bool) -> &'static str {
    if ok { "ok" } else { "FAIL" }
}

fn verify_cmd(a: VerifyArgs) -> Result<bool> {
    let (params, order, probes) = if let Some(dir) = &a.input {
        let (fg, man) = export::import(dir)?;
        let gs = &fg.spec;
        let abs = fg.abs_u();
        let k = (0..abs.len()).max_by(|&i, &j| abs[i].total_cmp(&abs[j])).unwrap_or(0);
        let peak = (gs.x(k / gs.nt), gs.t(k % gs.nt));
        let centre = ((gs.xmin + gs.xmax) / 2.0, (gs.tmin + gs.tmax) / 2.0);
        let single = verify::pde_residual(gs, &fg.u, &fg.v, fg.params.eps)?;
        println!(
            "stored grid: h = ({:.3e}, {:.3e}) max = {:.3e} rms = {:.3e}",
            single.hx, single.ht, single.max_abs, single.rms
        );
        (fg.params, a.order.unwrap_or(man.order), vec![peak, centre])
    } else {
        let r = require(&a.params)?;
        let order = a.order.or(r.order).unwrap_or(1);
        (r.params, order, vec![(0.0, 0.0), (1.0, 0.5)])
    };
    let phase = verify::arbitrate_phase(&params)?;
    println!(
        "phase arbitration: imaginary slope {:.3}, real slope {:.3}, selected {:?}",
        phase.imaginary_slope, phase.real_slope, phase.selected
    );
    let mut ok = phase.selected == Some(PhaseReading::Imaginary);
    println!("order {order}, {params:?}");
    for (x, t) in probes {
        let s = verify::engine_point_study(&params, order, x, t, a.h0)?;
        print_study(&s);
        ok &= s.passes();
    }
    println!("{}", if ok { "PASS" } else { "FAIL" });
    Ok(ok)
}

fn compare(a: CompareArgs) -> Result<bool> {
    let resolved = resolve(&a.params)?;
    let mut ok = true;
    if a.order == 1 {
        let gs = a.grid.unwrap_or(GridSpec { xmin: -10.0, xmax: 10.0, nx: 101, tmin: -5.0, tmax: 5.0, nt: 101 });
        let cases: Vec<(String, SeedParams)> = match resolved {
            Some(r) => vec![(r.preset.unwrap_or_else(|| "custom".into()), r.params)],
            None => ["fig1", "fig5", "fig6"]
                .iter()
                .filter_map(|n| presets::preset(n).map(|p| (n.to_string(), p.params)))
                .collect(),
        };
        for (name, p) in cases {
            let err = verify::compare_first_order(&p, &gs)?;
            let pass = err <= FIRST_ORDER_TOL;
            ok &= pass;
            println!("order 1 {name:<8} max rel err {err:.3e} (tol {FIRST_ORDER_TOL:e})  {}", verdict(pass));
        }
    } else {
        let gs = a.grid.unwrap_or(GridSpec { xmin: -10.0, xmax: 10.0, nx: 41, tmin: -5.0, tmax: 5.0, nt: 41 });
        let cases: Vec<(f64, f64, f64)> = match resolved {
            Some(r) => {
                let p = r.params;
                if p.d1 != 1.0 || p.d2 != 1.5 || p.alpha != 0.0 || p.s.len() > 1 {
                    return Err(Error::InvalidParams(
                        "the second-order closed form needs d1 = 1, d2 = 1.5, alpha = 0 and at most (m1, n1)".into(),
                    ));
                }
                let (m, n) = p.s.first().copied().unwrap_or((0.0, 0.0));
                vec![(p.eps, m, n)]
            }
            None => vec![(0.01, 0.0, 0.0), (0.01, 10.0, 0.0), (0.01, 0.0, 10.0)],
        };
        for (eps, m, n) in cases {
            let err = verify::compare_second_order(eps, m, n, &gs)?;
            let pass = err <= SECOND_ORDER_TOL;
            ok &= pass;
            println!(
                "order 2 eps={eps} m1={m} n1={n}  max rel err {err:.3e} (tol {SECOND_ORDER_TOL:e})  {}",
                verdict(pass)
            );
        }
    }
    Ok(ok)
}
