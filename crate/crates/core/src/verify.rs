//! Finite-difference residuals of the field equations and of the Lax pair,
//! refinement studies, and phenomenology metrics (peaks, soliton tracking).
//!
//! Stencils are second-order central: `u_x`, `u_xx`, `u_t` on three points and
//! `u_xxx` as `(-1/2, 1, 0, -1, 1/2) / h^3` on five. Residual norms are only
//! meaningful through their decay under refinement.

use serde::{Deserialize, Serialize};

use crate::appcli::grid::GridSpec;
use crate::error::{Error, Result};
use crate::model::{self, Branch, LaxInput, PhaseReading, SeedParams};
use crate::numerics::{CMat3, CVec3, Complex, I};

/// Slope every pair of successive refinements must reach.
pub const MIN_SLOPE: f64 = 1.8;
pub const STENCIL_ORDER: u32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub max_abs: f64,
    pub rms: f64,
    pub hx: f64,
    pub ht: f64,
    pub stencil_order: u32,
    /// Max-norm of each of the two component equations.
    pub per_equation: [f64; 2],
    pub points: usize,
}

#[derive(Default)]
struct Accum {
    max: f64,
    sum_sq: f64,
    count: usize,
    per: [f64; 2],
}

impl Accum {
    fn push(&mut self, a: f64, b: f64) {
        let m = a.max(b);
        self.max = self.max.max(m);
        self.sum_sq += m * m;
        self.count += 1;
        self.per[0] = self.per[0].max(a);
        self.per[1] = self.per[1].max(b);
    }

    fn report(self, gs: &GridSpec) -> ResidualReport {
        ResidualReport {
            max_abs: self.max,
            rms: (self.sum_sq / self.count.max(1) as f64).sqrt(),
            hx: gs.hx(),
            ht: gs.ht(),
            stencil_order: STENCIL_ORDER,
            per_equation: self.per,
            points: self.count,
        }
    }
}

fn check_size(gs: &GridSpec, need_x: usize, need_t: usize) -> Result<()> {
    gs.validate()?;
    if gs.nx < need_x || gs.nt < need_t {
        return Err(Error::GridTooSmall { nx: gs.nx, nt: gs.nt, need_x, need_t });
    }
    Ok(())
}

fn check_len(gs: &GridSpec, f: &[Complex]) -> Result<()> {
    if f.len() != gs.len() {
        return Err(Error::InvalidGrid(format!("field has {} values, grid has {}", f.len(), gs.len())));
    }
    Ok(())
}

/// Central x-derivatives of a gridded field.
struct XDerivs<'a> {
    gs: &'a GridSpec,
    f: &'a [Complex],
}

impl XDerivs<'_> {
    fn at(&self, i: usize, j: usize) -> Complex {
        self.f[self.gs.idx(i, j)]
    }
    fn dx(&self, i: usize, j: usize) -> Complex {
        (self.at(i + 1, j) - self.at(i - 1, j)) / (2.0 * self.gs.hx())
    }
    fn dxx(&self, i: usize, j: usize) -> Complex {
        let h = self.gs.hx();
        (self.at(i + 1, j) - self.at(i, j) * 2.0 + self.at(i - 1, j)) / (h * h)
    }
    fn dxxx(&self, i: usize, j: usize) -> Complex {
        let h = self.gs.hx();
        (self.at(i + 2, j) * 0.5 - self.at(i + 1, j) + self.at(i - 1, j) - self.at(i - 2, j) * 0.5)
            / (h * h * h)
    }
    fn dt(&self, i: usize, j: usize) -> Complex {
        (self.at(i, j + 1) - self.at(i, j - 1)) / (2.0 * self.gs.ht())
    }
}

/// Residuals of both field equations on interior points.
pub fn pde_residual(gs: &GridSpec, u: &[Complex], v: &[Complex], eps: f64) -> Result<ResidualReport> {
    check_size(gs, 7, 3)?;
    check_len(gs, u)?;
    check_len(gs, v)?;
    let (du, dv) = (XDerivs { gs, f: u }, XDerivs { gs, f: v });
    let mut acc = Accum::default();
    for i in 2..gs.nx - 2 {
        for j in 1..gs.nt - 1 {
            let (a, b) = (du.at(i, j), dv.at(i, j));
            let (a2, b2) = (a.norm_sqr(), b.norm_sqr());
            let (ax, bx) = (du.dx(i, j), dv.dx(i, j));
            let r1 = I * du.dt(i, j) + du.dxx(i, j) * 0.5 + a * (a2 + b2)
                + I * eps * (du.dxxx(i, j) + ax * (6.0 * a2 + 3.0 * b2) + a * b.conj() * bx * 3.0);
            let r2 = I * dv.dt(i, j) + dv.dxx(i, j) * 0.5 + b * (a2 + b2)
                + I * eps * (dv.dxxx(i, j) + bx * (6.0 * b2 + 3.0 * a2) + b * a.conj() * ax * 3.0);
            acc.push(r1.norm(), r2.norm());
        }
    }
    Ok(acc.report(gs))
}

/// Max-entry norm of `U_t - V_x + UV - VU` on interior points, with every
/// derivative of the potentials taken from the grid.
pub fn zero_curvature_residual(
    p: &SeedParams,
    gs: &GridSpec,
    u: &[Complex],
    v: &[Complex],
    zeta: Complex,
) -> Result<ResidualReport> {
    check_size(gs, 7, 3)?;
    check_len(gs, u)?;
    check_len(gs, v)?;
    let eps = p.eps;
    let (du, dv) = (XDerivs { gs, f: u }, XDerivs { gs, f: v });
    let lax_in = |i: usize, j: usize| LaxInput {
        u: du.at(i, j),
        v: dv.at(i, j),
        u_x: du.dx(i, j),
        v_x: dv.dx(i, j),
        u_xx: du.dxx(i, j),
        v_xx: dv.dxx(i, j),
    };
    let lax_u = |i: usize, j: usize| model::lax_u(du.at(i, j), dv.at(i, j), zeta, eps);
    let mut acc = Accum::default();
    for i in 2..gs.nx - 2 {
        for j in 1..gs.nt - 1 {
            let ut = (lax_u(i, j + 1) - lax_u(i, j - 1)).scale(Complex::new(0.5 / gs.ht(), 0.0));
            let vx = (model::lax_v(&lax_in(i + 1, j), zeta, eps) - model::lax_v(&lax_in(i - 1, j), zeta, eps))
                .scale(Complex::new(0.5 / gs.hx(), 0.0));
            let (um, vm) = (lax_u(i, j), model::lax_v(&lax_in(i, j), zeta, eps));
            acc.push_matrix(&(ut - vx + um * vm - vm * um));
        }
    }
    Ok(acc.report(gs))
}

impl Accum {
    /// The (1,2) and (1,3) entries carry the two field equations.
    fn push_matrix(&mut self, r: &CMat3) {
        let m = r.max_abs();
        let (a, b) = (r[(0, 1)].norm(), r[(0, 2)].norm());
        self.max = self.max.max(m);
        self.sum_sq += m * m;
        self.count += 1;
        self.per[0] = self.per[0].max(a);
        self.per[1] = self.per[1].max(b);
    }
}

/// Options for [`lax_ode_residual`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaxOdeOptions {
    pub reading: PhaseReading,
    pub branch: Branch,
    /// Multiplies the spectral value used in `U`, `V` (1 for the honest test).
    pub lax_zeta_factor: f64,
}

impl Default for LaxOdeOptions {
    fn default() -> Self {
        LaxOdeOptions { reading: PhaseReading::Imaginary, branch: Branch::Full, lax_zeta_factor: 1.0 }
    }
}

/// Residuals of `Phi_x = U Phi` and `Phi_t = V Phi` for the seed
/// eigenfunction at `zeta = zeta1 (1 + f0^2)`; equation slots are the x- and
/// t-parts, each relative to the largest `|Phi|` on the grid.
pub fn lax_ode_residual(p: &SeedParams, f0: f64, gs: &GridSpec, opts: &LaxOdeOptions) -> Result<ResidualReport> {
    check_size(gs, 3, 3)?;
    p.validate()?;
    let zeta = model::zeta1(p) * (1.0 + f0 * f0);
    let lax_zeta = zeta * opts.lax_zeta_factor;
    let phi: Vec<CVec3> = gs
        .points()
        .map(|(i, j)| model::eigenfunction(p, zeta, gs.x(i), gs.t(j), opts.reading, opts.branch))
        .collect();
    let scale = phi.iter().map(CVec3::max_abs).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let at = |i: usize, j: usize| phi[gs.idx(i, j)];
    let mut acc = Accum::default();
    for i in 1..gs.nx - 1 {
        for j in 1..gs.nt - 1 {
            let (x, t) = (gs.x(i), gs.t(j));
            let (u, v) = model::seed_potentials(p, x, t);
            let here = at(i, j);
            let phx = (at(i + 1, j) - at(i - 1, j)).scale(Complex::new(0.5 / gs.hx(), 0.0));
            let pht = (at(i, j + 1) - at(i, j - 1)).scale(Complex::new(0.5 / gs.ht(), 0.0));
            let rx = phx - model::lax_u(u, v, lax_zeta, p.eps) * here;
            let rt = pht - model::lax_v(&LaxInput::flat(u, v), lax_zeta, p.eps) * here;
            acc.push(rx.max_abs() / scale, rt.max_abs() / scale);
        }
    }
    Ok(acc.report(gs))
}

/// Observed convergence order across successively refined grids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceStudy {
    pub spacings: Vec<f64>,
    pub max_abs: Vec<f64>,
    /// Slope between each successive pair.
    pub slopes: Vec<f64>,
    pub min_slope: f64,
}

impl ConvergenceStudy {
    pub fn passes(&self) -> bool {
        self.min_slope >= MIN_SLOPE
    }
}

/// Richardson slopes `log(r_a / r_b) / log(h_a / h_b)` of `max_abs`.
pub fn convergence_study(reports: &[ResidualReport]) -> ConvergenceStudy {
    let spacings: Vec<f64> = reports.iter().map(|r| r.hx).collect();
    let max_abs: Vec<f64> = reports.iter().map(|r| r.max_abs).collect();
    let slopes: Vec<f64> = reports
        .windows(2)
        .map(|w| (w[0].max_abs / w[1].max_abs).ln() / (w[0].hx / w[1].hx).ln())
        .map(|s| if s.is_nan() { f64::NEG_INFINITY } else { s })
        .collect();
    let min_slope = slopes.iter().copied().fold(f64::INFINITY, f64::min);
    ConvergenceStudy { spacings, max_abs, slopes, min_slope }
}

/// A local maximum of a modulus field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub x: f64,
    pub t: f64,
    pub height: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PeakSet {
    /// Sorted by decreasing height.
    pub peaks: Vec<Peak>,
    pub threshold: f64,
    pub radius: (f64, f64),
}

impl PeakSet {
    pub fn len(&self) -> usize {
        self.peaks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.peaks.is_empty()
    }

    pub fn highest(&self) -> Option<&Peak> {
        self.peaks.first()
    }
}

/// Strict interior local maxima above `threshold`, kept greedily from the
/// highest down; a candidate within the `(rx, rt)` ellipse of an accepted
/// peak is dropped.
pub fn peak_metrics(gs: &GridSpec, field: &[f64], threshold: f64, radius: (f64, f64)) -> PeakSet {
    let at = |i: usize, j: usize| field[gs.idx(i, j)];
    let mut cands = Vec::new();
    if gs.nx >= 3 && gs.nt >= 3 && field.len() == gs.len() {
        for i in 1..gs.nx - 1 {
            for j in 1..gs.nt - 1 {
                let h = at(i, j);
                if !(h > threshold) {
                    continue;
                }
                let strict = (i - 1..=i + 1)
                    .flat_map(|a| (j - 1..=j + 1).map(move |b| (a, b)))
                    .filter(|&(a, b)| (a, b) != (i, j))
                    .all(|(a, b)| at(a, b) < h);
                if strict {
                    cands.push(Peak { x: gs.x(i), t: gs.t(j), height: h });
                }
            }
        }
    }
    cands.sort_by(|a, b| {
        b.height
            .total_cmp(&a.height)
            .then(a.x.total_cmp(&b.x))
            .then(a.t.total_cmp(&b.t))
    });
    let mut peaks: Vec<Peak> = Vec::new();
    for c in cands {
        let clear = peaks.iter().all(|q| {
            let (dx, dt) = ((c.x - q.x) / radius.0, (c.t - q.t) / radius.1);
            dx * dx + dt * dt >= 1.0
        });
        if clear {
            peaks.push(c);
        }
    }
    PeakSet { peaks, threshold, radius }
}

/// One time slice of a modulus field.
#[derive(Debug, Clone, PartialEq)]
pub struct Slice {
    pub t: f64,
    pub x: Vec<f64>,
    pub value: Vec<f64>,
}

impl Slice {
    pub fn sample(t: f64, xmin: f64, xmax: f64, n: usize, f: impl Fn(f64) -> f64) -> Self {
        let h = (xmax - xmin) / (n - 1) as f64;
        let x: Vec<f64> = (0..n).map(|i| xmin + i as f64 * h).collect();
        let value = x.iter().map(|&x| f(x)).collect();
        Slice { t, x, value }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolitonKind {
    Dark,
    Bright,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolitonMetrics {
    pub kind: SolitonKind,
    /// `|extremum - background|`
    pub depth: f64,
    pub position: f64,
    pub velocity: f64,
    pub t: f64,
}

/// Minimum `|extremum - background|` accepted as a soliton, relative to
/// `max(background, 1)`.
pub const PROMINENCE: f64 = 0.05;

fn locate(slice: &Slice, background: f64) -> Result<(SolitonKind, f64, f64)> {
    let prominence = PROMINENCE * background.max(1.0);
    let dev: Vec<f64> = slice.value.iter().map(|v| v - background).collect();
    let (k, d) = dev
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .map(|(k, d)| (k, *d))
        .ok_or(Error::NoSoliton { deviation: 0.0, prominence })?;
    if !(d.abs() > prominence) {
        return Err(Error::NoSoliton { deviation: d.abs(), prominence });
    }
    let kind = if d < 0.0 { SolitonKind::Dark } else { SolitonKind::Bright };
    // parabolic refinement through the extremum and its neighbours
    let (mut pos, mut ext) = (slice.x[k], d.abs());
    if k > 0 && k + 1 < dev.len() {
        let (a, b, c) = (dev[k - 1].abs(), dev[k].abs(), dev[k + 1].abs());
        let denom = a - 2.0 * b + c;
        if denom < 0.0 {
            let off = 0.5 * (a - c) / denom;
            let h = slice.x[k + 1] - slice.x[k];
            pos += off * h;
            ext = b - 0.25 * (a - c) * off;
        }
    }
    Ok((kind, ext, pos))
}

/// Dominant dip or crest of two slices on the same side of a collision;
/// both metrics carry the velocity between them.
pub fn soliton_metrics(a: &Slice, b: &Slice, background: f64) -> Result<(SolitonMetrics, SolitonMetrics)> {
    let (ka, da, pa) = locate(a, background)?;
    let (kb, db, pb) = locate(b, background)?;
    let velocity = (pb - pa) / (b.t - a.t);
    Ok((
        SolitonMetrics { kind: ka, depth: da, position: pa, velocity, t: a.t },
        SolitonMetrics { kind: kb, depth: db, position: pb, velocity, t: b.t },
    ))
}

/// Outcome of the phase-reading experiment on the seed eigenfunction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseArbitration {
    /// The reading whose Lax residual converges, when exactly one does.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub selected: Option<PhaseReading>,
    pub imaginary_slope: f64,
    pub real_slope: f64,
}

/// Spectral offset and window used by [`arbitrate_phase`].
pub const ARBITRATION_F0: f64 = 1e-2;
pub const ARBITRATION_H: f64 = 0.02;

/// Runs the Lax residual refinement for both phase readings around the
/// origin and keeps the one that converges.
pub fn arbitrate_phase(p: &SeedParams) -> Result<PhaseArbitration> {
    let slope = |reading| -> Result<f64> {
        let opts = LaxOdeOptions { reading, ..Default::default() };
        let reports = refine(ARBITRATION_H, |h| {
            lax_ode_residual(p, ARBITRATION_F0, &GridSpec::centered(0.3, 0.2, h, h, 5), &opts)
        })?;
        Ok(convergence_study(&reports).min_slope)
    };
    let imaginary_slope = slope(PhaseReading::Imaginary)?;
    let real_slope = slope(PhaseReading::Real)?;
    let selected = match (imaginary_slope >= MIN_SLOPE, real_slope >= MIN_SLOPE) {
        (true, false) => Some(PhaseReading::Imaginary),
        (false, true) => Some(PhaseReading::Real),
        _ => None,
    };
    Ok(PhaseArbitration { selected, imaginary_slope, real_slope })
}

/// Reports at spacings `h0`, `h0 / 2`, `h0 / 4`.
pub fn refine<F>(h0: f64, f: F) -> Result<Vec<ResidualReport>>
where
    F: Fn(f64) -> Result<ResidualReport>,
{
    [h0, h0 / 2.0, h0 / 4.0].into_iter().map(f).collect()
}

/// Field-equation and zero-curvature refinement studies of the engine
/// output on windows centred at one point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointStudy {
    pub x: f64,
    pub t: f64,
    pub pde: ConvergenceStudy,
    pub zero_curvature: ConvergenceStudy,
    pub pde_reports: Vec<ResidualReport>,
}

impl PointStudy {
    pub fn passes(&self) -> bool {
        self.pde.passes() && self.zero_curvature.passes()
    }
}

/// Half-width, in points, of the refinement windows.
pub const WINDOW_HALF: usize = 5;

pub fn engine_point_study(p: &SeedParams, order: usize, x: f64, t: f64, h0: f64) -> Result<PointStudy> {
    let zeta = model::zeta1(p) * Complex::new(1.0, 0.5);
    let mut pde_reports = Vec::new();
    let mut zc_reports = Vec::new();
    for h in [h0, h0 / 2.0, h0 / 4.0] {
        let gs = GridSpec::centered(x, t, h, h, WINDOW_HALF);
        let fg = crate::appcli::grid::evaluate_grid(p, order, &gs)?;
        pde_reports.push(pde_residual(&gs, &fg.u, &fg.v, p.eps)?);
        zc_reports.push(zero_curvature_residual(p, &gs, &fg.u, &fg.v, zeta)?);
    }
    Ok(PointStudy {
        x,
        t,
        pde: convergence_study(&pde_reports),
        zero_curvature: convergence_study(&zc_reports),
        pde_reports,
    })
}

/// Largest pointwise `max(|du|, |dv|) / max(|u|, |v|)` between two pairs
/// of fields.
pub fn max_relative_error(
    a: (&[Complex], &[Complex]),
    b: (&[Complex], &[Complex]),
) -> f64 {
    let mut worst = 0.0f64;
    for k in 0..a.0.len() {
        let err = (a.0[k] - b.0[k]).norm().max((a.1[k] - b.1[k]).norm());
        let size = b.0[k].norm().max(b.1[k].norm());
        worst = worst.max(err / size);
    }
    worst
}

/// Engine against the first-order closed form.
pub fn compare_first_order(p: &SeedParams, gs: &GridSpec) -> Result<f64> {
    let fg = crate::appcli::grid::evaluate_grid(p, 1, gs)?;
    let (u, v) = crate::appcli::grid::evaluate_fn(gs, |x, t| crate::oracles::first_order(p, x, t));
    Ok(max_relative_error((&fg.u, &fg.v), (&u, &v)))
}

/// Engine against the second-order closed form (`d1 = 1`, `d2 = 3/2`,
/// `alpha = 0`).
pub fn compare_second_order(eps: f64, m1: f64, n1: f64, gs: &GridSpec) -> Result<f64> {
    let p = SeedParams::new(1.0, 1.5, eps, 0.0).with_shifts(vec![(m1, n1)]);
    let fg = crate::appcli::grid::evaluate_grid(&p, 2, gs)?;
    let (u, v) = crate::appcli::grid::evaluate_fn(gs, |x, t| crate::oracles::second_order_rw(eps, m1, n1, x, t));
    Ok(max_relative_error((&fg.u, &fg.v), (&u, &v)))
}
