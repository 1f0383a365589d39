//! Plane-wave seed, Lax pair, and the eigenfunction family used as the
//! spectral seed of the Darboux iteration.
//!
//! The eigenfunction is built at `zeta = zeta1 (1 + f^2)` with
//! `zeta1 = 8 i eps sqrt(d1^2 + d2^2)`, where `zeta^2 + 64 eps^2 (d1^2 + d2^2)`
//! vanishes. Both square-root coefficients `C1`, `C2` have simple poles at
//! `f = 0`, which cancel in the combination that enters `psi`, `phi`, `chi`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{CMat3, CVec3, Complex, JetVec3, LaurentJet, I};

/// Free parameters of the localized-wave family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedParams {
    pub d1: f64,
    pub d2: f64,
    pub eps: f64,
    pub alpha: f64,
    /// Shift parameters `(m_k, n_k)`, forming `s_k = m_k + i n_k`.
    #[serde(default)]
    pub s: Vec<(f64, f64)>,
}

impl SeedParams {
    pub fn new(d1: f64, d2: f64, eps: f64, alpha: f64) -> Self {
        SeedParams { d1, d2, eps, alpha, s: Vec::new() }
    }

    pub fn with_shifts(mut self, s: Vec<(f64, f64)>) -> Self {
        self.s = s;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.d1, self.d2, self.eps, self.alpha];
        if all.iter().chain(self.s.iter().flat_map(|(m, n)| [m, n])).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParams("non-finite parameter".into()));
        }
        if !(self.amp_sqr() > 0.0) {
            return Err(Error::InvalidParams("d1^2 + d2^2 must be positive".into()));
        }
        if self.eps == 0.0 {
            return Err(Error::InvalidParams("eps must be nonzero".into()));
        }
        Ok(())
    }

    /// `d1^2 + d2^2`
    pub fn amp_sqr(&self) -> f64 {
        self.d1 * self.d1 + self.d2 * self.d2
    }

    pub fn amp(&self) -> f64 {
        self.amp_sqr().sqrt()
    }

    /// `sum_k s_k g^k` at `g = f^2`.
    fn shift_sum(&self, g: Complex) -> Complex {
        let mut acc = Complex::new(0.0, 0.0);
        let mut gk = Complex::new(1.0, 0.0);
        for &(m, n) in &self.s {
            gk *= g;
            acc += Complex::new(m, n) * gk;
        }
        acc
    }
}

/// Field values and x-derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaxInput {
    pub u: Complex,
    pub v: Complex,
    pub u_x: Complex,
    pub v_x: Complex,
    pub u_xx: Complex,
    pub v_xx: Complex,
}

impl LaxInput {
    /// Values with vanishing derivatives.
    pub fn flat(u: Complex, v: Complex) -> Self {
        let z = Complex::new(0.0, 0.0);
        LaxInput { u, v, u_x: z, v_x: z, u_xx: z, v_xx: z }
    }
}

/// A spectral parameter value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint {
    pub zeta: Complex,
}

/// How the `theta/2` phase factors of the eigenfunction are read:
/// `exp(+-i theta/2)` or `exp(+-theta/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum PhaseReading {
    #[default]
    Imaginary,
    Real,
}

impl PhaseReading {
    pub const ALL: [PhaseReading; 2] = [PhaseReading::Imaginary, PhaseReading::Real];

    /// Factor multiplying `psi`; `phi` and `chi` carry its reciprocal.
    fn factor(self, theta: f64) -> Complex {
        match self {
            PhaseReading::Imaginary => Complex::from_polar(1.0, theta / 2.0),
            PhaseReading::Real => Complex::new((theta / 2.0).exp(), 0.0),
        }
    }
}

/// Which solution branches of the eigenfunction to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Branch {
    #[default]
    Full,
    /// Only the `C1`, `C2` terms.
    PlaneOnly,
    /// Only the `alpha exp(M3)` terms.
    AlphaOnly,
}

impl Branch {
    fn plane(self) -> bool {
        self != Branch::AlphaOnly
    }
    fn alpha(self) -> bool {
        self != Branch::PlaneOnly
    }
}

/// `(d1 e^{i theta}, d2 e^{i theta})` with `theta = (d1^2 + d2^2) t`.
pub fn seed_potentials(p: &SeedParams, _x: f64, t: f64) -> (Complex, Complex) {
    let phase = Complex::from_polar(1.0, p.amp_sqr() * t);
    (phase * p.d1, phase * p.d2)
}

/// The distinguished spectral value `8 i eps sqrt(d1^2 + d2^2)`.
pub fn zeta1(p: &SeedParams) -> Complex {
    Complex::new(0.0, 8.0 * p.eps * p.amp())
}

fn u0(eps: f64) -> CMat3 {
    let k = 1.0 / (12.0 * eps);
    CMat3::diag(Complex::new(0.0, -2.0 * k), Complex::new(0.0, k), Complex::new(0.0, k))
}

fn u1(u: Complex, v: Complex) -> CMat3 {
    let z = Complex::new(0.0, 0.0);
    CMat3([[z, -u, -v], [u.conj(), z, z], [v.conj(), z, z]])
}

/// x-part of the Lax pair, `zeta U0 + U1`.
pub fn lax_u(u: Complex, v: Complex, zeta: Complex, eps: f64) -> CMat3 {
    u0(eps).scale(zeta) + u1(u, v)
}

/// t-part of the Lax pair, `zeta^3 V0 + zeta^2 V1 + zeta V2 + V3`.
pub fn lax_v(li: &LaxInput, zeta: Complex, eps: f64) -> CMat3 {
    let LaxInput { u, v, u_x, v_x, u_xx, v_xx } = *li;
    let (uc, vc, uxc, vxc) = (u.conj(), v.conj(), u_x.conj(), v_x.conj());
    let half_i = I * 0.5;

    let e = u.norm_sqr() + v.norm_sqr();
    let e1 = u * uxc - uc * u_x;
    let e2 = v * vxc - vc * v_x;
    let e3 = u_xx + u * (2.0 * e);
    let e4 = v_xx + v * (2.0 * e);
    let e5 = uc * v_x - v * uxc;

    let big_u0 = u0(eps);
    let v0 = big_u0.scale(Complex::new(1.0 / (16.0 * eps), 0.0));
    let v1 = big_u0.scale(Complex::new(1.0 / (8.0 * eps), 0.0))
        + u1(u, v).scale(Complex::new(1.0 / (16.0 * eps), 0.0));
    let h = 1.0 / (2.0 * eps);
    let v2 = CMat3([
        [I * e, -u * h - I * u_x, -v * h - I * v_x],
        [uc * h - I * uxc, -I * u.norm_sqr(), -I * v * uc],
        [vc * h - I * vxc, -I * u * vc, -I * v.norm_sqr()],
    ])
    .scale(Complex::new(0.25, 0.0));
    let v3 = CMat3([
        [(e1 + e2) * eps + half_i * e, e3 * eps - half_i * u_x, e4 * eps - half_i * v_x],
        [-e3.conj() * eps - half_i * uxc, -e1 * eps - half_i * u.norm_sqr(), e5 * eps - half_i * v * uc],
        [-e4.conj() * eps - half_i * vxc, -e5.conj() * eps - half_i * u * vc, -e2 * eps - half_i * v.norm_sqr()],
    ]);

    let z2 = zeta * zeta;
    v0.scale(z2 * zeta) + v1.scale(z2) + v2.scale(zeta) + v3
}

/// Spectral seed expanded in `f`, together with the real shift that was
/// removed from every exponent before exponentiating: the true series is
/// `phi * exp(log_scale)`.
#[derive(Debug, Clone)]
pub struct SpectralSeed {
    pub phi: JetVec3,
    pub log_scale: f64,
}

/// Eigenfunction series at `zeta = zeta1 (1 + f^2)`, truncated through
/// `f^k`, without any magnitude normalization.
pub fn spectral_seed_jet(p: &SeedParams, x: f64, t: f64, k: i32) -> Result<JetVec3> {
    let seed = build_seed_jet(p, x, t, k, PhaseReading::Imaginary, Branch::Full, false)?;
    Ok(seed.phi)
}

/// As [`spectral_seed_jet`], with a shared magnitude normalization so large
/// `|x|`, `|t|` cannot overflow.
pub fn spectral_seed_jet_scaled(
    p: &SeedParams,
    x: f64,
    t: f64,
    k: i32,
    reading: PhaseReading,
) -> Result<SpectralSeed> {
    build_seed_jet(p, x, t, k, reading, Branch::Full, true)
}

fn build_seed_jet(
    p: &SeedParams,
    x: f64,
    t: f64,
    k: i32,
    reading: PhaseReading,
    branch: Branch,
    normalize: bool,
) -> Result<SpectralSeed> {
    p.validate()?;
    if k < 2 {
        return Err(Error::InvalidParams(format!("truncation order {k} below 2")));
    }
    let eps = p.eps;
    let amp2 = p.amp_sqr();
    let z1 = zeta1(p);
    let cst = |a: Complex| LaurentJet::constant(a, k);
    let rc = |a: f64| Complex::new(a, 0.0);

    let zeta = cst(z1) + LaurentJet::monomial(z1, 2, k);
    let zz2 = &zeta * &(&zeta + &cst(rc(2.0)));

    let s = (&(&zeta * &zeta) + &cst(rc(64.0 * eps * eps * amp2))).sqrt()?;
    let c1 = (&zeta - &s).sqrt()?.div(&s)?;
    let c2 = (&zeta + &s).sqrt()?.div(&s)?;

    let lin = &cst(rc(16.0 * eps * x)) + &(&zz2 * rc(t));
    let zlin = &zeta * &lin;
    let m1 = &zlin * Complex::new(0.0, -1.0 / (384.0 * eps * eps));
    let m3 = &zlin * Complex::new(0.0, 1.0 / (192.0 * eps * eps));

    let mut shifts = LaurentJet::zero(k);
    for (j, &(m, n)) in p.s.iter().enumerate() {
        shifts = &shifts + &LaurentJet::monomial(Complex::new(m, n), 2 * (j as i32 + 1), k);
    }
    let inner = &(&cst(rc(16.0 * eps * x)) + &(&(&zz2 - &cst(rc(32.0 * eps * eps * amp2))) * rc(t)))
        - &shifts;
    let m2 = &(&s * &inner) * Complex::new(0.0, 1.0 / (128.0 * eps * eps));

    let use_alpha = branch.alpha() && p.alpha != 0.0;
    let use_plane = branch.plane();
    let log_scale = if normalize {
        let mut r = f64::NEG_INFINITY;
        if use_plane {
            r = r.max(m1.coeff(0).re);
        }
        if use_alpha {
            r = r.max(m3.coeff(0).re);
        }
        if r.is_finite() { r } else { 0.0 }
    } else {
        0.0
    };
    let shift = cst(rc(log_scale));

    let theta = amp2 * t;
    let ph = reading.factor(theta);
    let (rho1, rho2) = (p.d1 / p.amp(), p.d2 / p.amp());

    let zero = LaurentJet::zero(k);
    let (mut psi, mut phi, mut chi) = (zero.clone(), zero.clone(), zero);
    if use_plane {
        let ep = (&(&m1 + &m2) - &shift).exp()?;
        let em = (&(&m1 - &m2) - &shift).exp()?;
        let a = &(&c1 * &ep) - &(&c2 * &em);
        let b = &(&c2 * &ep) - &(&c1 * &em);
        psi = &a * ph;
        phi = &b * (ph.inv() * rho1);
        chi = &b * (ph.inv() * rho2);
    }
    if use_alpha {
        let e3 = (&m3 - &shift).exp()?;
        phi = &phi + &(&e3 * rc(p.d2 * p.alpha));
        chi = &chi - &(&e3 * rc(p.d1 * p.alpha));
    }
    Ok(SpectralSeed { phi: JetVec3([psi, phi, chi]), log_scale })
}

/// The same eigenfunction evaluated in plain complex arithmetic at an
/// arbitrary spectral value. The shift sum uses `f^2 = zeta / zeta1 - 1`.
pub fn eigenfunction(
    p: &SeedParams,
    zeta: Complex,
    x: f64,
    t: f64,
    reading: PhaseReading,
    branch: Branch,
) -> CVec3 {
    let eps = p.eps;
    let amp2 = p.amp_sqr();
    let g = zeta / zeta1(p) - 1.0;

    let s = (zeta * zeta + 64.0 * eps * eps * amp2).sqrt();
    let c1 = (zeta - s).sqrt() / s;
    let c2 = (zeta + s).sqrt() / s;
    let zz2 = zeta * (zeta + 2.0);
    let lin = 16.0 * eps * x + zz2 * t;
    let m1 = Complex::new(0.0, -1.0 / (384.0 * eps * eps)) * zeta * lin;
    let m3 = Complex::new(0.0, 1.0 / (192.0 * eps * eps)) * zeta * lin;
    let inner = 16.0 * eps * x + (zz2 - 32.0 * eps * eps * amp2) * t - p.shift_sum(g);
    let m2 = Complex::new(0.0, 1.0 / (128.0 * eps * eps)) * s * inner;

    let ph = reading.factor(amp2 * t);
    let (rho1, rho2) = (p.d1 / p.amp(), p.d2 / p.amp());
    let mut out = CVec3::zero();
    if branch.plane() {
        let (ep, em) = ((m1 + m2).exp(), (m1 - m2).exp());
        let b = (c2 * ep - c1 * em) / ph;
        out = CVec3::new((c1 * ep - c2 * em) * ph, b * rho1, b * rho2);
    }
    if branch.alpha() {
        let e3 = m3.exp();
        out[1] += e3 * (p.d2 * p.alpha);
        out[2] -= e3 * (p.d1 * p.alpha);
    }
    out
}

/// Eigenfunction at `zeta = zeta1 (1 + f0^2)`.
pub fn eigenfunction_at_f(
    p: &SeedParams,
    f0: f64,
    x: f64,
    t: f64,
    reading: PhaseReading,
    branch: Branch,
) -> CVec3 {
    eigenfunction(p, zeta1(p) * (1.0 + f0 * f0), x, t, reading, branch)
}

/// Closed-form leading coefficient of the spectral seed series.
pub fn phi0_closed_form(p: &SeedParams, x: f64, t: f64) -> CVec3 {
    let eps = p.eps;
    let a2 = p.amp_sqr();
    let a = a2.sqrt();
    let lin = 2.0 * a * (x - 6.0 * eps * a2 * t);
    let plus = Complex::new(lin + 1.0, 2.0 * a2 * t);
    let minus = Complex::new(lin - 1.0, 2.0 * a2 * t);
    let xi1 = Complex::new(a * x / 3.0 - 4.0 / 3.0 * eps * a2 * a * t, 5.0 / 6.0 * a2 * t);
    let xi2 = Complex::new(a * x / 3.0 - 4.0 / 3.0 * eps * a2 * a * t, -a2 * t / 6.0);
    let xi3 = Complex::new(-2.0 / 3.0 * a * x + 8.0 / 3.0 * eps * a2 * a * t, -2.0 / 3.0 * a2 * t);

    let im1 = Complex::new(-1.0, 1.0);
    let pre = im1 / (4.0 * eps.sqrt());
    let psi = pre / a.powf(0.5) * plus * xi1.exp();
    let common = pre / a.powf(1.5) * minus * xi2.exp();
    let e3 = xi3.exp() * p.alpha;
    CVec3::new(psi, common * p.d1 + e3 * p.d2, common * p.d2 - e3 * p.d1)
}
