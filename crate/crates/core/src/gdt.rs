//! Darboux engine: single classical steps, classical chains at distinct
//! spectral values, and the generalized iteration at the repeated value
//! `zeta1`.
//!
//! The generalized iteration works on the seed series compressed to
//! `g = f^2`. At step `l` the leading coefficient is the eigenfunction that
//! builds the Darboux matrix; multiplying the series by
//! `T(zeta1 (1 + g)) = zeta1 g I + T1` annihilates the `g^0` term, and
//! dividing by `g` yields the series for the next step.

use crate::error::{Error, Result};
use crate::model::{self, PhaseReading, SeedParams};
use crate::numerics::{CMat3, CVec3, Complex, I};

/// Relative size of the discarded `g^0` coefficient tolerated at every step.
pub const KERNEL_TOL: f64 = 1e-8;
/// Relative size of odd `f` coefficients tolerated in the seed series.
pub const ODD_TOL: f64 = 1e-10;

/// Truncation order of the seed series for an order-`n` run.
pub fn truncation_order(n: usize) -> i32 {
    4 * n as i32 + 4
}

/// `H`, `Lambda` and `T1 = T(zeta1)` for one eigenfunction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DarbouxMatrix {
    pub h: CMat3,
    pub lambda: CMat3,
    pub t1: CMat3,
    pub zeta1: Complex,
}

impl DarbouxMatrix {
    /// `T(zeta) = (zeta - zeta1) I + T1`.
    pub fn at(&self, zeta: Complex) -> CMat3 {
        CMat3::identity().scale(zeta - self.zeta1) + self.t1
    }
}

/// One recorded step of a chain.
#[derive(Debug, Clone, PartialEq)]
pub struct DarbouxStep {
    pub matrix: DarbouxMatrix,
    pub phi: CVec3,
    pub u_after: Complex,
    pub v_after: Complex,
    /// `|g^0 coefficient| / |g^1 coefficient|` after applying this step.
    pub kernel_ratio: f64,
}

/// Ordered record of the steps that produced `u[N]`, `v[N]` at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct DTChain {
    pub steps: Vec<DarbouxStep>,
    pub order: usize,
    pub params: SeedParams,
    pub point: (f64, f64),
    /// Truncation order actually used for the seed series.
    pub truncation: i32,
}

/// Builds the Darboux matrix of an eigenfunction at `zeta1`.
///
/// `H` has columns `(psi, phi, chi)`, `(phi*, -psi*, 0)`, `(chi*, 0, -psi*)`
/// and `det H = psi* |Phi|^2`, so `H` is singular wherever `psi` vanishes.
/// `T1 = zeta1 I - H Lambda H^-1` is therefore taken in its equivalent
/// projector form `(zeta1 - zeta1*) (I - Phi Phi^H / |Phi|^2)`.
pub fn darboux_matrix(phi: &CVec3, zeta1: Complex) -> Result<DarbouxMatrix> {
    let norm_sqr = phi.norm_sqr();
    if !(norm_sqr > 0.0) || !norm_sqr.is_finite() || !phi.is_finite() {
        return Err(Error::ZeroEigenfunction { norm_sqr });
    }
    let (a, b, c) = (phi[0], phi[1], phi[2]);
    let z = Complex::new(0.0, 0.0);
    let h = CMat3([[a, b.conj(), c.conj()], [b, -a.conj(), z], [c, z, -a.conj()]]);
    let lambda = CMat3::diag(zeta1, zeta1.conj(), zeta1.conj());
    let projector = CMat3::outer_conj(phi, phi).scale(Complex::new(1.0 / norm_sqr, 0.0));
    let t1 = (CMat3::identity() - projector).scale(zeta1 - zeta1.conj());
    Ok(DarbouxMatrix { h, lambda, t1, zeta1 })
}

/// New potentials after one Darboux step.
pub fn dt_update(
    u: Complex,
    v: Complex,
    phi: &CVec3,
    zeta1: Complex,
    eps: f64,
) -> Result<(Complex, Complex)> {
    let norm_sqr = phi.norm_sqr();
    if !(norm_sqr > 0.0) || !norm_sqr.is_finite() {
        return Err(Error::ZeroEigenfunction { norm_sqr });
    }
    let k = I * (zeta1 - zeta1.conj()) / (4.0 * eps * norm_sqr);
    Ok((u + k * phi[0] * phi[1].conj(), v + k * phi[0] * phi[2].conj()))
}

/// Knobs of the generalized iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GdtOptions {
    pub reading: PhaseReading,
    pub kernel_tol: f64,
    pub odd_tol: f64,
    /// Constant multiplying the whole seed series; outputs are invariant.
    pub seed_factor: Complex,
    /// Overrides the default truncation order.
    pub truncation: Option<i32>,
}

impl Default for GdtOptions {
    fn default() -> Self {
        GdtOptions {
            reading: PhaseReading::Imaginary,
            kernel_tol: KERNEL_TOL,
            odd_tol: ODD_TOL,
            seed_factor: Complex::new(1.0, 0.0),
            truncation: None,
        }
    }
}

/// `u[N]`, `v[N]` at `(x, t)` by the generalized Darboux iteration.
pub fn gdt_point(p: &SeedParams, n: usize, x: f64, t: f64) -> Result<(Complex, Complex, DTChain)> {
    gdt_point_with(p, n, x, t, &GdtOptions::default())
}

pub fn gdt_point_with(
    p: &SeedParams,
    n: usize,
    x: f64,
    t: f64,
    opts: &GdtOptions,
) -> Result<(Complex, Complex, DTChain)> {
    p.validate()?;
    if n == 0 {
        return Err(Error::InvalidParams("order must be at least 1".into()));
    }
    let k = opts.truncation.unwrap_or_else(|| truncation_order(n));
    match iterate(p, n, x, t, k, opts) {
        Err(Error::SeriesCorruption { .. }) => iterate(p, n, x, t, k + 4, opts),
        other => other,
    }
    .map_err(|e| e.at(x, t))
}

fn iterate(
    p: &SeedParams,
    n: usize,
    x: f64,
    t: f64,
    k: i32,
    opts: &GdtOptions,
) -> Result<(Complex, Complex, DTChain)> {
    let z1 = model::zeta1(p);
    let seed = model::spectral_seed_jet_scaled(p, x, t, k, opts.reading)?;
    let phi = seed.phi.scale(opts.seed_factor);

    let top = phi.top();
    let (mut odd, mut even) = (0.0f64, 0.0f64);
    for comp in &phi.0 {
        for j in 0..=top {
            let m = comp.coeff(j).norm();
            if j % 2 == 1 { odd = odd.max(m) } else { even = even.max(m) }
        }
    }
    if odd > opts.odd_tol * even {
        return Err(Error::OddSeries { ratio: odd / even });
    }
    let mut series: Vec<CVec3> = (0..=top.max(0) / 2).map(|j| phi.coeff(2 * j)).collect();
    if series.len() < n + 1 {
        return Err(Error::SeriesCorruption { step: 0, ratio: f64::INFINITY, tolerance: opts.kernel_tol });
    }

    let (mut u, mut v) = model::seed_potentials(p, x, t);
    let mut steps = Vec::with_capacity(n);
    for l in 1..=n {
        let lead = series[0];
        let dm = darboux_matrix(&lead, z1)?;
        (u, v) = dt_update(u, v, &lead, z1, p.eps)?;

        let mut next: Vec<CVec3> = series.iter().map(|c| dm.t1 * *c).collect();
        for j in (1..next.len()).rev() {
            next[j] = next[j] + series[j - 1].scale(z1);
        }
        let ratio = next[0].norm() / next[1].norm();
        if !(ratio <= opts.kernel_tol) {
            return Err(Error::SeriesCorruption { step: l, ratio, tolerance: opts.kernel_tol });
        }
        next.remove(0);
        series = next;
        steps.push(DarbouxStep { matrix: dm, phi: lead, u_after: u, v_after: v, kernel_ratio: ratio });
    }
    let chain = DTChain { steps, order: n, params: p.clone(), point: (x, t), truncation: k };
    Ok((u, v, chain))
}

/// One step of a classical chain: a spectral value and the seed
/// eigenfunction at that value.
pub struct ClassicalSpec<'a> {
    pub zeta: Complex,
    pub phi: Box<dyn Fn(f64, f64) -> CVec3 + Send + Sync + 'a>,
}

/// Potentials after a classical chain of steps at distinct spectral values.
/// Each eigenfunction is first carried through the Darboux matrices already
/// built, evaluated at its own spectral value.
pub fn classical_chain(
    p: &SeedParams,
    specs: &[ClassicalSpec<'_>],
    x: f64,
    t: f64,
) -> Result<(Complex, Complex)> {
    let (mut u, mut v) = model::seed_potentials(p, x, t);
    let mut built: Vec<DarbouxMatrix> = Vec::with_capacity(specs.len());
    for spec in specs {
        if spec.zeta.im == 0.0 {
            return Err(Error::InvalidParams("classical step needs a non-real spectral value".into()));
        }
        let mut phi = (spec.phi)(x, t);
        for dm in &built {
            phi = dm.at(spec.zeta) * phi;
        }
        let dm = darboux_matrix(&phi, spec.zeta).map_err(|e| e.at(x, t))?;
        (u, v) = dt_update(u, v, &phi, spec.zeta, p.eps).map_err(|e| e.at(x, t))?;
        built.push(dm);
    }
    Ok((u, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::mat3_inv;
    use proptest::prelude::*;

    fn cz(a: f64, b: f64) -> Complex {
        Complex::new(a, b)
    }

    #[test]
    fn unit_vector_fixture() {
        let phi = CVec3::new(cz(1.0, 0.0), cz(0.0, 0.0), cz(0.0, 0.0));
        let dm = darboux_matrix(&phi, I).unwrap();
        let one = cz(1.0, 0.0);
        assert_eq!(dm.h, CMat3::diag(one, -one, -one));
        assert_eq!(dm.t1, CMat3::diag(cz(0.0, 0.0), cz(0.0, 2.0), cz(0.0, 2.0)));
        assert_eq!(dm.t1 * phi, CVec3::zero());
    }

    #[test]
    fn zero_eigenfunction_is_rejected() {
        assert!(matches!(darboux_matrix(&CVec3::zero(), I), Err(Error::ZeroEigenfunction { .. })));
        assert!(dt_update(cz(1.0, 0.0), cz(0.0, 0.0), &CVec3::zero(), I, 0.01).is_err());
    }

    #[test]
    fn update_edge_cases() {
        let phi = CVec3::new(cz(0.3, 1.0), cz(-2.0, 0.1), cz(0.5, 0.5));
        let (u, v) = (cz(1.0, 0.2), cz(-0.4, 0.9));
        assert_eq!(dt_update(u, v, &phi, cz(0.7, 0.0), 0.01).unwrap(), (u, v));
        let e1 = CVec3::new(cz(2.0, 1.0), cz(0.0, 0.0), cz(0.0, 0.0));
        assert_eq!(dt_update(u, v, &e1, cz(0.0, 0.3), 0.01).unwrap(), (u, v));
    }

    #[test]
    fn first_order_peak_is_three() {
        let p = SeedParams::new(1.0, 0.0, 0.01, 0.0);
        let (u, v, chain) = gdt_point(&p, 1, 0.0, 0.0).unwrap();
        assert!((u.norm() - 3.0).abs() < 1e-10);
        assert!(v.norm() < 1e-14);
        assert_eq!(chain.steps.len(), 1);
    }

    #[test]
    fn second_order_peak_is_five() {
        let p = SeedParams::new(1.0, 1.5, 0.01, 0.0);
        let (u, v, chain) = gdt_point(&p, 2, 0.0, 0.0).unwrap();
        assert!((u.norm() - 5.0).abs() < 1e-8, "{}", u.norm());
        assert!((v.norm() - 7.5).abs() < 1e-8, "{}", v.norm());
        assert_eq!(chain.steps.len(), 2);
        assert_eq!(chain.steps[1].u_after, u);
    }

    #[test]
    fn chain_threads_potentials() {
        let p = SeedParams::new(1.0, 1.0, 0.01, 1.0);
        let (u, v, chain) = gdt_point(&p, 3, 0.4, -0.2).unwrap();
        assert_eq!(chain.steps.len(), 3);
        assert_eq!((chain.steps[2].u_after, chain.steps[2].v_after), (u, v));
        for s in &chain.steps {
            assert!(s.kernel_ratio <= KERNEL_TOL);
        }
    }

    #[test]
    fn projector_matches_similarity_form() {
        for phi in [
            CVec3::new(cz(1.0, 0.5), cz(-0.3, 0.2), cz(0.7, -1.1)),
            CVec3::new(cz(0.2, -2.0), cz(1.5, 0.0), cz(0.0, 0.4)),
        ] {
            let z1 = cz(0.0, 0.08);
            let dm = darboux_matrix(&phi, z1).unwrap();
            let direct = CMat3::identity().scale(z1) - dm.h * dm.lambda * mat3_inv(&dm.h).unwrap();
            assert!((direct - dm.t1).max_abs() < 1e-12);
        }
    }

    #[test]
    fn classical_chain_edge_cases() {
        let p = SeedParams::new(1.0, 0.5, 0.01, 0.0);
        assert_eq!(classical_chain(&p, &[], 0.3, 0.2).unwrap(), model::seed_potentials(&p, 0.3, 0.2));

        let zeta = cz(0.01, 0.1);
        let f = move |x: f64, t: f64| {
            model::eigenfunction(&SeedParams::new(1.0, 0.5, 0.01, 0.0), zeta, x, t, PhaseReading::Imaginary, model::Branch::Full)
        };
        let (x, t) = (0.3, 0.2);
        let phi = f(x, t);
        let spec = [ClassicalSpec { zeta, phi: Box::new(f) }];
        let (u0, v0) = model::seed_potentials(&p, x, t);
        let direct = dt_update(u0, v0, &phi, zeta, p.eps).unwrap();
        assert_eq!(classical_chain(&p, &spec, x, t).unwrap(), direct);
    }

    fn arb_vec() -> impl Strategy<Value = CVec3> {
        prop::array::uniform3((-3.0f64..3.0, -3.0f64..3.0))
            .prop_map(|a| CVec3(a.map(|(r, i)| cz(r, i))))
            .prop_filter("nonzero", |v| v.norm() > 1e-3)
    }

    proptest! {
        #[test]
        fn kernel_identity(phi in arb_vec(), re in -1.0f64..1.0, im in 0.01f64..1.0) {
            let z1 = cz(re, im);
            let dm = darboux_matrix(&phi, z1).unwrap();
            let res = (dm.t1 * phi).norm();
            prop_assert!(res <= 1e-12 * (z1.norm() + dm.t1.max_abs()) * phi.norm());
        }

        #[test]
        fn rescaling_leaves_t1(phi in arb_vec(), c in (-2.0f64..2.0, -2.0f64..2.0)) {
            let c = cz(c.0, c.1);
            prop_assume!(c.norm() > 1e-2);
            let z1 = cz(0.0, 0.3);
            let a = darboux_matrix(&phi, z1).unwrap();
            let b = darboux_matrix(&phi.scale(c), z1).unwrap();
            prop_assert!((a.t1 - b.t1).max_abs() <= 1e-12 * a.t1.max_abs().max(1.0));
        }

        #[test]
        fn shifted_evaluation(phi in arb_vec(), d in (-1.0f64..1.0, -1.0f64..1.0)) {
            let z1 = cz(0.0, 0.5);
            let dm = darboux_matrix(&phi, z1).unwrap();
            let d = cz(d.0, d.1);
            let want = CMat3::identity().scale(d) + dm.t1;
            prop_assert!((dm.at(z1 + d) - want).max_abs() <= 1e-14);
        }
    }
}
