//! Closed-form first- and second-order solutions, used as ground truth for
//! the Darboux engine.

use crate::model::SeedParams;
use crate::numerics::{Complex, I};

/// Rational and exponential building blocks of the first-order solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstOrderParts {
    pub f1: f64,
    pub h1: f64,
    pub d1: f64,
    pub g1: Complex,
    pub k1: f64,
    pub eta1: Complex,
    pub eta2: Complex,
}

impl FirstOrderParts {
    pub fn new(p: &SeedParams, x: f64, t: f64) -> Self {
        let eps = p.eps;
        let a2 = p.amp_sqr();
        let a = a2.sqrt();
        let quad_t = 4.0 * a2 * a2 * (36.0 * eps * eps * a2 + 1.0) * t * t;
        let f1 = -8.0 * a2 * x * x + 96.0 * eps * a2 * a2 * x * t - 2.0 * quad_t + 2.0;
        let h1 = 8.0 * a2 * t;
        let d1 = 4.0 * a2 * x * x - 48.0 * eps * a2 * a2 * x * t + quad_t + 1.0;
        let lin = Complex::new(2.0 * a * (x - 6.0 * eps * a2 * t) + 1.0, 2.0 * a2 * t);
        let g1 = Complex::new(4.0, -4.0) * (eps.sqrt() * p.alpha * a2.powf(0.75)) * lin;
        let k1 = 4.0 * eps * p.alpha * p.alpha * a2 * a;
        // the whole bracket multiplies t
        let eta1 = Complex::new(-a * x + 4.0 * eps * a2 * a * t, 1.5 * a2 * t);
        let eta2 = Complex::new(-2.0 * a * x + 8.0 * eps * a2 * a * t, 0.0);
        FirstOrderParts { f1, h1, d1, g1, k1, eta1, eta2 }
    }

    /// Denominator `D1 + K1 exp(eta2)`, positive on the real plane.
    pub fn denominator(&self) -> f64 {
        self.d1 + self.k1 * self.eta2.re.exp()
    }
}

/// First-order solution for arbitrary `alpha`.
pub fn first_order(p: &SeedParams, x: f64, t: f64) -> (Complex, Complex) {
    let parts = FirstOrderParts::new(p, x, t);
    let wave = Complex::from_polar(1.0, p.amp_sqr() * t);
    let rational = wave * Complex::new(parts.f1, parts.h1);
    // numerator and denominator both divided by exp(r) so far fields stay finite
    let (damp, soliton, den) = if parts.k1 > 0.0 {
        let r = parts.eta2.re.max(0.0);
        let damp = (-r).exp();
        (damp, parts.g1 * (parts.eta1 - r).exp(), parts.d1 * damp + parts.k1 * (parts.eta2.re - r).exp())
    } else {
        (1.0, Complex::new(0.0, 0.0), parts.d1)
    };
    let rational = rational * damp;
    (
        wave * p.d1 + (rational * p.d1 + soliton * p.d2) / den,
        wave * p.d2 + (rational * p.d2 - soliton * p.d1) / den,
    )
}

/// First-order vector rogue wave, the `alpha = 0` member of the family.
pub fn first_order_rw(p: &SeedParams, x: f64, t: f64) -> (Complex, Complex) {
    let parts = FirstOrderParts::new(p, x, t);
    let w = Complex::from_polar(1.0, p.amp_sqr() * t)
        * (1.0 + Complex::new(parts.f1, parts.h1) / parts.d1);
    (w * p.d1, w * p.d2)
}

/// `coefficient * x^px t^pt eps^pe m^pm n^pn (sqrt 13)^pr`
#[derive(Debug, Clone, Copy)]
struct Monomial {
    c: f64,
    px: u8,
    pt: u8,
    pe: u8,
    pm: u8,
    pn: u8,
    r13: bool,
}

const fn m(c: f64, px: u8, pt: u8, pe: u8, pm: u8, pn: u8, r13: bool) -> Monomial {
    Monomial { c, px, pt, pe, pm, pn, r13 }
}

/// Polynomial values of the second-order solution at `d1 = 1`, `d2 = 3/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondOrderParts {
    pub f2: f64,
    pub g2: f64,
    pub d2: f64,
}

struct Powers {
    x: [f64; 7],
    t: [f64; 7],
    e: [f64; 9],
    m: [f64; 3],
    n: [f64; 3],
}

fn powers<const N: usize>(v: f64) -> [f64; N] {
    let mut out = [1.0; N];
    for k in 1..N {
        out[k] = out[k - 1] * v;
    }
    out
}

fn eval_table(table: &[Monomial], pw: &Powers) -> f64 {
    let r13 = 13f64.sqrt();
    table
        .iter()
        .map(|q| {
            let mut v = q.c
                * pw.x[q.px as usize]
                * pw.t[q.pt as usize]
                * pw.e[q.pe as usize]
                * pw.m[q.pm as usize]
                * pw.n[q.pn as usize];
            if q.r13 {
                v *= r13;
            }
            v
        })
        .sum()
}

impl SecondOrderParts {
    pub fn new(eps: f64, m1: f64, n1: f64, x: f64, t: f64) -> Self {
        Self::from_tables(G2_TABLE, eps, m1, n1, x, t)
    }

    fn from_tables(g2: &[Monomial], eps: f64, m1: f64, n1: f64, x: f64, t: f64) -> Self {
        let pw = Powers { x: powers(x), t: powers(t), e: powers(eps), m: powers(m1), n: powers(n1) };
        SecondOrderParts {
            f2: eval_table(F2_TABLE, &pw),
            g2: eval_table(g2, &pw),
            d2: eval_table(D2_TABLE, &pw),
        }
    }

    fn field(&self, t: f64) -> (Complex, Complex) {
        let w = Complex::from_polar(1.0, 13.0 / 4.0 * t)
            * (1.0 + (Complex::new(self.f2, 0.0) + I * self.g2) / self.d2);
        (w, w * 1.5)
    }
}

/// Second-order vector rogue wave at `d1 = 1`, `d2 = 3/2` with shift
/// `s1 = m1 + i n1`.
pub fn second_order_rw(eps: f64, m1: f64, n1: f64, x: f64, t: f64) -> (Complex, Complex) {
    SecondOrderParts::new(eps, m1, n1, x, t).field(t)
}

#[rustfmt::skip]
const F2_TABLE: &[Monomial] = &[
    m(2304.0, 0, 0, 2, 0, 0, false),
    m(3744.0, 0, 1, 1, 0, 1, true),
    m(-146016.0, 0, 1, 2, 1, 0, false),
    m(-584064.0, 0, 2, 2, 0, 0, false),
    m(-83521152.0, 0, 2, 4, 0, 0, false),
    m(-6854640.0, 0, 4, 2, 0, 0, false),
    m(-962391456.0, 0, 4, 4, 0, 0, false),
    m(-18766633392.0, 0, 4, 6, 0, 0, false),
    m(7488.0, 1, 0, 1, 1, 0, false),
    m(5451264.0, 1, 1, 3, 0, 0, false),
    m(98706816.0, 1, 3, 3, 0, 0, false),
    m(3849565824.0, 1, 3, 5, 0, 0, false),
    m(-59904.0, 2, 0, 2, 0, 0, false),
    m(-2530944.0, 2, 2, 2, 0, 0, false),
    m(-296120448.0, 2, 2, 4, 0, 0, false),
    m(10123776.0, 3, 1, 3, 0, 0, false),
    m(-129792.0, 4, 0, 2, 0, 0, false),
];
#[rustfmt::skip]
const G2_TABLE: &[Monomial] = &[
    m(-288.0, 0, 0, 1, 0, 1, true),
    m(74880.0, 0, 1, 2, 0, 0, false),
    m(12168.0, 0, 2, 1, 0, 1, true),
    m(-949104.0, 0, 2, 2, 1, 0, false),
    m(-1423656.0, 0, 2, 3, 0, 1, true),
    m(-421824.0, 0, 3, 2, 0, 0, false),
    m(-246767040.0, 0, 3, 4, 0, 0, false),
    m(-8911032.0, 0, 5, 2, 0, 0, false),
    m(-2085181488.0, 0, 5, 4, 0, 0, false),
    m(-121983117048.0, 0, 5, 6, 0, 0, false),
    m(48672.0, 1, 1, 1, 1, 0, false),
    m(146016.0, 1, 1, 2, 0, 1, true),
    m(5061888.0, 1, 2, 3, 0, 0, false),
    m(213864768.0, 1, 4, 3, 0, 0, false),
    m(25022177856.0, 1, 4, 5, 0, 0, false),
    m(-3744.0, 2, 0, 1, 0, 1, true),
    m(389376.0, 2, 1, 2, 0, 0, false),
    m(-5483712.0, 2, 3, 2, 0, 0, false),
    m(-1924782912.0, 2, 3, 4, 0, 0, false),
    m(65804544.0, 3, 2, 3, 0, 0, false),
    m(-843648.0, 4, 1, 2, 0, 0, false),
];
#[rustfmt::skip]
const D2_TABLE: &[Monomial] = &[
    m(117.0, 0, 0, 0, 0, 2, false),
    m(117.0, 0, 0, 0, 2, 0, false),
    m(576.0, 0, 0, 2, 0, 0, false),
    m(-2808.0, 0, 1, 1, 0, 1, true),
    m(133848.0, 0, 1, 2, 1, 0, false),
    m(267696.0, 0, 2, 2, 0, 0, false),
    m(43975152.0, 0, 2, 4, 0, 0, false),
    m(-13182.0, 0, 3, 1, 0, 1, true),
    m(1542294.0, 0, 3, 2, 1, 0, false),
    m(4626882.0, 0, 3, 3, 0, 1, true),
    m(-60149466.0, 0, 3, 4, 1, 0, false),
    m(3084588.0, 0, 4, 2, 0, 0, false),
    m(400996440.0, 0, 4, 4, 0, 0, false),
    m(-20330519508.0, 0, 4, 6, 0, 0, false),
    m(4826809.0, 0, 6, 2, 0, 0, false),
    m(1694209959.0, 0, 6, 4, 0, 0, false),
    m(198222565203.0, 0, 6, 6, 0, 0, false),
    m(7730680042917.0, 0, 6, 8, 0, 0, false),
    m(-1872.0, 1, 0, 1, 1, 0, false),
    m(-1654848.0, 1, 1, 3, 0, 0, false),
    m(-79092.0, 1, 2, 1, 1, 0, false),
    m(-474552.0, 1, 2, 2, 0, 1, true),
    m(9253764.0, 1, 2, 3, 1, 0, false),
    m(-8225568.0, 1, 3, 3, 0, 0, false),
    m(2887174368.0, 1, 3, 5, 0, 0, false),
    m(-173765124.0, 1, 5, 3, 0, 0, false),
    m(-40661039016.0, 1, 5, 5, 0, 0, false),
    m(-2378670782436.0, 1, 5, 7, 0, 0, false),
    m(22464.0, 2, 0, 2, 0, 0, false),
    m(12168.0, 2, 1, 1, 0, 1, true),
    m(-474552.0, 2, 1, 2, 1, 0, false),
    m(-632736.0, 2, 2, 2, 0, 0, false),
    m(-123383520.0, 2, 2, 4, 0, 0, false),
    m(4455516.0, 2, 4, 2, 0, 0, false),
    m(3127772232.0, 2, 4, 4, 0, 0, false),
    m(304957792620.0, 2, 4, 6, 0, 0, false),
    m(8112.0, 3, 0, 1, 1, 0, false),
    m(843648.0, 3, 1, 3, 0, 0, false),
    m(-106932384.0, 3, 3, 3, 0, 0, false),
    m(-20851814880.0, 3, 3, 5, 0, 0, false),
    m(32448.0, 4, 0, 2, 0, 0, false),
    m(1370928.0, 4, 2, 2, 0, 0, false),
    m(801992880.0, 4, 2, 4, 0, 0, false),
    m(-16451136.0, 5, 1, 3, 0, 0, false),
    m(140608.0, 6, 0, 2, 0, 0, false),
];
