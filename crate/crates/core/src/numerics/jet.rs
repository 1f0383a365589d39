//! Truncated Laurent series in a single formal variable `f`.
//!
//! A jet stores the coefficients of `f^v, f^(v+1), ..., f^(v+K)` and carries
//! its own precision: everything above `f^(v+K)` is unknown. Products keep the
//! smaller relative order of the operands, sums keep the lower absolute top, so
//! a pole that cancels (as in `C1 e^{M+} - C2 e^{M-}`) costs exactly the orders
//! it should and never fabricates coefficients.
//!
//! The zero jet is represented by an empty coefficient window whose valuation
//! is one past the last power known to vanish.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::Complex;
use crate::error::{Error, Result};

/// Relative size below which a leading sum coefficient counts as cancelled.
pub const CANCEL_TOL: f64 = 1e-13;

#[derive(Clone, PartialEq)]
pub struct LaurentJet {
    valuation: i32,
    coeffs: Vec<Complex>,
}

impl fmt::Debug for LaurentJet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0 + O(f^{})", self.top() + 1);
        }
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({:.6e}{:+.6e}i)f^{}", c.re, c.im, self.valuation + k as i32)?;
        }
        write!(f, " + O(f^{})", self.top() + 1)
    }
}

impl LaurentJet {
    /// Jet with the given coefficients starting at `f^valuation`; exact
    /// leading zeros are stripped.
    pub fn new(valuation: i32, coeffs: Vec<Complex>) -> Self {
        let lead = coeffs.iter().position(|c| *c != Complex::new(0.0, 0.0));
        match lead {
            Some(0) => LaurentJet { valuation, coeffs },
            Some(i) => LaurentJet {
                valuation: valuation + i as i32,
                coeffs: coeffs[i..].to_vec(),
            },
            None => LaurentJet::zero(valuation + coeffs.len() as i32 - 1),
        }
    }

    /// Zero, known to vanish through `f^top`.
    pub fn zero(top: i32) -> Self {
        LaurentJet { valuation: top + 1, coeffs: Vec::new() }
    }

    /// The constant `a`, known through `f^top`.
    pub fn constant(a: Complex, top: i32) -> Self {
        LaurentJet::monomial(a, 0, top)
    }

    /// `a f^power`, known through `f^top`.
    pub fn monomial(a: Complex, power: i32, top: i32) -> Self {
        if top < power {
            return LaurentJet::zero(top);
        }
        let mut coeffs = vec![Complex::new(0.0, 0.0); (top - power + 1) as usize];
        coeffs[0] = a;
        LaurentJet::new(power, coeffs)
    }

    /// The formal variable `f` itself, known through `f^top`.
    pub fn variable(top: i32) -> Self {
        LaurentJet::monomial(Complex::new(1.0, 0.0), 1, top)
    }

    pub fn valuation(&self) -> i32 {
        self.valuation
    }

    /// Number of known terms past the valuation (`K`); `-1` for the zero jet.
    pub fn order(&self) -> i32 {
        self.coeffs.len() as i32 - 1
    }

    /// Highest power of `f` whose coefficient is known.
    pub fn top(&self) -> i32 {
        self.valuation + self.order()
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `f^k`; zero outside the represented window.
    pub fn coeff(&self, k: i32) -> Complex {
        let i = k - self.valuation;
        if i < 0 || i as usize >= self.coeffs.len() {
            Complex::new(0.0, 0.0)
        } else {
            self.coeffs[i as usize]
        }
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Drops every coefficient above `f^top`.
    pub fn truncate(&self, top: i32) -> Self {
        if top >= self.top() {
            return self.clone();
        }
        if top < self.valuation {
            return LaurentJet::zero(top);
        }
        LaurentJet {
            valuation: self.valuation,
            coeffs: self.coeffs[..(top - self.valuation + 1) as usize].to_vec(),
        }
    }

    pub fn scale(&self, a: Complex) -> Self {
        if a == Complex::new(0.0, 0.0) {
            return LaurentJet::zero(self.top());
        }
        LaurentJet {
            valuation: self.valuation,
            coeffs: self.coeffs.iter().map(|c| c * a).collect(),
        }
    }

    /// Multiplies by `f^k`.
    pub fn shift(&self, k: i32) -> Self {
        LaurentJet { valuation: self.valuation + k, coeffs: self.coeffs.clone() }
    }

    /// Evaluates the truncated series at a numeric `f`.
    pub fn eval(&self, f: Complex) -> Complex {
        let mut acc = Complex::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * f + c;
        }
        acc * f.powi(self.valuation)
    }

    fn combine(&self, other: &LaurentJet, sign: f64) -> LaurentJet {
        let top = self.top().min(other.top());
        let lo = match (self.is_zero(), other.is_zero()) {
            (true, true) => return LaurentJet::zero(top),
            (true, false) => other.valuation,
            (false, true) => self.valuation,
            (false, false) => self.valuation.min(other.valuation),
        };
        if top < lo {
            return LaurentJet::zero(top);
        }
        let mut sum = Vec::with_capacity((top - lo + 1) as usize);
        let mut lead = None;
        for k in lo..=top {
            let a = self.coeff(k);
            let b = other.coeff(k) * sign;
            let s = a + b;
            if lead.is_none() {
                // a leading term that is only rounding residue of a cancellation
                if s.norm() <= CANCEL_TOL * (a.norm() + b.norm()) {
                    continue;
                }
                lead = Some(k);
            }
            sum.push(s);
        }
        match lead {
            Some(v) => LaurentJet { valuation: v, coeffs: sum },
            None => LaurentJet::zero(top),
        }
    }

    /// Multiplicative inverse; fails for the zero jet.
    pub fn recip(&self) -> Result<LaurentJet> {
        if self.is_zero() {
            return Err(Error::ZeroJetDivisor);
        }
        let a = &self.coeffs;
        let n = a.len();
        let a0inv = a[0].inv();
        let mut r = vec![Complex::new(0.0, 0.0); n];
        r[0] = a0inv;
        for k in 1..n {
            let mut s = Complex::new(0.0, 0.0);
            for j in 1..=k {
                s += a[j] * r[k - j];
            }
            r[k] = -s * a0inv;
        }
        Ok(LaurentJet { valuation: -self.valuation, coeffs: r })
    }

    pub fn div(&self, b: &LaurentJet) -> Result<LaurentJet> {
        Ok(self * &b.recip()?)
    }

    /// Principal square root; the valuation must be even.
    pub fn sqrt(&self) -> Result<LaurentJet> {
        if self.is_zero() {
            return Ok(LaurentJet::zero(self.top().div_euclid(2)));
        }
        if self.valuation % 2 != 0 {
            return Err(Error::OddValuation(self.valuation));
        }
        let a = &self.coeffs;
        let n = a.len();
        let mut r = vec![Complex::new(0.0, 0.0); n];
        r[0] = a[0].sqrt();
        let half_inv = (r[0] * 2.0).inv();
        for k in 1..n {
            let mut s = a[k];
            for j in 1..k {
                s -= r[j] * r[k - j];
            }
            r[k] = s * half_inv;
        }
        Ok(LaurentJet { valuation: self.valuation / 2, coeffs: r })
    }

    /// Exponential; requires a non-negative valuation.
    pub fn exp(&self) -> Result<LaurentJet> {
        if !self.is_zero() && self.valuation < 0 {
            return Err(Error::EssentialSingularity(self.valuation));
        }
        let top = self.top();
        if top < 0 {
            return Ok(LaurentJet::zero(top));
        }
        let n = top as usize + 1;
        let a: Vec<Complex> = (0..n as i32).map(|k| self.coeff(k)).collect();
        // r' = a' r, coefficient by coefficient
        let mut r = vec![Complex::new(0.0, 0.0); n];
        r[0] = a[0].exp();
        for k in 1..n {
            let mut s = Complex::new(0.0, 0.0);
            for j in 1..=k {
                s += a[j] * r[k - j] * j as f64;
            }
            r[k] = s / k as f64;
        }
        Ok(LaurentJet::new(0, r))
    }

    /// Equality after alignment and truncation to the common known range,
    /// measured against the larger coefficient magnitude.
    pub fn approx_eq(&self, other: &LaurentJet, rel_tol: f64) -> bool {
        let top = self.top().min(other.top());
        let lo = self.valuation.min(other.valuation);
        let scale = self.max_abs().max(other.max_abs()).max(f64::MIN_POSITIVE);
        (lo..=top).all(|k| (self.coeff(k) - other.coeff(k)).norm() <= rel_tol * scale)
    }
}

impl Add for &LaurentJet {
    type Output = LaurentJet;
    fn add(self, rhs: &LaurentJet) -> LaurentJet {
        self.combine(rhs, 1.0)
    }
}

impl Sub for &LaurentJet {
    type Output = LaurentJet;
    fn sub(self, rhs: &LaurentJet) -> LaurentJet {
        self.combine(rhs, -1.0)
    }
}

impl Mul for &LaurentJet {
    type Output = LaurentJet;
    fn mul(self, rhs: &LaurentJet) -> LaurentJet {
        let order = self.order().min(rhs.order());
        let valuation = self.valuation + rhs.valuation;
        if order < 0 {
            return LaurentJet::zero(valuation + order);
        }
        let n = order as usize + 1;
        let (a, b) = (&self.coeffs, &rhs.coeffs);
        let coeffs = (0..n)
            .map(|k| (0..=k).map(|j| a[j] * b[k - j]).sum())
            .collect();
        LaurentJet { valuation, coeffs }
    }
}

impl Mul<Complex> for &LaurentJet {
    type Output = LaurentJet;
    fn mul(self, rhs: Complex) -> LaurentJet {
        self.scale(rhs)
    }
}

impl Neg for &LaurentJet {
    type Output = LaurentJet;
    fn neg(self) -> LaurentJet {
        LaurentJet {
            valuation: self.valuation,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<LaurentJet> for LaurentJet {
            type Output = LaurentJet;
            fn $m(self, rhs: LaurentJet) -> LaurentJet {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&LaurentJet> for LaurentJet {
            type Output = LaurentJet;
            fn $m(self, rhs: &LaurentJet) -> LaurentJet {
                (&self).$m(rhs)
            }
        }
        impl $tr<LaurentJet> for &LaurentJet {
            type Output = LaurentJet;
            fn $m(self, rhs: LaurentJet) -> LaurentJet {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Mul<Complex> for LaurentJet {
    type Output = LaurentJet;
    fn mul(self, rhs: Complex) -> LaurentJet {
        self.scale(rhs)
    }
}

impl Neg for LaurentJet {
    type Output = LaurentJet;
    fn neg(self) -> LaurentJet {
        -&self
    }
}

pub fn jet_mul(a: &LaurentJet, b: &LaurentJet) -> LaurentJet {
    a * b
}

pub fn jet_div(a: &LaurentJet, b: &LaurentJet) -> Result<LaurentJet> {
    a.div(b)
}

pub fn jet_sqrt(a: &LaurentJet) -> Result<LaurentJet> {
    a.sqrt()
}

pub fn jet_exp(a: &LaurentJet) -> Result<LaurentJet> {
    a.exp()
}

pub fn jet_coeff(a: &LaurentJet, k: i32) -> Complex {
    a.coeff(k)
}
