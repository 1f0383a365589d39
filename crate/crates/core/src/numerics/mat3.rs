//! Fixed-size 3-vectors and 3x3 matrices over the complex numbers.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use super::{Complex, LaurentJet};
use crate::error::{Error, Result};

/// Default relative determinant threshold for [`mat3_inv`]: `|det M|` must
/// exceed this times `max|M_ij|^3`.
pub const DEFAULT_DET_THRESHOLD: f64 = 1e-12;

const ZERO: Complex = Complex::new(0.0, 0.0);
const ONE: Complex = Complex::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CVec3(pub [Complex; 3]);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CMat3(pub [[Complex; 3]; 3]);

/// Three jets sharing one truncation order.
#[derive(Debug, Clone, PartialEq)]
pub struct JetVec3(pub [LaurentJet; 3]);

impl CVec3 {
    pub fn new(a: Complex, b: Complex, c: Complex) -> Self {
        CVec3([a, b, c])
    }

    pub fn zero() -> Self {
        CVec3([ZERO; 3])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, a: Complex) -> Self {
        CVec3(self.0.map(|z| z * a))
    }

    pub fn conj(&self) -> Self {
        CVec3(self.0.map(|z| z.conj()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Index<usize> for CVec3 {
    type Output = Complex;
    fn index(&self, i: usize) -> &Complex {
        &self.0[i]
    }
}

impl IndexMut<usize> for CVec3 {
    fn index_mut(&mut self, i: usize) -> &mut Complex {
        &mut self.0[i]
    }
}

impl Add for CVec3 {
    type Output = CVec3;
    fn add(self, rhs: CVec3) -> CVec3 {
        CVec3([self[0] + rhs[0], self[1] + rhs[1], self[2] + rhs[2]])
    }
}

impl Sub for CVec3 {
    type Output = CVec3;
    fn sub(self, rhs: CVec3) -> CVec3 {
        CVec3([self[0] - rhs[0], self[1] - rhs[1], self[2] - rhs[2]])
    }
}

impl CMat3 {
    pub fn zero() -> Self {
        CMat3([[ZERO; 3]; 3])
    }

    pub fn identity() -> Self {
        CMat3::diag(ONE, ONE, ONE)
    }

    pub fn diag(a: Complex, b: Complex, c: Complex) -> Self {
        CMat3([[a, ZERO, ZERO], [ZERO, b, ZERO], [ZERO, ZERO, c]])
    }

    pub fn from_cols(a: CVec3, b: CVec3, c: CVec3) -> Self {
        CMat3([[a[0], b[0], c[0]], [a[1], b[1], c[1]], [a[2], b[2], c[2]]])
    }

    /// `a b^H`
    pub fn outer_conj(a: &CVec3, b: &CVec3) -> Self {
        let mut m = CMat3::zero();
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = a[i] * b[j].conj();
            }
        }
        m
    }

    pub fn scale(&self, a: Complex) -> Self {
        CMat3(self.0.map(|r| r.map(|z| z * a)))
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        CMat3(std::array::from_fn(|i| std::array::from_fn(|j| m[j][i].conj())))
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn det(&self) -> Complex {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Transposed cofactor matrix, so that `M adj(M) = det(M) I`.
    pub fn adjugate(&self) -> Self {
        let m = &self.0;
        let cof = |r0: usize, r1: usize, c0: usize, c1: usize| {
            m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]
        };
        CMat3([
            [cof(1, 2, 1, 2), -cof(0, 2, 1, 2), cof(0, 1, 1, 2)],
            [-cof(1, 2, 0, 2), cof(0, 2, 0, 2), -cof(0, 1, 0, 2)],
            [cof(1, 2, 0, 1), -cof(0, 2, 0, 1), cof(0, 1, 0, 1)],
        ])
    }

    pub fn mul_vec(&self, v: &CVec3) -> CVec3 {
        let m = &self.0;
        CVec3(std::array::from_fn(|i| m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2]))
    }

    pub fn mul_jets(&self, v: &JetVec3) -> JetVec3 {
        let m = &self.0;
        JetVec3(std::array::from_fn(|i| {
            let a = &v.0[0] * m[i][0];
            let b = &v.0[1] * m[i][1];
            let c = &v.0[2] * m[i][2];
            &(&a + &b) + &c
        }))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Index<(usize, usize)> for CMat3 {
    type Output = Complex;
    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        &self.0[i][j]
    }
}

impl IndexMut<(usize, usize)> for CMat3 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex {
        &mut self.0[i][j]
    }
}

impl Add for CMat3 {
    type Output = CMat3;
    fn add(self, rhs: CMat3) -> CMat3 {
        CMat3(std::array::from_fn(|i| std::array::from_fn(|j| self.0[i][j] + rhs.0[i][j])))
    }
}

impl Sub for CMat3 {
    type Output = CMat3;
    fn sub(self, rhs: CMat3) -> CMat3 {
        CMat3(std::array::from_fn(|i| std::array::from_fn(|j| self.0[i][j] - rhs.0[i][j])))
    }
}

impl Mul for CMat3 {
    type Output = CMat3;
    fn mul(self, rhs: CMat3) -> CMat3 {
        let (a, b) = (&self.0, &rhs.0);
        CMat3(std::array::from_fn(|i| {
            std::array::from_fn(|j| a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j])
        }))
    }
}

impl Mul<CVec3> for CMat3 {
    type Output = CVec3;
    fn mul(self, rhs: CVec3) -> CVec3 {
        self.mul_vec(&rhs)
    }
}

impl Mul<&JetVec3> for CMat3 {
    type Output = JetVec3;
    fn mul(self, rhs: &JetVec3) -> JetVec3 {
        self.mul_jets(rhs)
    }
}

impl JetVec3 {
    /// Common truncation order (the smallest of the three components).
    pub fn order(&self) -> i32 {
        self.0.iter().map(|j| j.order()).min().unwrap_or(-1)
    }

    /// Common known top power.
    pub fn top(&self) -> i32 {
        self.0.iter().map(|j| j.top()).min().unwrap_or(-1)
    }

    /// Coefficient vector of `f^k`.
    pub fn coeff(&self, k: i32) -> CVec3 {
        CVec3(std::array::from_fn(|i| self.0[i].coeff(k)))
    }

    pub fn scale(&self, a: Complex) -> Self {
        JetVec3(std::array::from_fn(|i| self.0[i].scale(a)))
    }
}

/// 3x3 inverse by adjugate over determinant, with the default threshold.
pub fn mat3_inv(m: &CMat3) -> Result<CMat3> {
    mat3_inv_with(m, DEFAULT_DET_THRESHOLD)
}

/// 3x3 inverse; fails when `|det M| <= rel_threshold * max|M_ij|^3`.
pub fn mat3_inv_with(m: &CMat3, rel_threshold: f64) -> Result<CMat3> {
    let det = m.det();
    let threshold = rel_threshold * m.max_abs().powi(3);
    if !(det.norm() > threshold) {
        return Err(Error::SingularMatrix { det_abs: det.norm(), threshold });
    }
    let x = m.adjugate().scale(det.inv());
    // one Newton step, X <- X (2I - M X), recovers the digits the cofactor
    // products lose at large condition numbers
    let two = CMat3::identity().scale(Complex::new(2.0, 0.0));
    Ok(x * (two - *m * x))
}
