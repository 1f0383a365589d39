//! Scalar, series and small-matrix arithmetic shared by the rest of the crate.

pub mod jet;
pub mod mat3;

pub use jet::{jet_coeff, jet_div, jet_exp, jet_mul, jet_sqrt, LaurentJet};
pub use mat3::{mat3_inv, mat3_inv_with, CMat3, CVec3, JetVec3, DEFAULT_DET_THRESHOLD};

/// Complex scalar used throughout.
pub type Complex = num_complex::Complex64;

pub const I: Complex = Complex::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

#[inline]
pub fn re(x: f64) -> Complex {
    Complex::new(x, 0.0)
}

/// True when both parts are finite.
#[inline]
pub fn is_finite(z: Complex) -> bool {
    z.re.is_finite() && z.im.is_finite()
}
