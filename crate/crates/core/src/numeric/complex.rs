use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Points closer than this to a pole or branch point are treated as singular.
pub const SINGULAR_RADIUS: f64 = 1e-6;

/// A complex number `re + j·im`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Cplx {
    pub re: f64,
    pub im: f64,
}

/// The imaginary unit `j`.
pub const J: Cplx = Cplx { re: 0.0, im: 1.0 };

impl Cplx {
    pub const ZERO: Cplx = Cplx { re: 0.0, im: 0.0 };
    pub const ONE: Cplx = Cplx { re: 1.0, im: 0.0 };

    #[inline]
    pub const fn new(re: f64, im: f64) -> Self {
        Cplx { re, im }
    }

    #[inline]
    pub const fn real(re: f64) -> Self {
        Cplx { re, im: 0.0 }
    }

    #[inline]
    pub fn conj(self) -> Self {
        Cplx::new(self.re, -self.im)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.re.hypot(self.im)
    }

    #[inline]
    pub fn norm_sqr(self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    /// Principal argument in (−π, π].
    #[inline]
    pub fn arg(self) -> f64 {
        let a = self.im.atan2(self.re);
        // atan2 returns −π for (negative, −0.0); fold onto the closed end.
        if a == -PI {
            PI
        } else {
            a
        }
    }

    #[inline]
    pub fn scale(self, s: f64) -> Self {
        Cplx::new(self.re * s, self.im * s)
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn recip(self) -> Self {
        let d = self.norm_sqr();
        Cplx::new(self.re / d, -self.im / d)
    }

    pub fn exp(self) -> Self {
        c_exp(self)
    }

    pub fn cos(self) -> Self {
        c_cos(self)
    }

    pub fn sin(self) -> Self {
        c_sin(self)
    }
}

impl fmt::Display for Cplx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_sign_negative() {
            write!(f, "{}-{}j", self.re, -self.im)
        } else {
            write!(f, "{}+{}j", self.re, self.im)
        }
    }
}

impl From<f64> for Cplx {
    fn from(re: f64) -> Self {
        Cplx::real(re)
    }
}

impl Add for Cplx {
    type Output = Cplx;
    #[inline]
    fn add(self, rhs: Cplx) -> Cplx {
        Cplx::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl AddAssign for Cplx {
    #[inline]
    fn add_assign(&mut self, rhs: Cplx) {
        self.re += rhs.re;
        self.im += rhs.im;
    }
}

impl Sub for Cplx {
    type Output = Cplx;
    #[inline]
    fn sub(self, rhs: Cplx) -> Cplx {
        Cplx::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Neg for Cplx {
    type Output = Cplx;
    #[inline]
    fn neg(self) -> Cplx {
        Cplx::new(-self.re, -self.im)
    }
}

impl Mul for Cplx {
    type Output = Cplx;
    #[inline]
    fn mul(self, rhs: Cplx) -> Cplx {
        Cplx::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}

impl Mul<f64> for Cplx {
    type Output = Cplx;
    #[inline]
    fn mul(self, rhs: f64) -> Cplx {
        self.scale(rhs)
    }
}

impl Add<f64> for Cplx {
    type Output = Cplx;
    #[inline]
    fn add(self, rhs: f64) -> Cplx {
        Cplx::new(self.re + rhs, self.im)
    }
}

impl Div for Cplx {
    type Output = Cplx;
    // Smith's algorithm, avoids overflow in |rhs|².
    fn div(self, rhs: Cplx) -> Cplx {
        if rhs.re.abs() >= rhs.im.abs() {
            let r = rhs.im / rhs.re;
            let d = rhs.re + rhs.im * r;
            Cplx::new((self.re + self.im * r) / d, (self.im - self.re * r) / d)
        } else {
            let r = rhs.re / rhs.im;
            let d = rhs.re * r + rhs.im;
            Cplx::new((self.re * r + self.im) / d, (self.im * r - self.re) / d)
        }
    }
}

pub fn c_exp(z: Cplx) -> Cplx {
    let m = z.re.exp();
    let (s, c) = z.im.sin_cos();
    Cplx::new(m * c, m * s)
}

/// cos(a + jb) = cos a cosh b − j sin a sinh b
pub fn c_cos(z: Cplx) -> Cplx {
    let (s, c) = z.re.sin_cos();
    Cplx::new(c * z.im.cosh(), -s * z.im.sinh())
}

/// sin(a + jb) = sin a cosh b + j cos a sinh b
pub fn c_sin(z: Cplx) -> Cplx {
    let (s, c) = z.re.sin_cos();
    Cplx::new(s * z.im.cosh(), c * z.im.sinh())
}

/// Principal logarithm; the imaginary part lies in (−π, π].
pub fn c_ln(z: Cplx) -> Result<Cplx> {
    let r = z.norm();
    if r < SINGULAR_RADIUS {
        return Err(Error::SingularArgument {
            func: "ln",
            re: z.re,
            im: z.im,
        });
    }
    Ok(Cplx::new(r.ln(), z.arg()))
}

/// Principal power `z^n = exp(n ln z)`. Integer exponents use repeated
/// multiplication so that the result is single-valued.
pub fn c_pow(z: Cplx, n: f64) -> Result<Cplx> {
    if z.norm() < SINGULAR_RADIUS {
        return Err(Error::SingularArgument {
            func: "pow",
            re: z.re,
            im: z.im,
        });
    }
    if n.fract() == 0.0 && n.abs() <= 64.0 {
        let base = if n < 0.0 { Cplx::ONE / z } else { z };
        let mut k = n.abs() as u32;
        let mut acc = Cplx::ONE;
        let mut b = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * b;
            }
            b = b * b;
            k >>= 1;
        }
        return Ok(acc);
    }
    let l = c_ln(z)?;
    Ok(c_exp(l.scale(n)))
}

/// Distance from `z` to the nearest pole of tanh, `j(π/2 + mπ)`.
pub fn tanh_pole_distance(z: Cplx) -> f64 {
    let m = ((z.im - FRAC_PI_2) / PI).round();
    let pole = FRAC_PI_2 + m * PI;
    z.re.hypot(z.im - pole)
}

/// tanh(a + jb) = (sinh 2a + j sin 2b) / (cosh 2a + cos 2b)
pub fn c_tanh(z: Cplx) -> Result<Cplx> {
    if tanh_pole_distance(z) < SINGULAR_RADIUS {
        return Err(Error::SingularArgument {
            func: "tanh",
            re: z.re,
            im: z.im,
        });
    }
    let a2 = 2.0 * z.re;
    if a2.abs() > 40.0 {
        // |tanh − ±1| < 4e-35 here; cosh would overflow long before sin 2b matters.
        let s = a2.signum();
        let e = (-a2.abs()).exp();
        let (s2, c2) = (2.0 * z.im).sin_cos();
        return Ok(Cplx::new(s * (1.0 - 2.0 * e * c2), 2.0 * e * s2));
    }
    let (s2, c2) = (2.0 * z.im).sin_cos();
    let d = a2.cosh() + c2;
    Ok(Cplx::new(a2.sinh() / d, s2 / d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_of_one_is_zero() {
        assert_eq!(c_ln(Cplx::ONE).unwrap(), Cplx::ZERO);
    }

    #[test]
    fn ln_branch_on_negative_axis() {
        let l = c_ln(Cplx::new(-1.0, 0.0)).unwrap();
        assert!((l.im - PI).abs() < 1e-15);
        let l = c_ln(Cplx::new(-1.0, -0.0)).unwrap();
        assert!((l.im - PI).abs() < 1e-15);
    }

    #[test]
    fn ln_and_pow_reject_zero() {
        assert!(matches!(
            c_ln(Cplx::ZERO),
            Err(Error::SingularArgument { func: "ln", .. })
        ));
        assert!(c_pow(Cplx::new(1e-8, 0.0), -1.0).is_err());
    }

    #[test]
    fn tanh_is_odd_and_zero_at_origin() {
        assert_eq!(c_tanh(Cplx::ZERO).unwrap(), Cplx::ZERO);
        let z = Cplx::new(0.3, -0.7);
        let a = c_tanh(z).unwrap();
        let b = c_tanh(-z).unwrap();
        assert!((a + b).norm() < 1e-15);
    }

    #[test]
    fn tanh_pole_is_singular() {
        let pole = Cplx::new(0.0, 3.0 * FRAC_PI_2);
        assert!(c_tanh(pole).is_err());
        assert!(c_tanh(pole + Cplx::new(1e-3, 0.0)).is_ok());
    }

    #[test]
    fn tanh_matches_exponential_form() {
        for &(a, b) in &[(0.2, 0.4), (-1.5, 2.0), (3.0, -0.1), (25.0, 1.0)] {
            let z = Cplx::new(a, b);
            let e2 = c_exp(z.scale(2.0));
            let want = (e2 - Cplx::ONE) / (e2 + Cplx::ONE);
            let got = c_tanh(z).unwrap();
            assert!((got - want).norm() < 1e-13, "{z}: {got} vs {want}");
        }
    }

    #[test]
    fn cos_of_imaginary_is_cosh() {
        let v = c_cos(Cplx::new(0.0, 1.0));
        let want = (1f64.exp() + (-1f64).exp()) / 2.0;
        assert!((v.re - want).abs() < 1e-15);
        assert_eq!(v.im, 0.0);
        assert!((v.re - 1.5430806348152437).abs() < 1e-15);
        // sin(jy) = j sinh(y)
        let s = c_sin(Cplx::new(0.0, 1.0));
        assert!((s.im - 1f64.sinh()).abs() < 1e-15 && s.re == 0.0);
    }

    #[test]
    fn integer_and_fractional_powers() {
        let z = Cplx::new(1.2, -0.7);
        let p = c_pow(z, 3.0).unwrap();
        assert!((p - z * z * z).norm() < 1e-14);
        let q = c_pow(z, -1.0).unwrap();
        assert!((q * z - Cplx::ONE).norm() < 1e-15);
        let h = c_pow(z, 0.5).unwrap();
        assert!((h * h - z).norm() < 1e-14);
        assert!(h.re > 0.0);
    }

    #[test]
    fn division_handles_both_branches() {
        let a = Cplx::new(3.0, 4.0);
        for b in [Cplx::new(2.0, 0.5), Cplx::new(0.5, 2.0)] {
            let q = a / b;
            assert!((q * b - a).norm() < 1e-14);
        }
    }
}
