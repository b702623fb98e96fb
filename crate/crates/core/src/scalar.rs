//! Exact coefficients in the field of Gaussian rationals extended by `sqrt2`.
//!
//! A [`Scalar`] is `(a + b*sqrt2) + i*(c + d*sqrt2)` with `a, b, c, d` rational.
//! The real and imaginary parts each live in the real quadratic field
//! `Q(sqrt2)`, represented by [`Surd`].

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::ScalarError;

/// An element `rat + rt2*sqrt2` of `Q(sqrt2)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Surd {
    pub rat: BigRational,
    pub rt2: BigRational,
}

impl Surd {
    pub fn new(rat: BigRational, rt2: BigRational) -> Self {
        Surd { rat, rt2 }
    }

    pub fn from_rational(rat: BigRational) -> Self {
        Surd { rat, rt2: BigRational::zero() }
    }

    pub fn zero() -> Self {
        Surd::default()
    }

    pub fn one() -> Self {
        Surd::from_rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.rt2.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.rt2.is_zero()
    }

    /// Galois conjugate `rat - rt2*sqrt2`.
    pub fn galois(&self) -> Surd {
        Surd { rat: self.rat.clone(), rt2: -&self.rt2 }
    }

    /// `rat^2 - 2*rt2^2`, the field norm down to `Q`. Zero only for zero.
    pub fn norm(&self) -> BigRational {
        &self.rat * &self.rat - BigRational::from_integer(BigInt::from(2)) * &self.rt2 * &self.rt2
    }

    pub fn inverse(&self) -> Option<Surd> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        let g = self.galois();
        Some(Surd { rat: g.rat / &n, rt2: g.rt2 / n })
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.rat) + rational_to_f64(&self.rt2) * std::f64::consts::SQRT_2
    }

    /// Sign of the real number this represents.
    pub fn signum(&self) -> i32 {
        // a + b*sqrt2 with a, b of the same sign is trivially signed; otherwise
        // compare a^2 with 2 b^2.
        let a = self.rat.signum();
        let b = self.rt2.signum();
        let sa = sign_of(&a);
        let sb = sign_of(&b);
        if sa == 0 {
            return sb;
        }
        if sb == 0 || sa == sb {
            return sa;
        }
        let n = self.norm();
        if n.is_positive() {
            sa
        } else {
            sb
        }
    }
}

fn sign_of(r: &BigRational) -> i32 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => r.to_f64().unwrap_or(f64::NAN),
    }
}

impl Add for &Surd {
    type Output = Surd;
    fn add(self, rhs: &Surd) -> Surd {
        Surd { rat: &self.rat + &rhs.rat, rt2: &self.rt2 + &rhs.rt2 }
    }
}

impl Sub for &Surd {
    type Output = Surd;
    fn sub(self, rhs: &Surd) -> Surd {
        Surd { rat: &self.rat - &rhs.rat, rt2: &self.rt2 - &rhs.rt2 }
    }
}

impl Mul for &Surd {
    type Output = Surd;
    fn mul(self, rhs: &Surd) -> Surd {
        let two = BigRational::from_integer(BigInt::from(2));
        Surd {
            rat: &self.rat * &rhs.rat + two * &self.rt2 * &rhs.rt2,
            rt2: &self.rat * &rhs.rt2 + &self.rt2 * &rhs.rat,
        }
    }
}

impl Neg for &Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd { rat: -&self.rat, rt2: -&self.rt2 }
    }
}

/// Exact complex coefficient `re + i*im` with `re, im` in `Q(sqrt2)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    pub re: Surd,
    pub im: Surd,
}

/// Which arithmetic operation [`Scalar::arith`] performs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl Scalar {
    pub fn new(re: Surd, im: Surd) -> Self {
        Scalar { re, im }
    }

    /// `(a + b*sqrt2) + i*(c + d*sqrt2)`.
    pub fn from_parts(a: BigRational, b: BigRational, c: BigRational, d: BigRational) -> Self {
        Scalar { re: Surd::new(a, b), im: Surd::new(c, d) }
    }

    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::from_rational(BigRational::one())
    }

    pub fn i() -> Self {
        Scalar { re: Surd::zero(), im: Surd::one() }
    }

    pub fn sqrt2() -> Self {
        Scalar { re: Surd::new(BigRational::zero(), BigRational::one()), im: Surd::zero() }
    }

    /// `1/sqrt2 = sqrt2/2`.
    pub fn inv_sqrt2() -> Self {
        Scalar { re: Surd::new(BigRational::zero(), ratio(1, 2)), im: Surd::zero() }
    }

    pub fn from_rational(r: BigRational) -> Self {
        Scalar { re: Surd::from_rational(r), im: Surd::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Scalar::from_rational(ratio(num, den))
    }

    /// Gaussian rational `re + i*im`.
    pub fn gaussian(re: BigRational, im: BigRational) -> Self {
        Scalar { re: Surd::from_rational(re), im: Surd::from_rational(im) }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        *self == Scalar::one()
    }

    /// True when the `sqrt2` components vanish.
    pub fn is_gaussian_rational(&self) -> bool {
        self.re.is_rational() && self.im.is_rational()
    }

    /// `Some(r)` when the value is a plain rational.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.im.is_zero() && self.re.is_rational() {
            Some(&self.re.rat)
        } else {
            None
        }
    }

    pub fn conj(&self) -> Scalar {
        Scalar { re: self.re.clone(), im: -&self.im }
    }

    /// `|z|^2 = re^2 + im^2`, an element of `Q(sqrt2)`.
    pub fn modulus_squared(&self) -> Surd {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn inverse(&self) -> Result<Scalar, ScalarError> {
        // 1/z = conj(z) / |z|^2; |z|^2 is a nonzero real in Q(sqrt2) unless z = 0.
        let inv_norm = self.modulus_squared().inverse().ok_or(ScalarError::DivisionByZero)?;
        let c = self.conj();
        Ok(Scalar { re: &c.re * &inv_norm, im: &c.im * &inv_norm })
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        Ok(self * &rhs.inverse()?)
    }

    pub fn arith(&self, rhs: &Scalar, op: ArithOp) -> Result<Scalar, ScalarError> {
        match op {
            ArithOp::Add => Ok(self + rhs),
            ArithOp::Sub => Ok(self - rhs),
            ArithOp::Mul => Ok(self * rhs),
            ArithOp::Div => self.checked_div(rhs),
        }
    }

    pub fn pow(&self, exp: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

pub(crate) fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        Scalar { re: &(&self.re * &rhs.re) - &(&self.im * &rhs.im), im: &(&self.re * &rhs.im) + &(&self.im * &rhs.re) }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -&self.re, im: -&self.im }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A product `coefficient*symbol` (e.g. `(3/2)*i*sqrt2`) in grammar syntax,
/// without a leading sign.
fn fmt_part(mag: &BigRational, symbol: &str) -> String {
    let one = mag.is_one();
    match (symbol.is_empty(), one) {
        (true, _) => fmt_rational(mag),
        (false, true) => symbol.to_string(),
        (false, false) if mag.is_integer() => format!("{}*{}", fmt_rational(mag), symbol),
        (false, false) => format!("({})*{}", fmt_rational(mag), symbol),
    }
}

impl Scalar {
    /// Signed parts in the fixed order `1, sqrt2, i, i*sqrt2`.
    pub(crate) fn signed_parts(&self) -> Vec<(bool, String)> {
        [(&self.re.rat, ""), (&self.re.rt2, "sqrt2"), (&self.im.rat, "i"), (&self.im.rt2, "i*sqrt2")]
            .into_iter()
            .filter(|(r, _)| !r.is_zero())
            .map(|(r, sym)| (r.is_negative(), fmt_part(&r.abs(), sym)))
            .collect()
    }

    /// Grammar text that can be used as a multiplicative factor:
    /// single parts are bare (`-1/2` excepted, which is parenthesised), sums are
    /// parenthesised.
    pub fn to_factor_string(&self) -> String {
        let parts = self.signed_parts();
        match parts.len() {
            0 => "0".to_string(),
            1 => {
                let (neg, body) = &parts[0];
                let bare = !body.contains('/') || body.starts_with('(');
                match (neg, bare) {
                    (false, true) => body.clone(),
                    (false, false) => format!("({body})"),
                    (true, _) => format!("(-{body})"),
                }
            }
            _ => format!("({})", join_signed(&parts)),
        }
    }
}

pub(crate) fn join_signed(parts: &[(bool, String)]) -> String {
    let mut out = String::new();
    for (k, (neg, body)) in parts.iter().enumerate() {
        match (k, neg) {
            (0, false) => out.push_str(body),
            (0, true) => {
                out.push('-');
                out.push_str(body);
            }
            (_, false) => {
                out.push_str(" + ");
                out.push_str(body);
            }
            (_, true) => {
                out.push_str(" - ");
                out.push_str(body);
            }
        }
    }
    out
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = self.signed_parts();
        if parts.is_empty() {
            return f.write_str("0");
        }
        f.write_str(&join_signed(&parts))
    }
}
