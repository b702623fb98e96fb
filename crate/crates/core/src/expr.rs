//! Canonical sums of exponential atoms over the half-integer frequency lattice.
//!
//! Every function of the four angles `theta, phi` (final direction) and
//! `theta_p, phi_p` (initial direction) handled by the engine is a finite sum
//! `sum_k c_k * exp(i*(m_k . angles)/2)` with exact [`Scalar`] coefficients.
//! The atoms are linearly independent, so two expressions are equal as
//! functions exactly when their term maps are equal.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// The four angle variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Angle {
    Theta,
    Phi,
    ThetaP,
    PhiP,
}

impl Angle {
    pub const ALL: [Angle; 4] = [Angle::Theta, Angle::Phi, Angle::ThetaP, Angle::PhiP];

    pub fn name(self) -> &'static str {
        match self {
            Angle::Theta => "theta",
            Angle::Phi => "phi",
            Angle::ThetaP => "theta_p",
            Angle::PhiP => "phi_p",
        }
    }

    pub fn from_name(name: &str) -> Option<Angle> {
        Angle::ALL.into_iter().find(|a| a.name() == name)
    }

    fn index(self) -> usize {
        self as usize
    }
}

/// Frequencies in half-angle units: the atom `exp(i*(m_theta*theta + m_phi*phi
/// + m_theta_p*theta_p + m_phi_p*phi_p)/2)`. Ordered lexicographically.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FreqVec {
    pub m_theta: i32,
    pub m_phi: i32,
    pub m_theta_p: i32,
    pub m_phi_p: i32,
}

impl FreqVec {
    pub const ZERO: FreqVec = FreqVec { m_theta: 0, m_phi: 0, m_theta_p: 0, m_phi_p: 0 };

    pub fn new(m_theta: i32, m_phi: i32, m_theta_p: i32, m_phi_p: i32) -> Self {
        FreqVec { m_theta, m_phi, m_theta_p, m_phi_p }
    }

    /// Atom depending only on the final-direction angles.
    pub fn theta_phi(m_theta: i32, m_phi: i32) -> Self {
        FreqVec::new(m_theta, m_phi, 0, 0)
    }

    /// Single-angle atom `exp(i*m*angle/2)`.
    pub fn single(angle: Angle, m: i32) -> Self {
        let mut f = FreqVec::ZERO;
        f.set(angle, m);
        f
    }

    pub fn as_array(&self) -> [i32; 4] {
        [self.m_theta, self.m_phi, self.m_theta_p, self.m_phi_p]
    }

    pub fn from_array(a: [i32; 4]) -> Self {
        FreqVec::new(a[0], a[1], a[2], a[3])
    }

    pub fn get(&self, angle: Angle) -> i32 {
        self.as_array()[angle.index()]
    }

    pub fn set(&mut self, angle: Angle, m: i32) {
        let mut a = self.as_array();
        a[angle.index()] = m;
        *self = FreqVec::from_array(a);
    }

    pub fn is_zero(&self) -> bool {
        *self == FreqVec::ZERO
    }

    pub fn negate(&self) -> FreqVec {
        FreqVec::from_array(self.as_array().map(|m| -m))
    }

    /// Phase `(m . angles)/2` at the given angles.
    pub fn phase(&self, angles: &Angles) -> f64 {
        let a = angles.as_array();
        self.as_array().iter().zip(a.iter()).map(|(&m, &x)| m as f64 * x).sum::<f64>() / 2.0
    }
}

impl Add for FreqVec {
    type Output = FreqVec;
    fn add(self, rhs: FreqVec) -> FreqVec {
        let a = self.as_array();
        let b = rhs.as_array();
        FreqVec::from_array([a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]])
    }
}

impl fmt::Display for FreqVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}, {}]", self.m_theta, self.m_phi, self.m_theta_p, self.m_phi_p)
    }
}

/// A point in angle space, in radians.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Angles {
    pub theta: f64,
    pub phi: f64,
    pub theta_p: f64,
    pub phi_p: f64,
}

impl Angles {
    /// Final-direction angles with the initial direction on the z axis.
    pub fn new(theta: f64, phi: f64) -> Self {
        Angles { theta, phi, theta_p: 0.0, phi_p: 0.0 }
    }

    pub fn with_initial(theta: f64, phi: f64, theta_p: f64, phi_p: f64) -> Self {
        Angles { theta, phi, theta_p, phi_p }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.theta, self.phi, self.theta_p, self.phi_p]
    }

    pub fn shifted(&self, angle: Angle, delta: f64) -> Angles {
        let mut out = *self;
        match angle {
            Angle::Theta => out.theta += delta,
            Angle::Phi => out.phi += delta,
            Angle::ThetaP => out.theta_p += delta,
            Angle::PhiP => out.phi_p += delta,
        }
        out
    }
}

/// Canonical finite sum of exponential atoms. No stored coefficient is zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Expr {
    terms: BTreeMap<FreqVec, Scalar>,
}

impl Expr {
    pub fn zero() -> Self {
        Expr::default()
    }

    pub fn one() -> Self {
        Expr::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Expr::term(FreqVec::ZERO, c)
    }

    pub fn term(freq: FreqVec, coeff: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(freq, coeff);
        }
        Expr { terms }
    }

    /// Unit-coefficient atom.
    pub fn atom(freq: FreqVec) -> Self {
        Expr::term(freq, Scalar::one())
    }

    /// Builds from arbitrary (possibly repeated, possibly zero) terms.
    pub fn from_terms<I: IntoIterator<Item = (FreqVec, Scalar)>>(iter: I) -> Self {
        let mut e = Expr::zero();
        for (f, c) in iter {
            e.add_term(f, &c);
        }
        e
    }

    /// `exp(i*m*angle/2)`.
    pub fn exp_half(angle: Angle, m: i32) -> Self {
        Expr::atom(FreqVec::single(angle, m))
    }

    /// `cos(m*angle/2) = (e^{i m a/2} + e^{-i m a/2})/2`.
    pub fn cos_half(angle: Angle, m: i32) -> Self {
        let half = Scalar::from_ratio(1, 2);
        Expr::from_terms([(FreqVec::single(angle, m), half.clone()), (FreqVec::single(angle, -m), half)])
    }

    /// `sin(m*angle/2) = (e^{i m a/2} - e^{-i m a/2})/(2i)`.
    pub fn sin_half(angle: Angle, m: i32) -> Self {
        // 1/(2i) = -i/2
        let c = Scalar::gaussian(num_traits::Zero::zero(), crate::scalar::ratio(-1, 2));
        Expr::from_terms([(FreqVec::single(angle, m), c.clone()), (FreqVec::single(angle, -m), -c)])
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&FreqVec, &Scalar)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn coeff(&self, freq: &FreqVec) -> Scalar {
        self.terms.get(freq).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficient if this is a constant (possibly zero) function.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => self.terms.get(&FreqVec::ZERO).cloned(),
            _ => None,
        }
    }

    /// The only term, if there is exactly one.
    pub fn single_term(&self) -> Option<(FreqVec, &Scalar)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(f, c)| (*f, c))
        } else {
            None
        }
    }

    fn add_term(&mut self, freq: FreqVec, coeff: &Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&freq) {
            Some(c) => {
                *c += coeff;
                if c.is_zero() {
                    self.terms.remove(&freq);
                }
            }
            None => {
                self.terms.insert(freq, coeff.clone());
            }
        }
    }

    pub fn scale(&self, c: &Scalar) -> Expr {
        if c.is_zero() {
            return Expr::zero();
        }
        Expr { terms: self.terms.iter().map(|(f, v)| (*f, v * c)).collect() }
    }

    pub fn pow(&self, exp: u32) -> Expr {
        let mut acc = Expr::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Complex conjugate for real angles: coefficients conjugated, frequencies negated.
    pub fn conj(&self) -> Expr {
        Expr { terms: self.terms.iter().map(|(f, c)| (f.negate(), c.conj())).collect() }
    }

    /// Partial derivative: `d/da exp(i*m*a/2) = (i*m/2) exp(i*m*a/2)`.
    pub fn diff(&self, angle: Angle) -> Expr {
        let mut terms = BTreeMap::new();
        for (f, c) in &self.terms {
            let m = f.get(angle);
            if m == 0 {
                continue;
            }
            let factor = Scalar::gaussian(num_traits::Zero::zero(), crate::scalar::ratio(m as i64, 2));
            terms.insert(*f, c * &factor);
        }
        Expr { terms }
    }

    /// `k`-th partial derivative.
    pub fn diff_n(&self, angle: Angle, k: u32) -> Expr {
        let mut out = self.clone();
        for _ in 0..k {
            if out.is_zero() {
                break;
            }
            out = out.diff(angle);
        }
        out
    }

    /// Sets `angle = 0`: the atom's dependence on that angle becomes 1.
    pub fn subst_zero(&self, angle: Angle) -> Expr {
        Expr::from_terms(self.terms.iter().map(|(f, c)| {
            let mut g = *f;
            g.set(angle, 0);
            (g, c.clone())
        }))
    }

    pub fn eval(&self, angles: &Angles) -> Complex64 {
        self.terms.iter().map(|(f, c)| c.to_complex() * Complex64::from_polar(1.0, f.phase(angles))).sum()
    }

    /// Largest `|m|` over all atoms and angles.
    pub fn max_frequency(&self) -> i32 {
        self.terms.keys().flat_map(|f| f.as_array()).map(i32::abs).max().unwrap_or(0)
    }
}

impl Add for &Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        let mut out = self.clone();
        for (f, c) in &rhs.terms {
            out.add_term(*f, c);
        }
        out
    }
}

impl Sub for &Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        let mut out = self.clone();
        for (f, c) in &rhs.terms {
            out.add_term(*f, &-c);
        }
        out
    }
}

impl Mul for &Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        let mut out = Expr::zero();
        for (fa, ca) in &self.terms {
            for (fb, cb) in &rhs.terms {
                out.add_term(*fa + *fb, &(ca * cb));
            }
        }
        out
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr { terms: self.terms.iter().map(|(f, c)| (*f, -c)).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                (&self).$method(rhs)
            }
        }
        impl $tr<Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -&self
    }
}

impl From<Scalar> for Expr {
    fn from(c: Scalar) -> Self {
        Expr::constant(c)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::print(self, crate::parser::PrintStyle::Trig))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn cos_t2() -> Expr {
        Expr::cos_half(Angle::Theta, 1)
    }

    fn sin_t2() -> Expr {
        Expr::sin_half(Angle::Theta, 1)
    }

    #[test]
    fn euler_identity_is_canonical() {
        let sum = &Expr::exp_half(Angle::Theta, 1) + &Expr::exp_half(Angle::Theta, -1);
        assert_eq!(sum, cos_t2().scale(&Scalar::from_int(2)));
    }

    #[test]
    fn additive_identity_and_cancellation() {
        assert_eq!(&cos_t2() + &Expr::zero(), cos_t2());
        assert!((&cos_t2() + &(-&cos_t2())).is_empty());
    }

    #[test]
    fn half_angle_square() {
        let sq = &cos_t2() * &cos_t2();
        let half = Scalar::from_ratio(1, 2);
        let expected = &Expr::constant(half.clone()) + &Expr::cos_half(Angle::Theta, 2).scale(&half);
        assert_eq!(sq, expected);
    }

    #[test]
    fn phi_phase_cancels() {
        let p = &Expr::exp_half(Angle::Phi, 1) * &Expr::exp_half(Angle::Phi, -1);
        assert_eq!(p, Expr::one());
    }

    #[test]
    fn sin_theta_times_sin_half_theta() {
        // sin t = (e^{it} - e^{-it})/(2i), sin(t/2) = (e^{it/2} - e^{-it/2})/(2i)
        // product = -(1/4)(e^{3it/2} - e^{it/2} - e^{-it/2} + e^{-3it/2})
        let p = &Expr::sin_half(Angle::Theta, 2) * &sin_t2();
        let q = Scalar::from_ratio(1, 4);
        let expected = Expr::from_terms([
            (FreqVec::theta_phi(3, 0), -&q),
            (FreqVec::theta_phi(1, 0), q.clone()),
            (FreqVec::theta_phi(-1, 0), q.clone()),
            (FreqVec::theta_phi(-3, 0), -&q),
        ]);
        assert_eq!(p, expected);
        let ms: Vec<i32> = p.terms().map(|(f, _)| f.m_theta).collect();
        assert_eq!(ms, vec![-3, -1, 1, 3]);
    }

    #[test]
    fn conjugation() {
        assert_eq!(Expr::exp_half(Angle::Phi, 2).conj(), Expr::exp_half(Angle::Phi, -2));
        assert_eq!(cos_t2().conj(), cos_t2());
        let e = Expr::term(FreqVec::theta_phi(-1, 1), Scalar::i());
        assert_eq!(e.conj(), Expr::term(FreqVec::theta_phi(1, -1), -Scalar::i()));
    }

    #[test]
    fn derivatives() {
        let d = Expr::exp_half(Angle::Theta, 1).diff(Angle::Theta);
        assert_eq!(d, Expr::term(FreqVec::theta_phi(1, 0), Scalar::gaussian(num_traits::Zero::zero(), ratio(1, 2))));
        assert_eq!(cos_t2().diff(Angle::Theta), sin_t2().scale(&Scalar::from_ratio(-1, 2)));
        assert!(cos_t2().diff(Angle::Phi).is_empty());
    }

    #[test]
    fn substitution_at_zero() {
        assert_eq!(Expr::cos_half(Angle::ThetaP, 1).subst_zero(Angle::ThetaP), Expr::one());
        let mixed = &Expr::exp_half(Angle::Phi, 2) * &Expr::exp_half(Angle::PhiP, -2);
        assert_eq!(mixed.subst_zero(Angle::PhiP), Expr::exp_half(Angle::Phi, 2));
    }

    #[test]
    fn evaluation() {
        assert!((cos_t2().eval(&Angles::new(0.0, 0.0)) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let v = Expr::exp_half(Angle::Phi, 2).eval(&Angles::new(0.0, std::f64::consts::PI));
        assert!((v - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn constant_detection() {
        assert_eq!(Expr::zero().as_constant(), Some(Scalar::zero()));
        assert_eq!(Expr::constant(Scalar::i()).as_constant(), Some(Scalar::i()));
        assert_eq!(cos_t2().as_constant(), None);
        assert_eq!(Expr::exp_half(Angle::Theta, 1).as_constant(), None);
    }
}
