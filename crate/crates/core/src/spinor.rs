//! Two-component probability-amplitude spinors parametrized by the final
//! quantization direction `(theta, phi)` and, for the generalized family, the
//! initial direction `(theta_p, phi_p)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::SpinorError;
use crate::expr::{Angle, Expr, FreqVec};
use crate::parser::{print, PrintStyle};
use crate::scalar::{Scalar, Surd};

/// Initial quantization axis / construction of a spinor family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    /// Constant column vectors `(1,0)`, `(0,1)`.
    Pauli,
    /// Full four-angle two-direction amplitudes.
    Generalized,
    Z,
    X,
    /// y-family without any theta phase.
    YUnphased,
    /// y-family with `exp(-i*theta/2)` applied to both vectors, as printed.
    YPrinted,
    /// y-family with `exp(+i*theta/2)` on the + vector and `exp(-i*theta/2)` on the - vector.
    YCorrected,
    /// Anything assembled by hand (ansatz files).
    Custom,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::Pauli => "pauli",
            Axis::Generalized => "generalized",
            Axis::Z => "z",
            Axis::X => "x",
            Axis::YUnphased => "y_unphased",
            Axis::YPrinted => "y_printed",
            Axis::YCorrected => "y_corrected",
            Axis::Custom => "custom",
        }
    }
}

/// Spin projection label, in units of hbar.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+1/2")]
    Plus,
    #[serde(rename = "-1/2")]
    Minus,
}

impl Sign {
    pub fn eigenvalue(self) -> Scalar {
        match self {
            Sign::Plus => Scalar::from_ratio(1, 2),
            Sign::Minus => Scalar::from_ratio(-1, 2),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    pub fn opposite(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpinorMeta {
    pub axis: Axis,
    pub sign: Sign,
    /// Carries the global `exp(-+i*phi/2)` phases that make the differential
    /// eigenrelations hold.
    pub symmetrized: bool,
}

/// Named families, one per CLI identifier stem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Pauli,
    Generalized,
    Z,
    ZUnsymmetrized,
    X,
    YUnphased,
    YPrinted,
    YCorrected,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::Pauli,
        Family::Generalized,
        Family::Z,
        Family::ZUnsymmetrized,
        Family::X,
        Family::YUnphased,
        Family::YPrinted,
        Family::YCorrected,
    ];

    /// Families whose members are eigenvectors of the differential spin operators.
    pub const SYMMETRIZED: [Family; 3] = [Family::Z, Family::X, Family::YCorrected];

    pub fn stem(self) -> &'static str {
        match self {
            Family::Pauli => "pauli",
            Family::Generalized => "gen",
            Family::Z => "z",
            Family::ZUnsymmetrized => "z",
            Family::X => "x",
            Family::YUnphased => "y",
            Family::YPrinted => "yprinted",
            Family::YCorrected => "ycorr",
        }
    }

    /// CLI identifier, e.g. `z+unsym`.
    pub fn id(self, sign: Sign) -> String {
        let suffix = if self == Family::ZUnsymmetrized { "unsym" } else { "" };
        format!("{}{}{}", self.stem(), sign.symbol(), suffix)
    }

    pub fn build(self, sign: Sign) -> Spinor {
        build_eigenvector(self, sign)
    }
}

/// A spinor identifier such as `x-` or `z+unsym`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SpinorId {
    pub family: Family,
    pub sign: Sign,
}

impl SpinorId {
    pub fn all() -> Vec<SpinorId> {
        Family::ALL.iter().flat_map(|&family| [Sign::Plus, Sign::Minus].map(|sign| SpinorId { family, sign })).collect()
    }

    pub fn build(&self) -> Spinor {
        build_eigenvector(self.family, self.sign)
    }
}

impl fmt::Display for SpinorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.family.id(self.sign))
    }
}

impl FromStr for SpinorId {
    type Err = SpinorError;
    fn from_str(s: &str) -> Result<Self, SpinorError> {
        SpinorId::all()
            .into_iter()
            .find(|id| id.to_string() == s)
            .ok_or_else(|| SpinorError::UnknownIdentifier(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spinor {
    pub top: Expr,
    pub bottom: Expr,
    pub meta: SpinorMeta,
}

impl Spinor {
    pub fn new(top: Expr, bottom: Expr, meta: SpinorMeta) -> Self {
        Spinor { top, bottom, meta }
    }

    pub fn custom(top: Expr, bottom: Expr, sign: Sign) -> Self {
        Spinor { top, bottom, meta: SpinorMeta { axis: Axis::Custom, sign, symmetrized: false } }
    }

    pub fn component(&self, k: usize) -> &Expr {
        match k {
            0 => &self.top,
            1 => &self.bottom,
            _ => panic!("spinor component index {k} out of range"),
        }
    }

    pub fn components(&self) -> [&Expr; 2] {
        [&self.top, &self.bottom]
    }

    pub fn is_zero(&self) -> bool {
        self.top.is_zero() && self.bottom.is_zero()
    }

    /// Same column vector, ignoring metadata.
    pub fn same_components(&self, other: &Spinor) -> bool {
        self.top == other.top && self.bottom == other.bottom
    }

    pub fn map(&self, f: impl Fn(&Expr) -> Expr) -> Spinor {
        Spinor { top: f(&self.top), bottom: f(&self.bottom), meta: self.meta }
    }

    pub fn scale(&self, c: &Scalar) -> Spinor {
        self.map(|e| e.scale(c))
    }

    /// `c` such that `self == c * other`, when `other` is nonzero and such a constant exists.
    pub fn ratio_to(&self, other: &Spinor) -> Option<Scalar> {
        let k = other.components().iter().position(|o| !o.is_zero())?;
        let (freq, coeff) = other.component(k).terms().next()?;
        let c = self.component(k).coeff(freq).checked_div(coeff).ok()?;
        if self.same_components(&other.scale(&c)) {
            Some(c)
        } else {
            None
        }
    }

    pub fn to_text(&self, style: PrintStyle) -> [String; 2] {
        [print(&self.top, style), print(&self.bottom, style)]
    }
}

impl fmt::Display for Spinor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [t, b] = self.to_text(PrintStyle::Trig);
        write!(f, "({t}, {b})")
    }
}

fn cos_t() -> Expr {
    Expr::cos_half(Angle::Theta, 1)
}

fn sin_t() -> Expr {
    Expr::sin_half(Angle::Theta, 1)
}

fn phase_phi(m: i32) -> Expr {
    Expr::exp_half(Angle::Phi, m)
}

fn phase_theta(m: i32) -> Expr {
    Expr::exp_half(Angle::Theta, m)
}

/// Constructs the named family member.
pub fn build_eigenvector(family: Family, sign: Sign) -> Spinor {
    use Sign::{Minus, Plus};
    let meta = |axis, symmetrized| SpinorMeta { axis, sign, symmetrized };
    let r = Scalar::inv_sqrt2();
    let i = Expr::constant(Scalar::i());
    match family {
        Family::Pauli => {
            let (t, b) = match sign {
                Plus => (Expr::one(), Expr::zero()),
                Minus => (Expr::zero(), Expr::one()),
            };
            Spinor::new(t, b, meta(Axis::Pauli, false))
        }
        Family::Generalized => {
            let c = cos_t();
            let s = sin_t();
            let cp = Expr::cos_half(Angle::ThetaP, 1);
            let sp = Expr::sin_half(Angle::ThetaP, 1);
            // exp(i*(phi - phi_p))
            let rel = Expr::atom(FreqVec::new(0, 2, 0, -2));
            let (t, b) = match sign {
                Plus => (&c * &cp + &rel * &s * &sp, &c * &sp - &rel * &s * &cp),
                Minus => (&s * &cp - &rel * &c * &sp, &s * &sp + &rel * &c * &cp),
            };
            Spinor::new(t, b, meta(Axis::Generalized, false))
        }
        Family::ZUnsymmetrized => {
            let (t, b) = match sign {
                Plus => (cos_t(), -(&phase_phi(2) * &sin_t())),
                Minus => (sin_t(), &phase_phi(2) * &cos_t()),
            };
            Spinor::new(t, b, meta(Axis::Z, false))
        }
        Family::Z => {
            let (t, b) = match sign {
                Plus => (&phase_phi(-1) * &cos_t(), -(&phase_phi(1) * &sin_t())),
                Minus => (&phase_phi(-1) * &sin_t(), &phase_phi(1) * &cos_t()),
            };
            Spinor::new(t, b, meta(Axis::Z, true))
        }
        Family::X => {
            let (t, b) = match sign {
                Plus => (&(&sin_t() + &cos_t()) * &phase_phi(-1), &(&cos_t() - &sin_t()) * &phase_phi(1)),
                Minus => (&(&sin_t() - &cos_t()) * &phase_phi(-1), &(&cos_t() + &sin_t()) * &phase_phi(1)),
            };
            Spinor::new(t.scale(&r), b.scale(&r), meta(Axis::X, true))
        }
        Family::YUnphased | Family::YPrinted | Family::YCorrected => {
            let i_sign = match sign {
                Plus => i.clone(),
                Minus => -&i,
            };
            let t = phase_phi(-1).scale(&r);
            let b = (&i_sign * &phase_phi(1)).scale(&r);
            let (axis, theta_m) = match family {
                Family::YUnphased => (Axis::YUnphased, 0),
                Family::YPrinted => (Axis::YPrinted, -1),
                _ => (Axis::YCorrected, if sign == Plus { 1 } else { -1 }),
            };
            let ph = phase_theta(theta_m);
            Spinor::new(&ph * &t, &ph * &b, meta(axis, true))
        }
    }
}

/// `conj(a.top)*b.top + conj(a.bottom)*b.bottom`.
pub fn inner(a: &Spinor, b: &Spinor) -> Expr {
    &a.top.conj() * &b.top + &a.bottom.conj() * &b.bottom
}

/// Fixes the initial direction on the z axis (`theta_p = phi_p = 0`).
pub fn specialize(s: &Spinor) -> Result<Spinor, SpinorError> {
    if s.meta.axis != Axis::Generalized {
        return Err(SpinorError::NotGeneralized(s.meta.axis.name().to_string()));
    }
    let sub = |e: &Expr| e.subst_zero(Angle::ThetaP).subst_zero(Angle::PhiP);
    Ok(Spinor {
        top: sub(&s.top),
        bottom: sub(&s.bottom),
        meta: SpinorMeta { axis: Axis::Z, sign: s.meta.sign, symmetrized: false },
    })
}

/// True for a single atom whose coefficient has modulus one.
pub fn is_unimodular_phase(phase: &Expr) -> bool {
    match phase.single_term() {
        Some((_, c)) => c.modulus_squared() == Surd::one(),
        None => false,
    }
}

/// Multiplies both components by a unit-modulus atom.
pub fn scale_phase(s: &Spinor, phase: &Expr) -> Result<Spinor, SpinorError> {
    if !is_unimodular_phase(phase) {
        return Err(SpinorError::NotUnimodular);
    }
    Ok(s.map(|e| phase * e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn sp(top: &str, bottom: &str) -> (Expr, Expr) {
        (parse(top).unwrap(), parse(bottom).unwrap())
    }

    #[test]
    fn z_plus_symmetrized() {
        let s = build_eigenvector(Family::Z, Sign::Plus);
        let (t, b) = sp("exp(-i*phi/2)*cos(theta/2)", "-exp(i*phi/2)*sin(theta/2)");
        assert_eq!((s.top, s.bottom), (t, b));
    }

    #[test]
    fn pauli_minus() {
        let s = build_eigenvector(Family::Pauli, Sign::Minus);
        assert_eq!((s.top, s.bottom), (Expr::zero(), Expr::one()));
    }

    #[test]
    fn x_minus() {
        let s = build_eigenvector(Family::X, Sign::Minus);
        let (t, b) = sp(
            "(1/sqrt2)*(sin(theta/2) - cos(theta/2))*exp(-i*phi/2)",
            "(1/sqrt2)*(cos(theta/2) + sin(theta/2))*exp(i*phi/2)",
        );
        assert_eq!((s.top, s.bottom), (t, b));
    }

    #[test]
    fn y_printed_matches_text() {
        let s = build_eigenvector(Family::YPrinted, Sign::Minus);
        let (t, b) = sp("(1/sqrt2)*exp(-i*(phi + theta)/2)", "-i*(1/sqrt2)*exp(i*(phi - theta)/2)");
        assert_eq!((s.top, s.bottom), (t, b));
    }

    #[test]
    fn inner_products() {
        let zp = build_eigenvector(Family::Z, Sign::Plus);
        let zm = build_eigenvector(Family::Z, Sign::Minus);
        assert_eq!(inner(&zp, &zp), Expr::one());
        assert_eq!(inner(&zp, &zm), Expr::zero());
        let gp = build_eigenvector(Family::Generalized, Sign::Plus);
        assert_eq!(inner(&gp, &gp), Expr::one());
    }

    #[test]
    fn specialization() {
        let gp = specialize(&build_eigenvector(Family::Generalized, Sign::Plus)).unwrap();
        let (t, b) = sp("cos(theta/2)", "-exp(i*phi)*sin(theta/2)");
        assert_eq!((gp.top.clone(), gp.bottom.clone()), (t, b));
        let gm = specialize(&build_eigenvector(Family::Generalized, Sign::Minus)).unwrap();
        let (t, b) = sp("sin(theta/2)", "exp(i*phi)*cos(theta/2)");
        assert_eq!((gm.top, gm.bottom), (t, b));
        let sym = scale_phase(&gp, &parse("exp(-i*phi/2)").unwrap()).unwrap();
        assert!(sym.same_components(&build_eigenvector(Family::Z, Sign::Plus)));
    }

    #[test]
    fn specialize_rejects_fixed_axis() {
        let err = specialize(&build_eigenvector(Family::X, Sign::Plus)).unwrap_err();
        assert!(matches!(err, SpinorError::NotGeneralized(_)));
    }

    #[test]
    fn phase_scaling() {
        let s = build_eigenvector(Family::X, Sign::Plus);
        assert_eq!(scale_phase(&s, &Expr::one()).unwrap(), s);
        let y = build_eigenvector(Family::YUnphased, Sign::Plus);
        let printed = scale_phase(&y, &parse("exp(-i*theta/2)").unwrap()).unwrap();
        assert!(printed.same_components(&build_eigenvector(Family::YPrinted, Sign::Plus)));
        assert_eq!(scale_phase(&s, &Expr::constant(Scalar::from_int(2))), Err(SpinorError::NotUnimodular));
        assert_eq!(scale_phase(&s, &parse("cos(theta)").unwrap()), Err(SpinorError::NotUnimodular));
        // (1 + i)/sqrt2 has modulus one.
        let tilted = parse("(1 + i)/sqrt2*exp(i*theta)").unwrap();
        assert!(scale_phase(&s, &tilted).is_ok());
    }

    #[test]
    fn identifiers_round_trip() {
        for id in SpinorId::all() {
            let text = id.to_string();
            assert_eq!(text.parse::<SpinorId>().unwrap(), id);
        }
        for name in ["z+", "z-unsym", "yprinted+", "ycorr-", "pauli+", "gen-", "x+"] {
            assert!(name.parse::<SpinorId>().is_ok(), "{name}");
        }
        assert!("w+".parse::<SpinorId>().is_err());
    }

    #[test]
    fn ratio_detection() {
        let s = build_eigenvector(Family::X, Sign::Plus);
        let half = Scalar::from_ratio(1, 2);
        assert_eq!(s.scale(&half).ratio_to(&s), Some(half));
        let u = build_eigenvector(Family::Z, Sign::Plus);
        assert_eq!(u.ratio_to(&s), None);
    }
}
