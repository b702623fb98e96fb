//! Matrix-valued differential operators in `theta` and `phi`.
//!
//! A [`DiffOp`] is `sum_k c_k(theta, phi, ...) * d_theta^a_k d_phi^b_k` with
//! [`Expr`] coefficients; a [`MatrixOp`] is a 2x2 matrix of them acting on
//! [`Spinor`]s. Composition expands with the Leibniz rule so products and
//! commutators stay exact.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::OperatorError;
use crate::expr::{Angle, Expr};
use crate::parser::{print, PrintStyle};
use crate::scalar::Scalar;
use crate::spinor::Spinor;

/// Derivative multi-index `d_theta^theta d_phi^phi`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub struct MultiIndex {
    pub theta: u32,
    pub phi: u32,
}

impl MultiIndex {
    pub const IDENTITY: MultiIndex = MultiIndex { theta: 0, phi: 0 };
    pub const D_THETA: MultiIndex = MultiIndex { theta: 1, phi: 0 };
    pub const D_PHI: MultiIndex = MultiIndex { theta: 0, phi: 1 };

    pub fn new(theta: u32, phi: u32) -> Self {
        MultiIndex { theta, phi }
    }

    pub fn order(&self) -> u32 {
        self.theta + self.phi
    }

    fn symbol(&self) -> String {
        let one = |name: &str, k: u32| match k {
            0 => None,
            1 => Some(format!("d_{name}")),
            k => Some(format!("d_{name}^{k}")),
        };
        let parts: Vec<String> = [one("theta", self.theta), one("phi", self.phi)].into_iter().flatten().collect();
        parts.join("*")
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.theta, self.phi)
    }
}

fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, j| acc * (n - j) as i64 / (j + 1) as i64)
}

/// Scalar differential operator with [`Expr`] coefficients. No zero coefficient is stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DiffOp {
    terms: BTreeMap<MultiIndex, Expr>,
}

impl DiffOp {
    pub fn zero() -> Self {
        DiffOp::default()
    }

    pub fn identity() -> Self {
        DiffOp::term(MultiIndex::IDENTITY, Expr::one())
    }

    pub fn term(idx: MultiIndex, coeff: Expr) -> Self {
        let mut op = DiffOp::zero();
        op.add_term(idx, coeff);
        op
    }

    /// `a_theta * d_theta + a_phi * d_phi`.
    pub fn first_order(a_theta: Expr, a_phi: Expr) -> Self {
        DiffOp::from_terms([(MultiIndex::D_THETA, a_theta), (MultiIndex::D_PHI, a_phi)])
    }

    pub fn from_terms<I: IntoIterator<Item = (MultiIndex, Expr)>>(iter: I) -> Self {
        let mut op = DiffOp::zero();
        for (idx, c) in iter {
            op.add_term(idx, c);
        }
        op
    }

    fn add_term(&mut self, idx: MultiIndex, coeff: Expr) {
        if coeff.is_zero() {
            return;
        }
        let merged = match self.terms.remove(&idx) {
            Some(prev) => &prev + &coeff,
            None => coeff,
        };
        if !merged.is_zero() {
            self.terms.insert(idx, merged);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Expr)> {
        self.terms.iter()
    }

    pub fn coeff(&self, idx: &MultiIndex) -> Expr {
        self.terms.get(idx).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest total derivative order, 0 for the zero operator.
    pub fn order(&self) -> u32 {
        self.terms.keys().map(MultiIndex::order).max().unwrap_or(0)
    }

    pub fn apply(&self, f: &Expr) -> Expr {
        let mut out = Expr::zero();
        for (idx, c) in &self.terms {
            let d = f.diff_n(Angle::Theta, idx.theta).diff_n(Angle::Phi, idx.phi);
            if !d.is_zero() {
                out = &out + &(c * &d);
            }
        }
        out
    }

    /// `self o other`, expanded by the Leibniz rule:
    /// `(f d^a) o (g d^b) = sum_{c <= a} C(a, c) f (d^c g) d^{a+b-c}`.
    pub fn compose(&self, other: &DiffOp) -> DiffOp {
        let mut out = DiffOp::zero();
        for (a, f) in &self.terms {
            for (b, g) in &other.terms {
                for ct in 0..=a.theta {
                    for cp in 0..=a.phi {
                        let dg = g.diff_n(Angle::Theta, ct).diff_n(Angle::Phi, cp);
                        if dg.is_zero() {
                            continue;
                        }
                        let weight = Scalar::from_int(binomial(a.theta, ct) * binomial(a.phi, cp));
                        let idx = MultiIndex::new(a.theta + b.theta - ct, a.phi + b.phi - cp);
                        out.add_term(idx, (f * &dg).scale(&weight));
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &DiffOp) -> DiffOp {
        let mut out = self.clone();
        for (idx, c) in &other.terms {
            out.add_term(*idx, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &DiffOp) -> DiffOp {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> DiffOp {
        DiffOp::from_terms(self.terms.iter().map(|(idx, e)| (*idx, e.scale(c))))
    }

    /// Left multiplication by a function.
    pub fn mul_expr(&self, f: &Expr) -> DiffOp {
        DiffOp::from_terms(self.terms.iter().map(|(idx, e)| (*idx, f * e)))
    }

    pub fn to_text(&self, style: PrintStyle) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut ordered: Vec<(&MultiIndex, &Expr)> = self.terms.iter().collect();
        ordered.sort_by_key(|(idx, _)| (idx.order(), std::cmp::Reverse(idx.theta)));
        let mut out = String::new();
        for (k, (idx, c)) in ordered.into_iter().enumerate() {
            let text = print(c, style);
            let sym = idx.symbol();
            let compound = text[1..].contains(" + ") || text[1..].contains(" - ");
            let (neg, body) = if compound {
                (false, format!("({text})"))
            } else if let Some(rest) = text.strip_prefix('-') {
                (true, rest.to_string())
            } else {
                (false, text)
            };
            let piece = match (sym.is_empty(), body.as_str()) {
                (true, _) => body,
                (false, "1") => sym,
                (false, _) => format!("{body}*{sym}"),
            };
            match (k, neg) {
                (0, false) => out.push_str(&piece),
                (0, true) => out.push_str(&format!("-{piece}")),
                (_, false) => out.push_str(&format!(" + {piece}")),
                (_, true) => out.push_str(&format!(" - {piece}")),
            }
        }
        out
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(PrintStyle::Trig))
    }
}

/// 2x2 matrix of differential operators, `entries[row][col]`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MatrixOp {
    pub entries: [[DiffOp; 2]; 2],
}

impl MatrixOp {
    pub fn new(entries: [[DiffOp; 2]; 2]) -> Self {
        MatrixOp { entries }
    }

    pub fn zero() -> Self {
        MatrixOp::default()
    }

    pub fn identity() -> Self {
        MatrixOp::diagonal(DiffOp::identity(), DiffOp::identity())
    }

    pub fn diagonal(a: DiffOp, d: DiffOp) -> Self {
        MatrixOp { entries: [[a, DiffOp::zero()], [DiffOp::zero(), d]] }
    }

    pub fn entry(&self, row: usize, col: usize) -> &DiffOp {
        &self.entries[row][col]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(DiffOp::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries[0][1].is_zero() && self.entries[1][0].is_zero()
    }

    pub fn order(&self) -> u32 {
        self.entries.iter().flatten().map(DiffOp::order).max().unwrap_or(0)
    }

    pub fn apply(&self, s: &Spinor) -> Spinor {
        let row = |r: usize| &self.entries[r][0].apply(&s.top) + &self.entries[r][1].apply(&s.bottom);
        Spinor { top: row(0), bottom: row(1), meta: s.meta }
    }

    pub fn compose(&self, other: &MatrixOp) -> MatrixOp {
        let e = |r: usize, c: usize| {
            self.entries[r][0].compose(&other.entries[0][c]).add(&self.entries[r][1].compose(&other.entries[1][c]))
        };
        MatrixOp { entries: [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]] }
    }

    /// `self o other - other o self`.
    pub fn commutator(&self, other: &MatrixOp) -> MatrixOp {
        self.compose(other).sub(&other.compose(self))
    }

    fn zip(&self, other: &MatrixOp, f: impl Fn(&DiffOp, &DiffOp) -> DiffOp) -> MatrixOp {
        let e = |r: usize, c: usize| f(&self.entries[r][c], &other.entries[r][c]);
        MatrixOp { entries: [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]] }
    }

    pub fn add(&self, other: &MatrixOp) -> MatrixOp {
        self.zip(other, DiffOp::add)
    }

    pub fn sub(&self, other: &MatrixOp) -> MatrixOp {
        self.zip(other, DiffOp::sub)
    }

    pub fn scale(&self, c: &Scalar) -> MatrixOp {
        self.zip(self, |a, _| a.scale(c))
    }

    pub fn linear(&self, other: &MatrixOp, c: &Scalar, op: LinearOp) -> MatrixOp {
        match op {
            LinearOp::Add => self.add(other),
            LinearOp::Sub => self.sub(other),
            LinearOp::Scale => self.scale(c),
        }
    }

    /// `Some(c)` when `apply(self, s) == c * s` for a constant `c`.
    pub fn eigen_factor(&self, s: &Spinor) -> Option<Scalar> {
        if s.is_zero() {
            return None;
        }
        self.apply(s).ratio_to(s)
    }

    pub fn entry_texts(&self, style: PrintStyle) -> [[String; 2]; 2] {
        let t = |r: usize, c: usize| self.entries[r][c].to_text(style);
        [[t(0, 0), t(0, 1)], [t(1, 0), t(1, 1)]]
    }

    pub fn to_text(&self, style: PrintStyle) -> String {
        let t = self.entry_texts(style);
        format!("[1,1]: {}\n[1,2]: {}\n[2,1]: {}\n[2,2]: {}", t[0][0], t[0][1], t[1][0], t[1][1])
    }
}

impl fmt::Display for MatrixOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(PrintStyle::Trig))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinearOp {
    Add,
    Sub,
    Scale,
}

/// Spin component axis for [`build_spin_op`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SpinAxis {
    X,
    Y,
    Z,
}

impl SpinAxis {
    pub const ALL: [SpinAxis; 3] = [SpinAxis::X, SpinAxis::Y, SpinAxis::Z];

    /// Next axis in cyclic order x -> y -> z -> x.
    pub fn next(self) -> SpinAxis {
        match self {
            SpinAxis::X => SpinAxis::Y,
            SpinAxis::Y => SpinAxis::Z,
            SpinAxis::Z => SpinAxis::X,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SpinAxis::X => "x",
            SpinAxis::Y => "y",
            SpinAxis::Z => "z",
        }
    }
}

fn sin_theta() -> Expr {
    Expr::sin_half(Angle::Theta, 2)
}

fn cos_theta() -> Expr {
    Expr::cos_half(Angle::Theta, 2)
}

fn times_i(e: Expr) -> Expr {
    e.scale(&Scalar::i())
}

/// The diagonal first-order spin operators, in units of hbar.
pub fn build_spin_op(axis: SpinAxis) -> MatrixOp {
    match axis {
        SpinAxis::Z => MatrixOp::diagonal(
            DiffOp::first_order(-sin_theta(), times_i(cos_theta())),
            DiffOp::first_order(sin_theta(), times_i(cos_theta())),
        ),
        SpinAxis::X => MatrixOp::diagonal(
            DiffOp::first_order(cos_theta(), times_i(sin_theta())),
            DiffOp::first_order(-cos_theta(), times_i(sin_theta())),
        ),
        SpinAxis::Y => {
            let d = DiffOp::term(MultiIndex::D_THETA, Expr::constant(-Scalar::i()));
            MatrixOp::diagonal(d.clone(), d)
        }
    }
}

/// `diag(i d_phi - d_phi^2, -i d_phi - d_phi^2)`, in units of hbar^2.
pub fn build_s2_closed() -> MatrixOp {
    let dphi2 = (MultiIndex::new(0, 2), Expr::constant(Scalar::from_int(-1)));
    MatrixOp::diagonal(
        DiffOp::from_terms([(MultiIndex::D_PHI, Expr::constant(Scalar::i())), dphi2.clone()]),
        DiffOp::from_terms([(MultiIndex::D_PHI, Expr::constant(-Scalar::i())), dphi2]),
    )
}

/// `Sx o Sx + Sy o Sy + Sz o Sz`.
pub fn build_s2_composed() -> MatrixOp {
    SpinAxis::ALL
        .iter()
        .map(|&a| {
            let s = build_spin_op(a);
            s.compose(&s)
        })
        .fold(MatrixOp::zero(), |acc, sq| acc.add(&sq))
}

/// Operator names accepted on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OperatorId {
    Sz,
    Sx,
    Sy,
    S2Closed,
    S2Composed,
}

impl OperatorId {
    pub const ALL: [OperatorId; 5] =
        [OperatorId::Sz, OperatorId::Sx, OperatorId::Sy, OperatorId::S2Closed, OperatorId::S2Composed];

    pub fn name(self) -> &'static str {
        match self {
            OperatorId::Sz => "Sz",
            OperatorId::Sx => "Sx",
            OperatorId::Sy => "Sy",
            OperatorId::S2Closed => "S2closed",
            OperatorId::S2Composed => "S2composed",
        }
    }

    pub fn build(self) -> MatrixOp {
        match self {
            OperatorId::Sz => build_spin_op(SpinAxis::Z),
            OperatorId::Sx => build_spin_op(SpinAxis::X),
            OperatorId::Sy => build_spin_op(SpinAxis::Y),
            OperatorId::S2Closed => build_s2_closed(),
            OperatorId::S2Composed => build_s2_composed(),
        }
    }
}

impl fmt::Display for OperatorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OperatorId {
    type Err = OperatorError;
    fn from_str(s: &str) -> Result<Self, OperatorError> {
        if s == "S2" {
            return Ok(OperatorId::S2Closed);
        }
        OperatorId::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| OperatorError::UnknownIdentifier(s.to_string()))
    }
}
