//! Text form of [`Expr`].
//!
//! ```text
//! expr     := sum
//! sum      := product (("+" | "-") product)*
//! product  := unary (("*" | "/") unary)*
//! unary    := ["-"] power
//! power    := atom ["^" integer]
//! atom     := integer | "i" | "sqrt2" | func | "(" expr ")"
//! func     := ("sin" | "cos" | "exp") "(" arg ")"
//! ```
//!
//! `arg` uses the same surface syntax but must evaluate to a linear form in
//! `theta, phi, theta_p, phi_p` with coefficients in `Z/2`; for `exp` the form
//! must carry a factor `i`. Division is only by nonzero constants.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{ParseError, ParseErrorKind};
use crate::expr::{Angle, Expr, FreqVec};
use crate::scalar::{join_signed, Scalar};

const MAX_POWER: u32 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("number `{n}`"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

/// Splits into tokens tagged with character offsets.
fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let start = k;
        let tok = match c {
            c if c.is_whitespace() => {
                k += 1;
                continue;
            }
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            c if c.is_ascii_digit() => {
                while k < chars.len() && chars[k].is_ascii_digit() {
                    k += 1;
                }
                let digits: String = chars[start..k].iter().collect();
                out.push((Tok::Int(digits.parse().expect("ascii digits")), start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while k < chars.len() && (chars[k].is_ascii_alphanumeric() || chars[k] == '_') {
                    k += 1;
                }
                out.push((Tok::Ident(chars[start..k].iter().collect()), start));
                continue;
            }
            other => {
                return Err(ParseError::new(ParseErrorKind::Syntax, start, format!("unexpected character `{other}`")))
            }
        };
        out.push((tok, start));
        k += 1;
    }
    out.push((Tok::End, chars.len()));
    Ok(out)
}

/// Value domain the shared recursive-descent core evaluates into.
trait Domain {
    type V;
    fn int(&self, n: BigInt) -> Self::V;
    fn scalar(&self, c: Scalar) -> Self::V;
    fn angle(&self, a: Angle, at: usize) -> Result<Self::V, ParseError>;
    fn func(&self, p: &mut Parser, name: &str, at: usize) -> Result<Self::V, ParseError>;
    fn add(&self, a: Self::V, b: Self::V) -> Self::V;
    fn sub(&self, a: Self::V, b: Self::V) -> Self::V;
    fn neg(&self, a: Self::V) -> Self::V;
    fn mul(&self, a: Self::V, b: Self::V, at: usize) -> Result<Self::V, ParseError>;
    fn div(&self, a: Self::V, b: Self::V, at: usize) -> Result<Self::V, ParseError>;
    fn pow(&self, a: Self::V, n: u32, at: usize) -> Result<Self::V, ParseError>;
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<usize, ParseError> {
        let (tok, at) = self.bump();
        if tok == want {
            Ok(at)
        } else {
            Err(syntax(at, format!("expected {}, found {}", want.describe(), tok.describe())))
        }
    }

    fn sum<D: Domain>(&mut self, d: &D) -> Result<D::V, ParseError> {
        let mut acc = self.product(d)?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    let rhs = self.product(d)?;
                    acc = d.add(acc, rhs);
                }
                Tok::Minus => {
                    self.bump();
                    let rhs = self.product(d)?;
                    acc = d.sub(acc, rhs);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product<D: Domain>(&mut self, d: &D) -> Result<D::V, ParseError> {
        let mut acc = self.unary(d)?;
        loop {
            match self.peek() {
                Tok::Star => {
                    let at = self.bump().1;
                    let rhs = self.unary(d)?;
                    acc = d.mul(acc, rhs, at)?;
                }
                Tok::Slash => {
                    self.bump();
                    let at = self.offset();
                    let rhs = self.unary(d)?;
                    acc = d.div(acc, rhs, at)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary<D: Domain>(&mut self, d: &D) -> Result<D::V, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            let v = self.power(d)?;
            Ok(d.neg(v))
        } else {
            self.power(d)
        }
    }

    fn power<D: Domain>(&mut self, d: &D) -> Result<D::V, ParseError> {
        let base = self.atom(d)?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let (tok, at) = self.bump();
        match tok {
            Tok::Int(n) => {
                let e = n
                    .to_u32()
                    .filter(|&e| e <= MAX_POWER)
                    .ok_or_else(|| syntax(at, format!("exponent must be at most {MAX_POWER}")))?;
                d.pow(base, e, at)
            }
            other => Err(syntax(at, format!("expected integer exponent, found {}", other.describe()))),
        }
    }

    fn atom<D: Domain>(&mut self, d: &D) -> Result<D::V, ParseError> {
        let (tok, at) = self.bump();
        match tok {
            Tok::Int(n) => Ok(d.int(n)),
            Tok::LParen => {
                let v = self.sum(d)?;
                self.expect(Tok::RParen)?;
                Ok(v)
            }
            Tok::Ident(name) => match name.as_str() {
                "i" => Ok(d.scalar(Scalar::i())),
                "sqrt2" => Ok(d.scalar(Scalar::sqrt2())),
                "sin" | "cos" | "exp" => d.func(self, &name, at),
                other => match Angle::from_name(other) {
                    Some(a) => d.angle(a, at),
                    None => Err(syntax(at, format!("unknown identifier `{other}`"))),
                },
            },
            other => Err(syntax(at, format!("expected a value, found {}", other.describe()))),
        }
    }
}

fn syntax(at: usize, msg: impl Into<String>) -> ParseError {
    ParseError::new(ParseErrorKind::Syntax, at, msg)
}

struct ExprDomain;

impl Domain for ExprDomain {
    type V = Expr;

    fn int(&self, n: BigInt) -> Expr {
        Expr::constant(Scalar::from_rational(BigRational::from_integer(n)))
    }

    fn scalar(&self, c: Scalar) -> Expr {
        Expr::constant(c)
    }

    fn angle(&self, a: Angle, at: usize) -> Result<Expr, ParseError> {
        Err(syntax(at, format!("angle `{}` may only appear inside sin, cos or exp", a.name())))
    }

    fn func(&self, p: &mut Parser, name: &str, _at: usize) -> Result<Expr, ParseError> {
        p.expect(Tok::LParen)?;
        let arg_at = p.offset();
        let form = p.sum(&LinearDomain)?;
        p.expect(Tok::RParen)?;
        match name {
            "exp" => {
                let freq = form.imaginary_freq(arg_at)?;
                Ok(Expr::atom(freq))
            }
            _ => {
                let freq = form.real_freq(arg_at)?;
                let half = Scalar::from_ratio(1, 2);
                if name == "cos" {
                    Ok(Expr::from_terms([(freq, half.clone()), (freq.negate(), half)]))
                } else {
                    // 1/(2i) = -i/2
                    let c = Scalar::gaussian(BigRational::zero(), crate::scalar::ratio(-1, 2));
                    Ok(Expr::from_terms([(freq, c.clone()), (freq.negate(), -c)]))
                }
            }
        }
    }

    fn add(&self, a: Expr, b: Expr) -> Expr {
        a + b
    }

    fn sub(&self, a: Expr, b: Expr) -> Expr {
        a - b
    }

    fn neg(&self, a: Expr) -> Expr {
        -a
    }

    fn mul(&self, a: Expr, b: Expr, _at: usize) -> Result<Expr, ParseError> {
        Ok(a * b)
    }

    fn div(&self, a: Expr, b: Expr, at: usize) -> Result<Expr, ParseError> {
        let c = b.as_constant().ok_or_else(|| {
            ParseError::new(ParseErrorKind::NonConstantDivisor, at, "divisor must be a nonzero constant")
        })?;
        let inv = c.inverse().map_err(|_| syntax(at, "division by zero"))?;
        Ok(a.scale(&inv))
    }

    fn pow(&self, a: Expr, n: u32, _at: usize) -> Result<Expr, ParseError> {
        Ok(a.pow(n))
    }
}

/// `c0 + c1*theta + c2*phi + c3*theta_p + c4*phi_p`.
#[derive(Clone, Debug, Default)]
struct LinearForm {
    constant: Scalar,
    coeffs: [Scalar; 4],
}

impl LinearForm {
    fn is_constant(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> LinearForm {
        LinearForm {
            constant: f(&self.constant),
            coeffs: [f(&self.coeffs[0]), f(&self.coeffs[1]), f(&self.coeffs[2]), f(&self.coeffs[3])],
        }
    }

    fn zip(&self, o: &LinearForm, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> LinearForm {
        LinearForm {
            constant: f(&self.constant, &o.constant),
            coeffs: [
                f(&self.coeffs[0], &o.coeffs[0]),
                f(&self.coeffs[1], &o.coeffs[1]),
                f(&self.coeffs[2], &o.coeffs[2]),
                f(&self.coeffs[3], &o.coeffs[3]),
            ],
        }
    }

    /// Lattice frequencies for a real argument `sum r_k * angle_k`.
    fn real_freq(&self, at: usize) -> Result<FreqVec, ParseError> {
        let rationals = self.rational_coeffs(|c| c.as_rational().cloned(), at, "real")?;
        to_lattice(&rationals, at)
    }

    /// Lattice frequencies for an argument `i * sum r_k * angle_k`.
    fn imaginary_freq(&self, at: usize) -> Result<FreqVec, ParseError> {
        let all = std::iter::once(&self.constant).chain(self.coeffs.iter());
        if all.clone().any(|c| !c.re.is_zero()) {
            return Err(ParseError::new(
                ParseErrorKind::NonImaginaryExponent,
                at,
                "exp argument must be i times a linear combination of angles",
            ));
        }
        let rationals =
            self.rational_coeffs(|c| if c.im.is_rational() { Some(c.im.rat.clone()) } else { None }, at, "imaginary")?;
        to_lattice(&rationals, at)
    }

    fn rational_coeffs(
        &self,
        extract: impl Fn(&Scalar) -> Option<BigRational>,
        at: usize,
        what: &str,
    ) -> Result<[BigRational; 4], ParseError> {
        if !self.constant.is_zero() {
            return Err(ParseError::new(
                ParseErrorKind::LatticeViolation,
                at,
                "argument has a constant offset outside the angle lattice",
            ));
        }
        let mut out: [BigRational; 4] = Default::default();
        for (k, c) in self.coeffs.iter().enumerate() {
            out[k] = extract(c).ok_or_else(|| {
                ParseError::new(
                    ParseErrorKind::LatticeViolation,
                    at,
                    format!("angle coefficients must be {what} rationals"),
                )
            })?;
        }
        Ok(out)
    }
}

fn to_lattice(coeffs: &[BigRational; 4], at: usize) -> Result<FreqVec, ParseError> {
    let mut m = [0i32; 4];
    for (k, c) in coeffs.iter().enumerate() {
        let doubled = c * BigRational::from_integer(BigInt::from(2));
        let v = if doubled.is_integer() { doubled.to_integer().to_i32() } else { None };
        m[k] = v.ok_or_else(|| {
            ParseError::new(
                ParseErrorKind::LatticeViolation,
                at,
                format!("coefficient {c} of `{}` is not a multiple of 1/2", Angle::ALL[k].name()),
            )
        })?;
    }
    Ok(FreqVec::from_array(m))
}

struct LinearDomain;

impl LinearDomain {
    fn lattice(at: usize, msg: &str) -> ParseError {
        ParseError::new(ParseErrorKind::LatticeViolation, at, msg)
    }
}

impl Domain for LinearDomain {
    type V = LinearForm;

    fn int(&self, n: BigInt) -> LinearForm {
        self.scalar(Scalar::from_rational(BigRational::from_integer(n)))
    }

    fn scalar(&self, c: Scalar) -> LinearForm {
        LinearForm { constant: c, ..Default::default() }
    }

    fn angle(&self, a: Angle, _at: usize) -> Result<LinearForm, ParseError> {
        let mut f = LinearForm::default();
        f.coeffs[a as usize] = Scalar::one();
        Ok(f)
    }

    fn func(&self, _p: &mut Parser, name: &str, at: usize) -> Result<LinearForm, ParseError> {
        Err(syntax(at, format!("`{name}` is not allowed inside an angle argument")))
    }

    fn add(&self, a: LinearForm, b: LinearForm) -> LinearForm {
        a.zip(&b, |x, y| x + y)
    }

    fn sub(&self, a: LinearForm, b: LinearForm) -> LinearForm {
        a.zip(&b, |x, y| x - y)
    }

    fn neg(&self, a: LinearForm) -> LinearForm {
        a.map(|x| -x)
    }

    fn mul(&self, a: LinearForm, b: LinearForm, at: usize) -> Result<LinearForm, ParseError> {
        if a.is_constant() {
            Ok(b.map(|x| x * &a.constant))
        } else if b.is_constant() {
            Ok(a.map(|x| x * &b.constant))
        } else {
            Err(Self::lattice(at, "angle argument must be linear in the angles"))
        }
    }

    fn div(&self, a: LinearForm, b: LinearForm, at: usize) -> Result<LinearForm, ParseError> {
        if !b.is_constant() {
            return Err(ParseError::new(ParseErrorKind::NonConstantDivisor, at, "divisor must be a nonzero constant"));
        }
        let inv = b.constant.inverse().map_err(|_| syntax(at, "division by zero"))?;
        Ok(a.map(|x| x * &inv))
    }

    fn pow(&self, a: LinearForm, n: u32, at: usize) -> Result<LinearForm, ParseError> {
        if a.is_constant() {
            Ok(self.scalar(a.constant.pow(n)))
        } else if n == 1 {
            Ok(a)
        } else if n == 0 {
            Ok(self.scalar(Scalar::one()))
        } else {
            Err(Self::lattice(at, "angle argument must be linear in the angles"))
        }
    }
}

/// Parses grammar text into a canonical [`Expr`].
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let e = p.sum(&ExprDomain)?;
    match p.peek() {
        Tok::End => Ok(e),
        other => Err(syntax(p.offset(), format!("unexpected {} after expression", other.describe()))),
    }
}

/// Parses text that must denote a constant, e.g. an eigenvalue.
pub fn parse_constant(text: &str) -> Result<Scalar, ParseError> {
    let e = parse(text)?;
    e.as_constant().ok_or_else(|| syntax(0, "expected a constant without angle dependence"))
}

/// Output flavour for [`print()`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PrintStyle {
    #[default]
    Exponential,
    Trig,
}

impl std::str::FromStr for PrintStyle {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exponential" | "exp" => Ok(PrintStyle::Exponential),
            "trig" => Ok(PrintStyle::Trig),
            other => Err(format!("unknown print style `{other}` (expected exponential or trig)")),
        }
    }
}

/// Argument text for an atom; `imaginary` prepends the factor `i` (for exp).
fn arg_text(f: &FreqVec, imaginary: bool) -> String {
    let nz: Vec<(Angle, i32)> = Angle::ALL.iter().map(|&a| (a, f.get(a))).filter(|(_, m)| *m != 0).collect();
    let halve = nz.iter().all(|(_, m)| m % 2 == 0);
    let den = if halve { "" } else { "/2" };
    let scaled: Vec<(Angle, i32)> = nz.iter().map(|&(a, m)| (a, if halve { m / 2 } else { m })).collect();
    let i_prefix = if imaginary { "i*" } else { "" };
    if let [(a, m)] = scaled.as_slice() {
        let sign = if *m < 0 { "-" } else { "" };
        let mag = if m.abs() == 1 { String::new() } else { format!("{}*", m.abs()) };
        return format!("{sign}{mag}{i_prefix}{}{den}", a.name());
    }
    let parts: Vec<(bool, String)> = scaled
        .iter()
        .map(|&(a, m)| {
            let body = if m.abs() == 1 { a.name().to_string() } else { format!("{}*{}", m.abs(), a.name()) };
            (m < 0, body)
        })
        .collect();
    let inner = join_signed(&parts);
    if halve && !imaginary {
        inner
    } else {
        format!("{i_prefix}({inner}){den}")
    }
}

/// Summands `coeff*factor` as signed pieces ready for [`join_signed`].
fn push_product(out: &mut Vec<(bool, String)>, coeff: &Scalar, factor: &str) {
    if coeff.is_zero() {
        return;
    }
    if factor.is_empty() {
        out.extend(signed_scalar_parts(coeff));
        return;
    }
    let parts = signed_scalar_parts(coeff);
    if let [(neg, body)] = parts.as_slice() {
        let text = if body == "1" {
            factor.to_string()
        } else if body.contains('/') && !body.starts_with('(') {
            format!("({body})*{factor}")
        } else {
            format!("{body}*{factor}")
        };
        out.push((*neg, text));
    } else {
        out.push((false, format!("({})*{factor}", join_signed(&parts))));
    }
}

fn signed_scalar_parts(c: &Scalar) -> Vec<(bool, String)> {
    c.signed_parts()
}

/// Deterministic grammar text for `e`. Terms appear in descending frequency
/// order; trig style folds each conjugate pair of atoms into `cos`/`sin`.
pub fn print(e: &Expr, style: PrintStyle) -> String {
    let mut out: Vec<(bool, String)> = Vec::new();
    for (f, c) in e.terms().rev() {
        if f.is_zero() {
            push_product(&mut out, c, "");
            continue;
        }
        let partner = f.negate();
        let paired = style == PrintStyle::Trig && !e.coeff(&partner).is_zero();
        if !paired {
            push_product(&mut out, c, &format!("exp({})", arg_text(f, true)));
            continue;
        }
        if *f < partner {
            continue;
        }
        let beta = e.coeff(&partner);
        let cos_c = c + &beta;
        let sin_c = &Scalar::i() * &(c - &beta);
        let arg = arg_text(f, false);
        push_product(&mut out, &cos_c, &format!("cos({arg})"));
        push_product(&mut out, &sin_c, &format!("sin({arg})"));
    }
    if out.is_empty() {
        "0".to_string()
    } else {
        join_signed(&out)
    }
}
