//! Exact symbolic engine for differential spin-1/2 operators.
//!
//! Spinor amplitudes are functions of the polar angles of the final
//! quantization direction; the spin operators are 2x2 matrices of first-order
//! differential operators acting on those angles. Everything here is exact:
//! coefficients live in `Q(i, sqrt2)` and functions are canonical sums of
//! half-integer-frequency exponentials, so identities are checked by equality
//! of canonical forms. A floating-point finite-difference oracle
//! ([`numeric`]) cross-checks the symbolic results.
//!
//! ```
//! use spindiff::diffop::build_spin_op;
//! use spindiff::{parse, Family, Scalar, Sign, SpinAxis};
//!
//! let sz = build_spin_op(SpinAxis::Z);
//! let up = Family::Z.build(Sign::Plus);
//! assert!(sz.apply(&up).same_components(&up.scale(&Scalar::from_ratio(1, 2))));
//!
//! let e = parse("cos(theta/2)^2 - sin(theta/2)^2").unwrap();
//! assert_eq!(e, parse("cos(theta)").unwrap());
//! ```

pub mod ansatz;
pub mod diffop;
pub mod error;
pub mod expr;
pub mod numeric;
pub mod parser;
pub mod scalar;
pub mod spinor;
pub mod verify;

pub use diffop::{DiffOp, MatrixOp, MultiIndex, OperatorId, SpinAxis};
pub use error::{ParseError, ParseErrorKind};
pub use expr::{Angle, Angles, Expr, FreqVec};
pub use parser::{parse, print, PrintStyle};
pub use scalar::Scalar;
pub use spinor::{Family, Sign, Spinor, SpinorId};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
