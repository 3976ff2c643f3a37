//! Exact symbolic engine for twisted-Poisson (magnetic monopole) star
//! products on `T*R³`, truncated at third order in the deformation
//! parameter.
//!
//! Functions are polynomials in `(q, p)` times momentum exponentials
//! `exp(i α·p)` with Gaussian-rational coefficients, so every identity is
//! checked as an exact zero. The algebra is generic over the coefficient
//! representation; the aliases below fix the arbitrary-precision default.

pub mod associator;
pub mod expr;
pub mod operators;
pub mod parse;
pub mod report;
pub mod sample;
pub mod scalar;
pub mod star;
pub mod structure;

use num_complex::Complex;
use num_rational::{BigRational, Rational64};

pub use associator::{Claim, Status, Verdict, Witness};
pub use expr::{Deriv, Freq, Monomial, Var};
pub use parse::{parse_expr, ParseError, ParseErrorKind};
pub use scalar::{Coeff, ExactReal};

/// Gaussian rational with arbitrary-precision parts.
pub type Scalar = Complex<BigRational>;
/// Gaussian rational with machine-word parts; panics on overflow.
pub type SmallScalar = Complex<Rational64>;

pub type Expr = expr::Expr<Scalar>;
pub type FieldConfig = structure::FieldConfig<Scalar>;
pub type Bivector = structure::Bivector<Scalar>;
pub type BiDiffOp = operators::BiDiffOp<Scalar>;
pub type DiffOp = operators::DiffOp<Scalar>;
pub type Cochain = operators::Cochain<Scalar>;
pub type LambdaSeries = star::LambdaSeries<Scalar>;
pub type StarProduct = star::StarProduct<Scalar>;
