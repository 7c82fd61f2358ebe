//! Exact arithmetic shared by every other module: big rationals, integer
//! matrices with Smith normal form, and Laurent polynomials.

mod laurent;
pub mod linalg;
mod matrix;
mod rational;

pub use laurent::{Coefficient, LaurentPoly, Monomial};
pub use matrix::{IntMatrix, SmithForm};
pub(crate) use matrix::{completion_with_first_row, invert_rational};
pub use rational::{
    ceil_int, floor_int, format_rational, int, lcm, lcm_denominators, parse_rational, rat,
    Rational,
};

pub type IntLaurent = LaurentPoly<num_bigint::BigInt>;
pub type RatLaurent = LaurentPoly<Rational>;
