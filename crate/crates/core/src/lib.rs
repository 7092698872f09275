//! Characteristic-p commutative algebra: prime-field polynomial arithmetic,
//! Groebner bases, ideal calculus, and Frobenius / tight-closure probes.

pub mod corpus;
pub mod error;
pub mod field;
pub mod groebner;
pub mod ideal;
pub mod lab;
pub mod limits;
pub mod monomial;
pub mod parse;
pub mod poly;
pub mod ring;

pub use error::{Error, Result};
pub use field::{Coeff, PrimeField};
pub use groebner::{buchberger, divide, lift, DivisionResult, GroebnerBasis};
pub use ideal::{
    bracket_power, colength, eliminate, ideal_colon, ideal_colon_ideal, ideal_intersect,
    ideal_member, ideal_product, ideal_sum, is_m_primary, is_zero_dimensional, m_power_index,
    radical_member, saturation, BracketPower, IdealHandle,
};
pub use limits::{with_row_deadline, GbLimits};
pub use monomial::{Monomial, MonomialOrder};
pub use num_rational::Ratio;
pub use parse::parse_poly;
pub use poly::{poly_arith, ArithOp, Polynomial};
pub use ring::{PolyRing, RingContext};
