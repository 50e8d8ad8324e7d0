//! Exact algebra in the variables (t, x, y): sparse polynomials, a modular
//! multivariate gcd, canonical rational functions, Laurent polynomials and
//! truncated power series.

pub mod gcd;
pub mod laurent;
pub mod linalg;
pub mod modp;
pub mod mono;
pub mod poly;
pub mod ratfunc;
pub mod ring;
pub mod series;

pub use laurent::LPoly;
pub use mono::{Mono, T, X, Y};
pub use poly::{parse_mpoly, MPoly, Poly, ZPoly};
pub use ratfunc::{parse_ratfunc, RatFunc};
pub use ring::Ring;
pub use series::{series_expand, series_expand_at, Series, TSeries};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("singular matrix")]
    Singular,
    #[error("not expandable as a power series in t")]
    NotExpandable,
    #[error("evaluation at a pole")]
    Pole,
}
