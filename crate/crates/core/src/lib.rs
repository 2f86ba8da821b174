//! Exact computer algebra for approximate solutions of polynomial systems
//! over formal power series in one or two variables.

pub mod error;
pub mod field;
pub mod ideal;
pub mod poly;
pub mod series;
pub mod solver;
pub mod weierstrass;

pub use error::{Error, Result, Stage};
pub use field::{Domain, FieldElement};
pub use ideal::{Ideal, MonomialOrder};
pub use poly::{parse_polynomial, Monomial, PolyMatrix, Polynomial, Ring};
pub use series::{OrderValue, SeriesVector, TruncatedSeries};
