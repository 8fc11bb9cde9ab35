//! Exact q-series arithmetic for theta functions, Appell-Lerch sums,
//! Hecke-type double sums and the classical mock theta functions.

pub mod appell;
pub mod catalog;
pub mod dsl;
pub mod error;
pub mod hecke;
pub mod number;
mod product;
pub mod series;
pub mod theta;

pub use error::{Error, Result};
pub use number::{GaussianRational, QExponent};
pub use series::{unit_fraction_expand, QMonomial, QSeries};
