//! Exact q-series engine with renormalization, arithmetic coefficient oracles
//! and numerical Maass waveform checks.

pub mod arithmetic;
pub mod catalog;
pub mod error;
pub mod expr;
pub mod maass;
pub mod mp;
pub mod renorm;
pub mod series;

pub use error::{Error, Result};
pub use expr::{Factor, QPoint, QProductExpr};
pub use mp::{MpComplex, MpReal};
pub use series::{Exponent, TruncatedQSeries};
