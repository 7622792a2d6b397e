//! Exact arithmetic: rationals, π-graded values, truncated power series,
//! Laurent expansions in `1/h` and exact linear solving.

pub mod laurent;
pub mod linalg;
pub mod pipoly;
pub mod rational;
pub mod series;

pub use laurent::HLaurent;
pub use pipoly::PiPoly;
pub use rational::Rational;
pub use series::QSeries;
