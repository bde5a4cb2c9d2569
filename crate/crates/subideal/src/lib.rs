//! Exact and approximate border bases of vanishing ideals of finite point
//! sets, including subideal variants where the basis is constrained to lie
//! inside a given polynomial ideal.

pub mod allocate;
pub mod avi;
pub mod bm;
pub mod division;
pub mod error;
pub mod linalg;
pub mod order;
pub mod parse;
pub mod points;
pub mod poly;
pub mod scalar;
pub mod term;

pub use error::{Error, Result};
pub use points::PointSet;
pub use poly::Polynomial;
pub use scalar::{Coeff, Rat};
pub use term::{Term, TermOrdering};
