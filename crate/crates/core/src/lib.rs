//! Abelianized Coulomb branch algebras, Peterson-type shift classes and
//! Seidel/shift operators, all computed in exact arithmetic.

pub mod algebra;
pub mod batch;
pub mod coulomb;
pub mod error;
pub mod gauge;
pub mod parse;
pub mod peterson;
pub mod roots;
pub mod sample;
pub mod shift;

pub use error::{Error, Result};
