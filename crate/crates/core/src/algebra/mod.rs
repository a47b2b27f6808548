//! Exact arithmetic: sparse polynomials and reduced rational functions over
//! the rationals in a named, ordered variable space.

mod gcd;
mod packed;
mod poly;
mod rational;
mod space;
mod subst;

pub use gcd::{content_in, gcd, lcm};
pub use poly::{q_int, Monomial, Polynomial, Q};
pub use rational::{squarefree, RationalFunction};
pub use space::VariableSpace;
pub use subst::{divides, phi_shift, phi_shift_poly, shift_substitution, specialize_zero, Substitution};

pub(crate) use poly::format_rational;
pub(crate) use space::same_space;
