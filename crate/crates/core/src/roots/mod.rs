//! Root data, Weyl groups, dominance, parabolic cosets and `pi_1(P)`.

mod datum;
mod snf;

pub use datum::{Parabolic, RootDatum, RootDatumFile, WeylElement, WEYL_GUARD};
pub use snf::{identity, mat_mul, smith_normal_form, IntMatrix, LatticeQuotient, Smith};
