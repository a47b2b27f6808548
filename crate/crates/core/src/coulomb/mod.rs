//! The twisted convolution algebra over the cocharacter lattice and the
//! abelian Coulomb branch algebra inside it.

mod coproduct;
mod diffop;
mod glue;
mod membership;
mod poisson;

pub use coproduct::{all_splits, check_split, coproduct, factor_through, Tensor};
pub use diffop::{mat_vec, weyl_substitution, DiffOp};
pub use glue::largest_subspace_check;
pub use membership::{basis_element, format_witness, is_member, membership};
pub use poisson::{classical_limit, classical_product, commutator, directional_derivative, poisson_bracket};

use crate::error::{Error, Result};
use crate::roots::RootDatum;

fn check_datum(x: &DiffOp, datum: &RootDatum) -> Result<()> {
    if datum.rank() != x.rank() {
        return Err(Error::TheoryMismatch(format!(
            "Weyl action on rank {} applied to rank {}",
            datum.rank(),
            x.rank()
        )));
    }
    Ok(())
}

pub fn weyl_act(x: &DiffOp, datum: &RootDatum, w: usize) -> Result<DiffOp> {
    check_datum(x, datum)?;
    let e = datum.element(w);
    x.weyl_act(&e.matrix, &e.inverse)
}

/// `sum_{w in W} w·x`.
pub fn weyl_symmetrize(x: &DiffOp, datum: &RootDatum) -> Result<DiffOp> {
    check_datum(x, datum)?;
    let mut out = DiffOp::zero(x.space());
    for w in 0..datum.weyl().len() {
        out = out.add(&weyl_act(x, datum, w)?)?;
    }
    Ok(out)
}

pub fn is_weyl_invariant(x: &DiffOp, datum: &RootDatum) -> Result<bool> {
    check_datum(x, datum)?;
    for s in datum.generator_indices() {
        if weyl_act(x, datum, s)? != *x {
            return Ok(false);
        }
    }
    Ok(true)
}
