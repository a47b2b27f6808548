//! Shift operators on torus-equivariant quantum cohomology computed by
//! fixed-point localization.

mod assemble;
mod class;
mod connection;
mod givental;
mod model;
mod seidel;

pub use class::{Layout, LocalizedClass, NovikovMap, NovikovSum};
pub use assemble::{assemble_raw, assemble_shift, classical_value, noneq_limit, EntryFile, OperatorTable, TableFile};
pub use connection::{connection_commute_check, ProductTable};
pub use givental::{euler_delta, module_check, shift_of_unit, shift_s, shift_s_untwisted};
pub use model::{Divisor, DivisorFile, FixedPointModel, ModelFile};
pub use seidel::{nn_dual_sign, seidel_image, seidel_linear_rep, seidel_localized};
