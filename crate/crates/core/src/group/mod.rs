//! Product groups `Z^{d1} × T^{d2} × F_p^…` and their points.

mod dyadic;
mod element;
mod int;
mod invariants;
mod literal;
mod spec;

pub use dyadic::{Dyadic, MAX_DYADIC_EXPONENT};
pub use element::{sup_norm, ElementParts, GroupElement, IntCoords, TorusCoords};
pub use int::Int;
pub use invariants::{eta_of, weight_of, KernelAndCosets, MAX_LISTED_LOG2};
pub use literal::parse_dyadic;
pub(crate) use literal::split_top_level;
pub use spec::{FpDim, FpFactor, GroupSpec, TorusRank};
