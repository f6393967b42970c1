pub mod constructions;
pub mod density;
pub mod error;
pub mod folner;
pub mod group;
pub mod ratio;
pub mod search;
pub mod set;

pub use constructions::MembershipSet;
pub use error::{Error, Result};
pub use folner::FolnerSequence;
pub use group::{Dyadic, GroupElement, GroupSpec, Int};
pub use ratio::Ratio;
pub use set::FiniteSet;
