//! Explicit extremal sets with their paired Følner sequences and predicted densities.

mod ep;
mod examples;
mod membership;
mod non_qid;
mod probes;
mod product;

pub use ep::{doubling_cycles, find_ep, verify_ep, MAX_EP_PRIME};
pub use examples::{
    fpw_example, in_a_prime, infinite_kernel_example, optimal_density, torus_example, zd_example,
    ZD_SUBSEQUENCE,
};
pub use membership::{odd_coset_example, MembershipSet};
pub use non_qid::{
    default_non_qid_folner, non_qid_example, NonQidConstruction, NonQidTrace, SelectionStep,
    ThinningStep, MAX_PHI_INDEX, MAX_STAGE_INDEX,
};
pub use probes::{fpw_probe, non_qid_triple_probe, product_probe, torus_probe, ProbeReport};
pub use product::{
    a2_stripe, product_default, product_example, product_params, product_stripe_oracle,
    stripe_geometry, StripeRow,
};
