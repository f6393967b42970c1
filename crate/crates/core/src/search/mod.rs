//! Finite-window search for `t + B + B ⊂ A`, avoidance certificates, the greedy
//! construction for groups with `2G = {0}`, and the coset transforms on witnesses.

mod greedy;
mod transfer;
mod witness;

pub use greedy::greedy_shifted;
pub use transfer::{
    padded_set, padding_transform, refine_witness_to_even, shift_normalize, threshold_transfer,
    ThresholdCheck, Thresholds,
};
pub use witness::{
    budget_from_env, certify_avoidance, find_witness, verify_witness, AvoidanceCertificate,
    PairFilter, SearchProblem, SearchStatus, ShiftMode, WitnessReport, BUDGET_ENV, DEFAULT_BUDGET,
};
