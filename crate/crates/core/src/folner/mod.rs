//! Følner sequences: recipes, windows, and the metrics that witness their properties.

mod appendix;
pub(crate) mod build;
mod defects;
mod enumeration;
mod expr;
mod grammar;
mod sequence;
mod tri;

pub use appendix::{
    shipped_suite, AppendixRow, AppendixTolerances, SHIPPED_SUITE, SUITE_WINDOW_LIMIT,
};
pub use build::{centered_interval, punctured_interval};
pub use defects::{
    doubling_overlap, doubling_overlap_count, translation_defect, DefectReport, TranslationDefect,
    DEFECT_SEED, RANDOM_TEST_ELEMENTS,
};
pub use enumeration::{natural_level, natural_size, natural_window, Enumeration};
pub use expr::{Expr, NExpr, Op};
pub use sequence::{FolnerSequence, IntersectionGuard, Recipe, Shift, GUARD_BOUND};
pub use tri::{Stripe, TriKind, TriParams, VChoice, VALIDATION_HORIZON};
