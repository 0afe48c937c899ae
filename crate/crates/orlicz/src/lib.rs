//! Exact approximation quantities of diagonal operators between Orlicz
//! sequence spaces, with independent brute-force oracles for every closed
//! form.
//!
//! The crate is organized around the objects of the theory:
//!
//! - [`gauge`] — Orlicz functions (convex gauges), their numeric inverses
//!   and the hypothesis checks;
//! - [`luxemburg`] — the Luxemburg norm, modular, and tail errors of
//!   finite sequences;
//! - [`charseq`] — weight families and their characteristic sequences
//!   (distinct levels, level sets, level counts);
//! - [`widths`] — best approximations over coordinate sets, basis widths
//!   and Kolmogorov widths of images of the unit ball, plus sampling
//!   verifiers;
//! - [`nterm`] — the closed-form best n-term approximation with its
//!   extremal sequences and enumeration oracles;
//! - [`oracles`] — standalone checks for the inequality toolkit behind
//!   the formulas.
//!
//! Everything is pure: values are immutable after construction and all
//! randomized verifiers take explicit seeds.

pub mod charseq;
pub mod error;
pub mod gauge;
pub mod kahan;
pub mod luxemburg;
pub mod nterm;
pub mod oracles;
pub mod widths;

pub use charseq::{
    characteristic, rearrange_nonincreasing, rearrangement_consistency, CharacteristicSequences,
    WeightSequence,
};
pub use error::{Error, Result};
pub use gauge::{
    check_domination, default_check_grid, ConditionId, ConditionReport, GaugeKind, OrliczFunction,
};
pub use kahan::KahanSum;
pub use luxemburg::{
    best_coeff_error_oracle, luxemburg_norm, modular, tail_norm, FiniteSequence, IndexSet,
};
pub use nterm::{
    extremal_sequence, flat_candidate_error, sigma_exact, sigma_numeric, sigma_sup_oracle,
    SearchMode, SearchPolicy, SigmaResult,
};
pub use oracles::{
    builtin_gauges, prefix_average_bound_check, random_prefix_average_instance,
    random_slope_case, random_superadditivity_case, scaled_superadditivity_check,
    slope_monotonicity_check, PrefixAverageInstance, PrefixAverageOutcome,
};
pub use widths::{
    ball_containment_check, basis_width, best_approx_over_set, kolmogorov_width,
    sup_lower_bound_oracle, width_on_level_set, ContainmentReport, DiagonalOperator, WidthQuantity,
    WidthReport, WidthWitness,
};
