//! Exact-arithmetic approval voting with guarantees for flexible voters.
//!
//! A voter's flexibility is the fraction of candidates she approves. The
//! crate implements scoring rules that weight voters by flexibility, audits
//! measuring how many flexible voters an outcome leaves without an approved
//! candidate, the best possible guarantees for single winners and
//! committees, and the oracles and generators used to verify them.
//!
//! All arithmetic is exact: every quantity is a [`Frac`].

pub mod audit;
pub mod error;
pub mod frac;
pub mod hypergeom;
pub mod instance;
pub mod multi_winner;
pub mod oracles;
pub mod single_winner;
pub mod weight;

pub use audit::AuditCurve;
pub use error::{FvrError, Result};
pub use frac::{Frac, ParseFracError};
pub use hypergeom::{binomial, ceil_share, hyp_cdf, hyp_pmf, multiwinner_bound, HypParams};
pub use instance::{build_instance, flexibility, Committee, Instance};
pub use multi_winner::{
    all_committees, brute_best_committee, committee_score, empirical_fvr_committee,
    expand_instance, expanded_rule, jr_check, sequential_picks, sequential_rule, t_approves,
    ExpandedInstance, JrVerdict, MultiParams, DEFAULT_COMMITTEE_LIMIT,
};
pub use single_winner::{
    closed_form_fvr, empirical_fvr_curve, empirical_fvr_point, flexibility_grid,
    grid_theoretical_fvr, is_optimal_weight_table, ropt_winner, score_all, winner, BoundKind,
    FvrBound, ScoreVector,
};
pub use weight::{eval_weight, WeightFn, WeightTable};
