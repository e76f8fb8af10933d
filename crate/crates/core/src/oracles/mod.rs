//! Verification oracles, exhaustive enumeration and instance generators.

pub mod brute;
pub mod enumerate;
pub mod generators;
pub mod pvc;

pub use brute::{
    conditional_expected_score, count_t_approved_committees, jr_by_subsets, pmf_by_enumeration,
    strong_pvc_by_subsets,
};
pub use enumerate::{enumerate_instances, DEFAULT_BUDGET};
pub use generators::{
    gen_general_weight_lowerbound, gen_jr_hard, gen_party_split, gen_spread, gen_symmetric,
    gen_thm2_lowerbound, gen_thm3_lowerbound, general_weight_ratio, random_instance, spread_sets,
    GeneratorSpec, DEFAULT_SEED, GENERATOR_NAMES,
};
pub use pvc::{
    enumerate_ranked_profiles, random_ranked_profile, strong_pvc, veto_threshold, RankedProfile,
};
