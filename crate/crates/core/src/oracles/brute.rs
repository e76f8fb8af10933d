//! Brute-force oracles that evaluate definitions directly by enumeration.

use itertools::Itertools;

use crate::error::{FvrError, Result};
use crate::frac::Frac;
use crate::hypergeom::inverse_cdf_table;
use crate::instance::{sorted_overlap, Committee, Instance};
use crate::multi_winner::{
    check_committee_count, committee_score_with, MultiParams, DEFAULT_COMMITTEE_LIMIT,
};
use crate::oracles::pvc::{veto_threshold, RankedProfile};

/// Average committee score over all `k`-committees containing `partial`.
pub fn conditional_expected_score(
    inst: &Instance,
    params: MultiParams,
    partial: &[usize],
) -> Result<Frac> {
    let m = inst.m();
    params.check(m)?;
    let fixed = Committee::new(partial.to_vec(), m)?;
    if fixed.k() > params.k() {
        return Err(FvrError::InvalidCommittee(format!(
            "partial committee {fixed} has more than k = {} members",
            params.k()
        )));
    }
    let free: Vec<usize> = (0..m).filter(|&a| !fixed.contains(a)).collect();
    let extra = params.k() - fixed.k();
    check_committee_count(free.len(), extra, DEFAULT_COMMITTEE_LIMIT)?;
    let inv = inverse_cdf_table(m, params.k(), params.t());
    let mut total = Frac::zero();
    let mut count = 0usize;
    for rest in free.iter().copied().combinations(extra) {
        let mut members = fixed.members().to_vec();
        members.extend(rest);
        let w = Committee::new(members, m)?;
        total += committee_score_with(inst, &w, params.t(), &inv);
        count += 1;
    }
    Ok(total / Frac::from(count))
}

/// Number of `k`-committees that voter `i` `t`-approves.
pub fn count_t_approved_committees(inst: &Instance, i: usize, k: usize, t: usize) -> usize {
    let set = inst.approval_set(i);
    (0..inst.m())
        .combinations(k)
        .filter(|w| sorted_overlap(w, set) >= t)
        .count()
}

/// `h(P, K, L; t)` by counting `L`-subsets of `0..P` that contain exactly
/// `t` of the first `K` items.
pub fn pmf_by_enumeration(population: usize, successes: usize, draws: usize, t: usize) -> Frac {
    let mut hits = 0usize;
    let mut total = 0usize;
    for subset in (0..population).combinations(draws) {
        total += 1;
        if subset.iter().filter(|&&x| x < successes).count() == t {
            hits += 1;
        }
    }
    Frac::ratio(hits, total)
}

/// Justified representation decided over all voter subsets: fails iff some
/// group of at least `n/k` voters shares an approved candidate and approves
/// nobody in `w`. Limited to `n <= 20`.
pub fn jr_by_subsets(inst: &Instance, w: &Committee) -> bool {
    let n = inst.n();
    assert!(n <= 20, "subset oracle limited to 20 voters");
    let k = w.k();
    for mask in 1u32..(1 << n) {
        let group: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        if group.len() * k < n {
            continue;
        }
        if group.iter().any(|&i| w.overlap(inst.approval_set(i)) > 0) {
            continue;
        }
        let cohesive = (0..inst.m()).any(|c| group.iter().all(|&i| inst.approves(i, c)));
        if cohesive {
            return false;
        }
    }
    true
}

/// Strong proportional veto core decided over all voter subsets.
pub fn strong_pvc_by_subsets(profile: &RankedProfile) -> Vec<usize> {
    let (m, n) = (profile.m(), profile.n());
    assert!(n <= 20, "subset oracle limited to 20 voters");
    (0..m)
        .filter(|&a| {
            !(1u32..(1 << n)).any(|mask| {
                let members: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
                let threshold = veto_threshold(m, n, members.len());
                members.iter().all(|&i| profile.position(i, a) >= threshold)
            })
        })
        .collect()
}
