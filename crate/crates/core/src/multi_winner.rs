//! Committee selection under `t`-approval.
//!
//! A voter `t`-approves a `k`-committee `W` when `|A_i ∩ W| >= t`. The audit
//! of `W` at threshold `s` is the fraction of voters that are `s`-flexible
//! yet `t`-disapprove `W`. Two rules reach the best possible guarantee
//! `H(m, ⌈sm⌉, k; t−1)`: the optimal single-winner rule run over all
//! committees, and a greedy sequential rule that needs no enumeration.

use std::collections::HashMap;

use itertools::Itertools;
use num_traits::ToPrimitive;

use crate::error::{FvrError, Result};
use crate::frac::Frac;
use crate::hypergeom::{binomial, hyp_pmf, inverse_cdf_table, HypParams};
use crate::instance::{sorted_overlap, Committee, Instance};
use crate::single_winner::ropt_winner;

/// Default cap on the number of committees a brute-force routine enumerates.
pub const DEFAULT_COMMITTEE_LIMIT: usize = 200_000;

/// Committee size `k` and approval threshold `t`, with `1 <= t <= k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MultiParams {
    k: usize,
    t: usize,
}

impl MultiParams {
    /// Checks `1 <= t <= k < m`.
    pub fn new(k: usize, t: usize, m: usize) -> Result<MultiParams> {
        let params = MultiParams { k, t };
        params.check(m)?;
        Ok(params)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn check(&self, m: usize) -> Result<()> {
        if self.k == 0 || self.k >= m {
            return Err(FvrError::InvalidParams(format!(
                "need 1 <= k < m (k = {}, m = {m})",
                self.k
            )));
        }
        if self.t == 0 || self.t > self.k {
            return Err(FvrError::InvalidParams(format!(
                "need 1 <= t <= k (t = {}, k = {})",
                self.t, self.k
            )));
        }
        Ok(())
    }
}

/// Whether voter `i` approves at least `t` members of `w`.
pub fn t_approves(inst: &Instance, i: usize, w: &Committee, t: usize) -> bool {
    w.overlap(inst.approval_set(i)) >= t
}

/// Errors unless `C(m, k) <= limit`; returns the count otherwise.
pub fn check_committee_count(m: usize, k: usize, limit: usize) -> Result<usize> {
    let count = binomial(m, k);
    match count.to_usize() {
        Some(c) if c <= limit => Ok(c),
        _ => Err(FvrError::SizeLimit {
            what: "committees",
            count: count.to_string(),
            limit,
        }),
    }
}

/// All `k`-subsets of `0..m` in lexicographic order.
pub fn all_committees(m: usize, k: usize) -> impl Iterator<Item = Committee> {
    (0..m).combinations(k).map(Committee::from_sorted)
}

/// The single-winner instance whose candidates are the `k`-committees of
/// the base instance, in lexicographic order. Voter `i` approves committee
/// `j` iff she `t`-approves `committees[j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpandedInstance {
    base: Instance,
    params: MultiParams,
    committees: Vec<Committee>,
    expanded: Instance,
}

impl ExpandedInstance {
    pub fn base(&self) -> &Instance {
        &self.base
    }

    pub fn params(&self) -> MultiParams {
        self.params
    }

    pub fn committees(&self) -> &[Committee] {
        &self.committees
    }

    pub fn expanded(&self) -> &Instance {
        &self.expanded
    }

    pub fn committee(&self, j: usize) -> &Committee {
        &self.committees[j]
    }
}

pub fn expand_instance(inst: &Instance, params: MultiParams) -> Result<ExpandedInstance> {
    expand_instance_with_limit(inst, params, DEFAULT_COMMITTEE_LIMIT)
}

pub fn expand_instance_with_limit(
    inst: &Instance,
    params: MultiParams,
    limit: usize,
) -> Result<ExpandedInstance> {
    params.check(inst.m())?;
    check_committee_count(inst.m(), params.k, limit)?;
    let committees: Vec<Committee> = all_committees(inst.m(), params.k).collect();
    let approvals = inst
        .approvals()
        .iter()
        .map(|set| {
            committees
                .iter()
                .enumerate()
                .filter(|(_, w)| w.overlap(set) >= params.t)
                .map(|(j, _)| j)
                .collect()
        })
        .collect();
    let expanded = Instance::new(committees.len(), approvals)?;
    Ok(ExpandedInstance {
        base: inst.clone(),
        params,
        committees,
        expanded,
    })
}

/// The optimal single-winner rule applied to the expanded instance; ties go
/// to the lexicographically first committee.
pub fn expanded_rule(inst: &Instance, params: MultiParams) -> Result<Committee> {
    let ex = expand_instance(inst, params)?;
    Ok(ex.committees[ropt_winner(&ex.expanded)].clone())
}

/// `Σ 1/H(m, |A_i|, k; t−1)` over the voters that `t`-disapprove `w`.
pub fn committee_score(inst: &Instance, w: &Committee, t: usize) -> Frac {
    let inv = inverse_cdf_table(inst.m(), w.k(), t);
    committee_score_with(inst, w, t, &inv)
}

pub(crate) fn committee_score_with(
    inst: &Instance,
    w: &Committee,
    t: usize,
    inv: &[Option<Frac>],
) -> Frac {
    let mut score = Frac::zero();
    for set in inst.approvals() {
        if w.overlap(set) < t {
            if let Some(x) = &inv[set.len()] {
                score += x;
            }
        }
    }
    score
}

/// The greedy sequential rule.
pub fn sequential_rule(inst: &Instance, params: MultiParams) -> Result<Committee> {
    let mut picks = sequential_picks(inst, params)?;
    picks.sort_unstable();
    Ok(Committee::from_sorted(picks))
}

/// The candidates chosen by [`sequential_rule`] in the order they are added.
///
/// At step `j` (with `j − 1` members chosen so far, forming `C`), voter `i`
/// carries weight
/// `h(m−j−1, |A_i∖C|−1, k−j; t−1−|A_i∩C|) / H(m, |A_i|, k; t−1)`
/// and each remaining candidate scores the total weight of its approvers.
/// The highest score is added, lowest index on ties. Voters whose cdf is zero
/// `t`-approve every committee and carry no weight, as do voters with nothing
/// left to approve outside `C` and voters approving every remaining
/// candidate, whose weight would be the same for every choice.
pub fn sequential_picks(inst: &Instance, params: MultiParams) -> Result<Vec<usize>> {
    let m = inst.m();
    params.check(m)?;
    let (k, t) = (params.k, params.t);
    let inv = inverse_cdf_table(m, k, t);
    let mut chosen = vec![false; m];
    let mut picks = Vec::with_capacity(k);
    let mut overlap = vec![0usize; inst.n()];
    for j in 1..=k {
        let remaining = m - j + 1;
        let mut pmf_cache: HashMap<(usize, usize), Frac> = HashMap::new();
        let mut scores = vec![Frac::zero(); m];
        for (i, set) in inst.approvals().iter().enumerate() {
            let Some(inv_h) = &inv[set.len()] else {
                continue;
            };
            let outside = set.len() - overlap[i];
            if outside == 0 || outside == remaining {
                continue;
            }
            let pmf = pmf_cache.entry((outside, overlap[i])).or_insert_with(|| {
                let hp =
                    HypParams::new(m - j - 1, outside - 1, k - j).expect("outside < remaining");
                hyp_pmf(&hp, t as i64 - 1 - overlap[i] as i64)
            });
            if pmf.is_zero() {
                continue;
            }
            let w = &*pmf * inv_h;
            for &a in set {
                if !chosen[a] {
                    scores[a] += &w;
                }
            }
        }
        let mut best: Option<usize> = None;
        for a in (0..m).filter(|&a| !chosen[a]) {
            if best.map_or(true, |b| scores[a] > scores[b]) {
                best = Some(a);
            }
        }
        let a = best.expect("k < m leaves a candidate");
        chosen[a] = true;
        picks.push(a);
        for (i, set) in inst.approvals().iter().enumerate() {
            if set.binary_search(&a).is_ok() {
                overlap[i] += 1;
            }
        }
    }
    Ok(picks)
}

/// Fraction of voters that are `s`-flexible and `t`-disapprove `w`.
pub fn empirical_fvr_committee(inst: &Instance, w: &Committee, s: &Frac, t: usize) -> Frac {
    let count = (0..inst.n())
        .filter(|&i| inst.is_flexible(i, s) && !t_approves(inst, i, w, t))
        .count();
    Frac::ratio(count, inst.n())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum JrVerdict {
    Pass,
    /// At least `n/k` voters approve `candidate` and no member of the
    /// committee.
    Blocked {
        candidate: usize,
        coalition: Vec<usize>,
    },
}

impl JrVerdict {
    pub fn passes(&self) -> bool {
        matches!(self, JrVerdict::Pass)
    }
}

/// Justified representation: no candidate is approved by `n/k` or more voters
/// who approve nobody in `w`. Reports the lowest blocking candidate.
pub fn jr_check(inst: &Instance, w: &Committee) -> JrVerdict {
    let n = inst.n();
    let k = w.k();
    let unrepresented: Vec<usize> = (0..n)
        .filter(|&i| w.overlap(inst.approval_set(i)) == 0)
        .collect();
    for c in 0..inst.m() {
        let coalition: Vec<usize> = unrepresented
            .iter()
            .copied()
            .filter(|&i| inst.approves(i, c))
            .collect();
        if coalition.len() * k >= n {
            return JrVerdict::Blocked {
                candidate: c,
                coalition,
            };
        }
    }
    JrVerdict::Pass
}

/// The committee `t`-approved by the most `s`-flexible voters, first in
/// lexicographic order among ties.
pub fn brute_best_committee(inst: &Instance, params: MultiParams, s: &Frac) -> Result<Committee> {
    params.check(inst.m())?;
    check_committee_count(inst.m(), params.k, DEFAULT_COMMITTEE_LIMIT)?;
    let flexible: Vec<&[usize]> = (0..inst.n())
        .filter(|&i| inst.is_flexible(i, s))
        .map(|i| inst.approval_set(i))
        .collect();
    let mut best: Option<(usize, Committee)> = None;
    for w in all_committees(inst.m(), params.k) {
        let count = flexible
            .iter()
            .filter(|set| sorted_overlap(w.members(), set) >= params.t)
            .count();
        if best.as_ref().map_or(true, |(c, _)| count > *c) {
            best = Some((count, w));
        }
    }
    Ok(best.expect("at least one committee").1)
}
