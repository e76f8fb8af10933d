//! Approval profiles and committees.

use std::fmt;

use crate::error::{FvrError, Result};
use crate::frac::Frac;

/// An approval election: `m` candidates `0..m` and one approval set per voter.
///
/// Approval sets are kept sorted and free of duplicates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Instance {
    m: usize,
    approvals: Vec<Vec<usize>>,
}

/// Validates and builds an instance. Duplicate indices within one approval
/// set are collapsed; voter order is preserved.
pub fn build_instance(m: usize, approvals: Vec<Vec<usize>>) -> Result<Instance> {
    Instance::new(m, approvals)
}

/// `|A_i| / m` for voter `i`.
pub fn flexibility(inst: &Instance, i: usize) -> Result<Frac> {
    inst.flexibility(i)
}

impl Instance {
    pub fn new(m: usize, approvals: Vec<Vec<usize>>) -> Result<Instance> {
        if m == 0 {
            return Err(FvrError::NoCandidates);
        }
        if approvals.is_empty() {
            return Err(FvrError::NoVoters);
        }
        let mut approvals = approvals;
        for (voter, set) in approvals.iter_mut().enumerate() {
            if let Some(&index) = set.iter().find(|&&a| a >= m) {
                return Err(FvrError::ApprovalOutOfRange { voter, index, m });
            }
            set.sort_unstable();
            set.dedup();
        }
        Ok(Instance { m, approvals })
    }

    /// Builds an instance from per-voter bitmasks (bit `a` set means the voter
    /// approves candidate `a`). Requires `m <= 64`.
    pub fn from_masks(m: usize, masks: &[u64]) -> Result<Instance> {
        if m > 64 {
            return Err(FvrError::InvalidParams(format!(
                "bitmask profiles need m <= 64, got {m}"
            )));
        }
        let approvals = masks
            .iter()
            .map(|&mask| (0..m).filter(|&a| mask >> a & 1 == 1).collect())
            .collect();
        let extra = masks
            .iter()
            .enumerate()
            .find(|(_, &mask)| m < 64 && mask >> m != 0);
        if let Some((voter, &mask)) = extra {
            let index = 63 - mask.leading_zeros() as usize;
            return Err(FvrError::ApprovalOutOfRange { voter, index, m });
        }
        Instance::new(m, approvals)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.approvals.len()
    }

    pub fn approvals(&self) -> &[Vec<usize>] {
        &self.approvals
    }

    /// Sorted approval set of voter `i`. Panics if `i >= n`.
    pub fn approval_set(&self, i: usize) -> &[usize] {
        &self.approvals[i]
    }

    pub fn approval_count(&self, i: usize) -> usize {
        self.approvals[i].len()
    }

    pub fn approves(&self, i: usize, a: usize) -> bool {
        self.approvals[i].binary_search(&a).is_ok()
    }

    pub fn flexibility(&self, i: usize) -> Result<Frac> {
        if i >= self.n() {
            return Err(FvrError::VoterOutOfRange {
                voter: i,
                n: self.n(),
            });
        }
        Ok(Frac::ratio(self.approvals[i].len(), self.m))
    }

    /// Whether voter `i` approves at least an `s`-fraction of the candidates.
    pub fn is_flexible(&self, i: usize, s: &Frac) -> bool {
        Frac::ratio(self.approvals[i].len(), self.m) >= *s
    }

    /// Number of approvals each candidate receives.
    pub fn approval_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.m];
        for set in &self.approvals {
            for &a in set {
                counts[a] += 1;
            }
        }
        counts
    }

    pub fn check_candidate(&self, a: usize) -> Result<()> {
        if a >= self.m {
            Err(FvrError::CandidateOutOfRange {
                candidate: a,
                m: self.m,
            })
        } else {
            Ok(())
        }
    }

    /// Renames candidate `a` to `perm[a]` in every approval set.
    pub fn relabel(&self, perm: &[usize]) -> Result<Instance> {
        let mut seen = vec![false; self.m];
        if perm.len() != self.m
            || perm
                .iter()
                .any(|&p| p >= self.m || std::mem::replace(&mut seen[p], true))
        {
            return Err(FvrError::InvalidParams(
                "relabeling must be a permutation of 0..m".into(),
            ));
        }
        let approvals = self
            .approvals
            .iter()
            .map(|set| set.iter().map(|&a| perm[a]).collect())
            .collect();
        Instance::new(self.m, approvals)
    }
}

/// A set of `k` distinct candidates, stored sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Committee(Vec<usize>);

impl Committee {
    pub fn new(members: Vec<usize>, m: usize) -> Result<Committee> {
        let mut members = members;
        members.sort_unstable();
        if members.windows(2).any(|w| w[0] == w[1]) {
            return Err(FvrError::InvalidCommittee(format!(
                "repeated member in {members:?}"
            )));
        }
        if let Some(&a) = members.last() {
            if a >= m {
                return Err(FvrError::InvalidCommittee(format!(
                    "member {a} out of range (m = {m})"
                )));
            }
        }
        Ok(Committee(members))
    }

    /// Trusts the caller to pass sorted, distinct, in-range members.
    pub(crate) fn from_sorted(members: Vec<usize>) -> Committee {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Committee(members)
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, a: usize) -> bool {
        self.0.binary_search(&a).is_ok()
    }

    /// `|self ∩ set|` for a sorted set.
    pub fn overlap(&self, set: &[usize]) -> usize {
        sorted_overlap(&self.0, set)
    }
}

impl fmt::Display for Committee {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (j, a) in self.0.iter().enumerate() {
            if j > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}

pub(crate) fn sorted_overlap(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    fn intro() -> Instance {
        build_instance(4, vec![vec![1, 2], vec![1, 3], vec![2, 3]]).unwrap()
    }

    #[test]
    fn intro_instance_flexibilities() {
        let inst = intro();
        assert_eq!(inst.n(), 3);
        assert_eq!(flexibility(&inst, 0).unwrap(), Frac::new(1, 2));
    }

    #[test]
    fn empty_approval_has_zero_flexibility() {
        let inst = build_instance(1, vec![vec![]]).unwrap();
        assert_eq!(inst.flexibility(0).unwrap(), Frac::zero());
    }

    #[test]
    fn out_of_range_index_names_voter_and_index() {
        let err = build_instance(3, vec![vec![0, 3]]).unwrap_err();
        assert_eq!(
            err,
            FvrError::ApprovalOutOfRange {
                voter: 0,
                index: 3,
                m: 3
            }
        );
        assert_eq!(
            build_instance(0, vec![vec![]]).unwrap_err(),
            FvrError::NoCandidates
        );
        assert_eq!(build_instance(2, vec![]).unwrap_err(), FvrError::NoVoters);
    }

    #[test]
    fn full_and_partial_flexibility() {
        let inst = build_instance(10, vec![(0..10).collect(), vec![1, 3, 5, 7]]).unwrap();
        assert_eq!(inst.flexibility(0).unwrap(), Frac::one());
        assert_eq!(inst.flexibility(1).unwrap(), Frac::new(2, 5));
        assert!(matches!(
            inst.flexibility(2),
            Err(FvrError::VoterOutOfRange { .. })
        ));
    }

    #[test]
    fn duplicates_are_collapsed() {
        let inst = build_instance(3, vec![vec![2, 0, 2]]).unwrap();
        assert_eq!(inst.approval_set(0), &[0, 2]);
    }

    #[test]
    fn masks_round_trip() {
        let inst = Instance::from_masks(4, &[0b0110, 0b1010, 0b1100]).unwrap();
        assert_eq!(inst, intro());
        assert!(Instance::from_masks(2, &[0b100]).is_err());
    }

    #[test]
    fn committee_validation_and_overlap() {
        let w = Committee::new(vec![3, 0], 4).unwrap();
        assert_eq!(w.members(), &[0, 3]);
        assert_eq!(w.to_string(), "{0, 3}");
        assert_eq!(w.overlap(&[0, 1]), 1);
        assert!(Committee::new(vec![1, 1], 4).is_err());
        assert!(Committee::new(vec![4], 4).is_err());
    }
}
