//! Ranked profiles and the strong proportional veto core.
//!
//! A group of `g` voters weakly vetoes candidate `a` when each member prefers
//! at least `m − ⌈m·g/n⌉ + 1` candidates to `a`. The strong proportional veto
//! core is the set of candidates no group weakly vetoes.

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{FvrError, Result};

/// `n` strict rankings of the candidates `0..m`, most preferred first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RankedProfile {
    m: usize,
    rankings: Vec<Vec<usize>>,
    /// `positions[i][a]` is the number of candidates voter `i` ranks above `a`.
    positions: Vec<Vec<usize>>,
}

impl RankedProfile {
    pub fn new(m: usize, rankings: Vec<Vec<usize>>) -> Result<RankedProfile> {
        if m == 0 {
            return Err(FvrError::NoCandidates);
        }
        if rankings.is_empty() {
            return Err(FvrError::NoVoters);
        }
        let mut positions = Vec::with_capacity(rankings.len());
        for (i, ranking) in rankings.iter().enumerate() {
            let mut pos = vec![usize::MAX; m];
            if ranking.len() != m {
                return Err(FvrError::InvalidRanking(format!(
                    "voter {i} ranks {} candidates, expected {m}",
                    ranking.len()
                )));
            }
            for (p, &a) in ranking.iter().enumerate() {
                if a >= m {
                    return Err(FvrError::InvalidRanking(format!(
                        "voter {i} ranks candidate {a} (m = {m})"
                    )));
                }
                if pos[a] != usize::MAX {
                    return Err(FvrError::InvalidRanking(format!(
                        "voter {i} ranks candidate {a} twice"
                    )));
                }
                pos[a] = p;
            }
            positions.push(pos);
        }
        Ok(RankedProfile {
            m,
            rankings,
            positions,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.rankings.len()
    }

    pub fn rankings(&self) -> &[Vec<usize>] {
        &self.rankings
    }

    /// Number of candidates voter `i` prefers to `a`.
    pub fn position(&self, i: usize, a: usize) -> usize {
        self.positions[i][a]
    }
}

/// `m − ⌈m·g/n⌉ + 1`: how many candidates each member of a group of size `g`
/// must prefer to a candidate to veto it.
pub fn veto_threshold(m: usize, n: usize, g: usize) -> usize {
    m - (m * g).div_ceil(n) + 1
}

/// Candidates in the strong proportional veto core, ascending.
///
/// For each candidate and group size `g` it suffices to count the voters
/// ranking the candidate at or below the threshold position.
pub fn strong_pvc(profile: &RankedProfile) -> Vec<usize> {
    let (m, n) = (profile.m(), profile.n());
    (0..m)
        .filter(|&a| {
            !(1..=n).any(|g| {
                let threshold = veto_threshold(m, n, g);
                let count = (0..n)
                    .filter(|&i| profile.position(i, a) >= threshold)
                    .count();
                count >= g
            })
        })
        .collect()
}

/// Every profile of `n` rankings over `m` candidates, `(m!)^n` in total.
/// Voter 0 varies fastest; permutations follow lexicographic order.
pub fn enumerate_ranked_profiles(
    n: usize,
    m: usize,
    budget: usize,
) -> Result<impl Iterator<Item = RankedProfile>> {
    if n == 0 || m == 0 {
        return Err(FvrError::InvalidParams(format!(
            "need n >= 1 and m >= 1 (n = {n}, m = {m})"
        )));
    }
    let perms: Vec<Vec<usize>> = (0..m).permutations(m).collect();
    let count = BigUint::from(perms.len()).pow(n as u32);
    let total = match count.to_usize() {
        Some(c) if c <= budget => c,
        _ => {
            return Err(FvrError::BudgetExceeded {
                count: count.to_string(),
                budget,
            })
        }
    };
    Ok((0..total).map(move |mut x| {
        let rankings = (0..n)
            .map(|_| {
                let r = perms[x % perms.len()].clone();
                x /= perms.len();
                r
            })
            .collect();
        RankedProfile::new(m, rankings).expect("permutations are valid rankings")
    }))
}

/// Uniformly random rankings.
pub fn random_ranked_profile(n: usize, m: usize, seed: u64) -> Result<RankedProfile> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rankings = (0..n)
        .map(|_| {
            let mut r: Vec<usize> = (0..m).collect();
            r.shuffle(&mut rng);
            r
        })
        .collect();
    RankedProfile::new(m, rankings)
}
