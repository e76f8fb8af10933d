//! Exact hypergeometric probabilities and the multi-winner representation
//! bound built on them.
//!
//! `h(P, K, L; t)` is the probability of drawing exactly `t` successes when
//! sampling `L` items without replacement from a population of `P` items of
//! which `K` are successes. Arguments outside the support give probability 0.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::{FvrError, Result};
use crate::frac::Frac;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HypParams {
    population: usize,
    successes: usize,
    draws: usize,
}

impl HypParams {
    pub fn new(population: usize, successes: usize, draws: usize) -> Result<HypParams> {
        if successes > population || draws > population {
            return Err(FvrError::InvalidParams(format!(
                "hypergeometric parameters need K <= P and L <= P (P = {population}, K = {successes}, L = {draws})"
            )));
        }
        Ok(HypParams {
            population,
            successes,
            draws,
        })
    }

    pub fn population(&self) -> usize {
        self.population
    }

    pub fn successes(&self) -> usize {
        self.successes
    }

    pub fn draws(&self) -> usize {
        self.draws
    }
}

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // C(n, i + 1) = C(n, i) * (n - i) / (i + 1), exact at every step
        match acc.checked_mul((n - i) as u128) {
            Some(v) => acc = v / (i as u128 + 1),
            None => return binomial_big(n, k, i, acc),
        }
    }
    BigUint::from(acc)
}

fn binomial_big(n: usize, k: usize, from: usize, acc: u128) -> BigUint {
    let mut acc = BigUint::from(acc);
    for i in from..k {
        acc *= BigUint::from(n - i);
        acc /= BigUint::from(i + 1);
    }
    acc
}

pub fn binomial_frac(n: usize, k: usize) -> Frac {
    let c = binomial(n, k);
    match c.to_i64() {
        Some(v) => Frac::integer(v),
        None => Frac::from(num_bigint::BigInt::from(c)),
    }
}

fn in_support(p: &HypParams, t: i64) -> Option<usize> {
    if t < 0 {
        return None;
    }
    let t = t as usize;
    if t > p.draws || t > p.successes || p.draws - t > p.population - p.successes {
        return None;
    }
    Some(t)
}

fn to_frac(num: BigUint, den: &BigUint) -> Frac {
    Frac::from_bigints(num.into(), den.clone().into())
}

/// Probability mass `h(P, K, L; t)`; zero outside the support.
pub fn hyp_pmf(params: &HypParams, t: i64) -> Frac {
    match in_support(params, t) {
        None => Frac::zero(),
        Some(t) => {
            let num = binomial(params.successes, t)
                * binomial(params.population - params.successes, params.draws - t);
            to_frac(num, &binomial(params.population, params.draws))
        }
    }
}

/// Cumulative mass `H(P, K, L; t) = Σ_{t'=0..t} h(P, K, L; t')`.
pub fn hyp_cdf(params: &HypParams, t: i64) -> Frac {
    if t < 0 {
        return Frac::zero();
    }
    let top = (t as u64).min(params.draws as u64) as usize;
    if top >= params.successes.min(params.draws) {
        return Frac::one();
    }
    let failures = params.population - params.successes;
    let mut num = BigUint::zero();
    for t in 0..=top {
        if params.draws - t <= failures {
            num += binomial(params.successes, t) * binomial(failures, params.draws - t);
        }
    }
    let den = binomial(params.population, params.draws);
    if num == den {
        return Frac::one();
    }
    to_frac(num, &den)
}

/// `⌈s·m⌉`.
pub fn ceil_share(s: &Frac, m: usize) -> usize {
    (s * Frac::from(m))
        .ceil_usize()
        .expect("share of a nonnegative fraction is a nonnegative count")
}

/// Best achievable multi-winner guarantee `H(m, ⌈s·m⌉, k; t − 1)`: the
/// fraction of `s`-flexible voters that some instance forces to `t`-disapprove
/// every `k`-committee.
pub fn multiwinner_bound(m: usize, s: &Frac, k: usize, t: usize) -> Result<Frac> {
    if k == 0 || k >= m {
        return Err(FvrError::InvalidParams(format!(
            "need 1 <= k < m (k = {k}, m = {m})"
        )));
    }
    if t == 0 || t > k {
        return Err(FvrError::InvalidParams(format!(
            "need 1 <= t <= k (t = {t}, k = {k})"
        )));
    }
    if !s.in_open_unit() {
        return Err(FvrError::FlexibilityOutOfRange(s.clone()));
    }
    let params = HypParams::new(m, ceil_share(s, m), k)?;
    Ok(hyp_cdf(&params, t as i64 - 1))
}

/// Precomputed `1 / H(m, ℓ, k; t − 1)` for every approval count `ℓ` in `0..=m`,
/// `None` where the cdf is zero (a voter with that many approvals
/// `t`-approves every committee).
pub(crate) fn inverse_cdf_table(m: usize, k: usize, t: usize) -> Vec<Option<Frac>> {
    (0..=m)
        .map(|l| {
            let h = hyp_cdf(
                &HypParams {
                    population: m,
                    successes: l,
                    draws: k,
                },
                t as i64 - 1,
            );
            (!h.is_zero()).then(|| h.recip())
        })
        .collect()
}

impl HypParams {
    pub fn pmf(&self, t: i64) -> Frac {
        hyp_pmf(self, t)
    }

    pub fn cdf(&self, t: i64) -> Frac {
        hyp_cdf(self, t)
    }
}
