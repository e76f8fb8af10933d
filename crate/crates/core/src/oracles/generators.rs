//! Instance generators: the adversarial lower-bound constructions, symmetric
//! and impossibility instances, and a seeded random generator.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{FvrError, Result};
use crate::frac::Frac;
use crate::hypergeom::ceil_share;
use crate::instance::Instance;
use crate::multi_winner::{check_committee_count, DEFAULT_COMMITTEE_LIMIT};
use crate::single_winner::closed_form_fvr;
use crate::weight::WeightFn;

/// Seed used when a caller does not supply one.
pub const DEFAULT_SEED: u64 = 0x5eed_f1e8;

fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(FvrError::InvalidParams(msg.into()))
}

/// `n` approval sets of size `l` over `pool`: each set takes the `l`
/// candidates with the fewest approvals so far, lowest index first on ties.
pub fn spread_sets(n: usize, pool: &[usize], l: usize) -> Vec<Vec<usize>> {
    assert!(
        l <= pool.len(),
        "cannot approve {l} of {} candidates",
        pool.len()
    );
    let mut counts = vec![0usize; pool.len()];
    let mut order: Vec<usize> = (0..pool.len()).collect();
    let mut sets = Vec::with_capacity(n);
    for _ in 0..n {
        order.sort_by_key(|&j| (counts[j], j));
        let mut set: Vec<usize> = order[..l].iter().map(|&j| pool[j]).collect();
        for &j in &order[..l] {
            counts[j] += 1;
        }
        set.sort_unstable();
        sets.push(set);
    }
    sets
}

/// `n` voters approving `l` of the `m` candidates each, spread as evenly as
/// possible.
pub fn gen_spread(n: usize, m: usize, l: usize) -> Result<Instance> {
    if l > m {
        return invalid(format!("spread needs L <= m (L = {l}, m = {m})"));
    }
    let pool: Vec<usize> = (0..m).collect();
    Instance::new(m, spread_sets(n, &pool, l))
}

fn shifted_pool(m: usize) -> Vec<usize> {
    (1..m).collect()
}

fn check_unit(name: &str, x: &Frac) -> Result<()> {
    if x.in_open_unit() {
        Ok(())
    } else {
        invalid(format!("{name} = {x} must lie in (0, 1)"))
    }
}

/// `⌈rn⌉`, required to lie in `[1, n)`.
fn group_size(r: &Frac, n: usize) -> Result<usize> {
    let c = ceil_share(r, n);
    if c == 0 || c >= n {
        return invalid(format!(
            "group size ceil(r·n) = {c} must lie in [1, n) (n = {n})"
        ));
    }
    Ok(c)
}

/// Approval lower-bound instance: `⌈rn⌉` voters approve `⌈sm⌉` candidates
/// of `1..m` spread evenly, and every other voter approves only candidate `0`.
/// Returns the instance and candidate `0`.
pub fn gen_thm2_lowerbound(n: usize, m: usize, s: &Frac, r: &Frac) -> Result<(Instance, usize)> {
    check_unit("s", s)?;
    check_unit("r", r)?;
    let bound = closed_form_fvr(&WeightFn::Constant, s)?.value;
    if *r >= bound {
        return invalid(format!("need r < 1/(1+s) = {bound}, got r = {r}"));
    }
    let c = group_size(r, n)?;
    let l = ceil_share(s, m);
    if l > m - 1 {
        return invalid(format!(
            "ceil(s·m) = {l} exceeds the m − 1 = {} other candidates",
            m - 1
        ));
    }
    let mut approvals = spread_sets(c, &shifted_pool(m), l);
    approvals.extend(std::iter::repeat(vec![0]).take(n - c));
    Ok((Instance::new(m, approvals)?, 0))
}

/// `p`-power lower-bound instance: `⌈rn⌉` voters approve `⌈sm⌉` candidates
/// of `1..m`; every other voter approves candidate `0` and
/// `⌈p·m/(1+p)⌉ − 1` candidates of `1..m`. Both groups are spread evenly.
/// Returns the instance and candidate `0`.
pub fn gen_thm3_lowerbound(
    n: usize,
    m: usize,
    s: &Frac,
    r: &Frac,
    p: u32,
) -> Result<(Instance, usize)> {
    check_unit("s", s)?;
    check_unit("r", r)?;
    if p == 0 {
        return invalid("power p must be at least 1");
    }
    let bound = closed_form_fvr(&WeightFn::Power(p), s)?.value;
    if *r >= bound {
        return invalid(format!(
            "need r below the power-{p} guarantee {bound}, got r = {r}"
        ));
    }
    let c = group_size(r, n)?;
    let l = ceil_share(s, m);
    let share = Frac::new(p as i64, p as i64 + 1);
    let l_rest = ceil_share(&share, m);
    if l > m - 1 || l_rest == 0 || l_rest > m {
        return invalid(format!(
            "approval counts {l} and {l_rest} do not fit m = {m}"
        ));
    }
    let pool = shifted_pool(m);
    let mut approvals = spread_sets(c, &pool, l);
    for mut set in spread_sets(n - c, &pool, l_rest - 1) {
        set.insert(0, 0);
        approvals.push(set);
    }
    Ok((Instance::new(m, approvals)?, 0))
}

/// `(1−f)·w(f) / ((1−f)·w(f) + f′·w(f′))`.
pub fn general_weight_ratio(w: &WeightFn, f: &Frac, fprime: &Frac) -> Result<Frac> {
    let rho = (Frac::one() - f) * w.eval(f)?;
    if !rho.is_positive() {
        return invalid(format!("need w(f) > 0 at f = {f}"));
    }
    let phi = fprime * w.eval(fprime)?;
    Ok(&rho / (&rho + phi))
}

/// Lower-bound instance for an arbitrary weight function. With `m` the least
/// common denominator of `f` and `f′`, a group `B` of `⌊g·n⌋ − m` voters
/// approves `m·f′` candidates of `1..m`; every other voter approves candidate
/// `0` and `m·f − 1` candidates of `1..m`. Both groups are spread evenly.
/// Returns the instance and candidate `0`.
pub fn gen_general_weight_lowerbound(
    w: &WeightFn,
    f: &Frac,
    fprime: &Frac,
    n: usize,
) -> Result<(Instance, usize)> {
    check_unit("f", f)?;
    check_unit("f'", fprime)?;
    let g = general_weight_ratio(w, f, fprime)?;
    let lcm = f.denom().lcm(&fprime.denom());
    let m: usize = match usize::try_from(lcm) {
        Ok(m) if m <= 1 << 16 => m,
        _ => return invalid("denominators of f and f' are too large"),
    };
    let l = (f * Frac::from(m))
        .floor_usize()
        .expect("m·f is a positive integer");
    let lp = (fprime * Frac::from(m))
        .floor_usize()
        .expect("m·f' is a positive integer");
    let floor_gn = (&g * Frac::from(n))
        .floor_usize()
        .expect("g·n is nonnegative");
    if floor_gn < m {
        return invalid(format!(
            "n = {n} too small: floor(g·n) = {floor_gn} is below m = {m}"
        ));
    }
    let b = floor_gn - m;
    let pool = shifted_pool(m);
    let mut approvals = spread_sets(b, &pool, lp);
    for mut set in spread_sets(n - b, &pool, l - 1) {
        set.insert(0, 0);
        approvals.push(set);
    }
    Ok((Instance::new(m, approvals)?, 0))
}

/// One voter per `l`-subset of the `m` candidates, in lexicographic order.
pub fn gen_symmetric(m: usize, l: usize) -> Result<Instance> {
    if l > m {
        return invalid(format!("need L <= m (L = {l}, m = {m})"));
    }
    if check_committee_count(m, l, DEFAULT_COMMITTEE_LIMIT).is_err() {
        return invalid(format!(
            "C({m}, {l}) voters exceeds the limit of {DEFAULT_COMMITTEE_LIMIT}"
        ));
    }
    Instance::new(m, (0..m).combinations(l).collect())
}

/// Two parties of `k` candidates on `m = 2k`. The first `replicas` voters
/// approve `0..k` and the next `replicas` approve `k..2k`.
pub fn gen_party_split(k: usize, replicas: usize) -> Result<Instance> {
    if k < 2 {
        return invalid(format!("party split needs k >= 2, got {k}"));
    }
    if replicas == 0 {
        return invalid("replication factor must be positive");
    }
    let mut approvals = vec![(0..k).collect::<Vec<_>>(); replicas];
    approvals.extend(std::iter::repeat((k..2 * k).collect::<Vec<_>>()).take(replicas));
    Instance::new(2 * k, approvals)
}

/// Justified-representation hard instance on candidates
/// `B = 0..k−1` and `C = k−1..m`. For each `j < k − 1` a group of
/// `m − k + 1` voters approves only `j`; a final group of `m − k + 1` voters
/// approves all of `C` except one distinct member each.
pub fn gen_jr_hard(m: usize, k: usize) -> Result<Instance> {
    if k < 2 || m <= k {
        return invalid(format!("need m > k >= 2 (m = {m}, k = {k})"));
    }
    let group = m - k + 1;
    let mut approvals = Vec::with_capacity(k * group);
    for b in 0..k - 1 {
        approvals.extend(std::iter::repeat(vec![b]).take(group));
    }
    for skip in k - 1..m {
        approvals.push((k - 1..m).filter(|&c| c != skip).collect());
    }
    Instance::new(m, approvals)
}

/// Every approval is included independently with probability 1/2.
pub fn random_instance(n: usize, m: usize, seed: u64) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let approvals = (0..n)
        .map(|_| (0..m).filter(|_| rng.random_bool(0.5)).collect())
        .collect();
    Instance::new(m, approvals)
}

/// A generator name with named parameters, written `name key=value ...`.
///
/// Weight tables for `general_weight` are given entry by entry as
/// `w:<f>=<weight>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub name: String,
    pub params: BTreeMap<String, Frac>,
}

pub const GENERATOR_NAMES: &[&str] = &[
    "spread",
    "thm2",
    "thm3",
    "general_weight",
    "symmetric",
    "party_split",
    "jr_hard",
    "random",
];

impl GeneratorSpec {
    pub fn new(name: impl Into<String>) -> GeneratorSpec {
        GeneratorSpec {
            name: name.into(),
            params: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: impl Into<String>, value: Frac) -> GeneratorSpec {
        self.params.insert(key.into(), value);
        self
    }

    fn frac(&self, key: &str) -> Result<Frac> {
        self.params.get(key).cloned().ok_or_else(|| {
            FvrError::InvalidParams(format!("generator {} needs parameter {key}", self.name))
        })
    }

    fn int(&self, key: &str) -> Result<usize> {
        let v = self.frac(key)?;
        self.as_int(key, &v)
    }

    fn int_or(&self, key: &str, default: usize) -> Result<usize> {
        match self.params.get(key) {
            None => Ok(default),
            Some(v) => self.as_int(key, v),
        }
    }

    fn as_int(&self, key: &str, v: &Frac) -> Result<usize> {
        if !v.is_integer() {
            return invalid(format!("parameter {key} must be an integer, got {v}"));
        }
        v.floor_usize().ok_or_else(|| {
            FvrError::InvalidParams(format!("parameter {key} must be nonnegative, got {v}"))
        })
    }

    fn table(&self) -> Result<WeightFn> {
        let entries = self
            .params
            .iter()
            .filter_map(|(key, v)| key.strip_prefix("w:").map(|f| (f, v)))
            .map(|(f, v)| {
                let f: Frac = f
                    .parse()
                    .map_err(|e| FvrError::InvalidParams(format!("weight key: {e}")))?;
                Ok((f, v.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        if entries.is_empty() {
            return invalid("general_weight needs table entries w:<f>=<weight>");
        }
        Ok(WeightFn::Table(crate::weight::WeightTable::new(entries)?))
    }

    /// Runs the generator. The second component is the special candidate of
    /// the lower-bound constructions.
    pub fn generate(&self) -> Result<(Instance, Option<usize>)> {
        let plain = |inst: Instance| (inst, None);
        let special = |(inst, a): (Instance, usize)| (inst, Some(a));
        match self.name.as_str() {
            "spread" => gen_spread(self.int("n")?, self.int("m")?, self.int("l")?).map(plain),
            "thm2" => gen_thm2_lowerbound(
                self.int("n")?,
                self.int("m")?,
                &self.frac("s")?,
                &self.frac("r")?,
            )
            .map(special),
            "thm3" => {
                let p = u32::try_from(self.int("p")?)
                    .map_err(|_| FvrError::InvalidParams("p too large".into()))?;
                gen_thm3_lowerbound(
                    self.int("n")?,
                    self.int("m")?,
                    &self.frac("s")?,
                    &self.frac("r")?,
                    p,
                )
                .map(special)
            }
            "general_weight" => gen_general_weight_lowerbound(
                &self.table()?,
                &self.frac("f")?,
                &self.frac("fprime")?,
                self.int("n")?,
            )
            .map(special),
            "symmetric" => gen_symmetric(self.int("m")?, self.int("l")?).map(plain),
            "party_split" => {
                gen_party_split(self.int("k")?, self.int_or("replicas", 1)?).map(plain)
            }
            "jr_hard" => gen_jr_hard(self.int("m")?, self.int("k")?).map(plain),
            "random" => {
                let seed = self.int_or("seed", DEFAULT_SEED as usize)? as u64;
                random_instance(self.int("n")?, self.int("m")?, seed).map(plain)
            }
            other => Err(FvrError::InvalidParams(format!(
                "unknown generator {other}; valid names: {}",
                GENERATOR_NAMES.join(", ")
            ))),
        }
    }
}

impl FromStr for GeneratorSpec {
    type Err = FvrError;

    fn from_str(s: &str) -> Result<GeneratorSpec> {
        let mut words = s.split_whitespace();
        let name = words
            .next()
            .ok_or_else(|| FvrError::InvalidParams("empty generator spec".into()))?;
        let mut spec = GeneratorSpec::new(name);
        for word in words {
            let (key, value) = word.split_once('=').ok_or_else(|| {
                FvrError::InvalidParams(format!("expected key=value, got {word:?}"))
            })?;
            let value: Frac = value
                .parse()
                .map_err(|e| FvrError::InvalidParams(format!("parameter {key}: {e}")))?;
            spec.params.insert(key.to_string(), value);
        }
        Ok(spec)
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        for (key, value) in &self.params {
            write!(f, " {key}={value}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::single_winner::{empirical_fvr_point, ropt_winner, winner};

    fn fr(n: i64, d: i64) -> Frac {
        Frac::new(n, d)
    }

    #[test]
    fn spread_example() {
        let inst = gen_spread(3, 4, 2).unwrap();
        assert_eq!(inst.approvals(), &[vec![0, 1], vec![2, 3], vec![0, 1]]);
        assert_eq!(inst.approval_counts(), vec![2, 2, 1, 1]);
        assert!(gen_spread(2, 3, 0)
            .unwrap()
            .approvals()
            .iter()
            .all(Vec::is_empty));
        assert!(gen_spread(2, 3, 3)
            .unwrap()
            .approvals()
            .iter()
            .all(|s| s.len() == 3));
        assert!(gen_spread(2, 3, 4).is_err());
    }

    #[test]
    fn thm2_example() {
        let (inst, a) = gen_thm2_lowerbound(12, 10, &fr(1, 2), &fr(7, 12)).unwrap();
        let counts = inst.approval_counts();
        assert_eq!(counts[a], 5);
        assert!(counts[1..].iter().all(|&c| c <= 4));
        assert_eq!(winner(&inst, &WeightFn::Constant).unwrap(), a);
        assert_eq!(empirical_fvr_point(&inst, a, &fr(1, 2)), fr(7, 12));
        assert_ne!(ropt_winner(&inst), a);
        assert!(gen_thm2_lowerbound(12, 10, &fr(1, 2), &fr(2, 3)).is_err());
    }

    #[test]
    fn thm3_example() {
        let (inst, a) = gen_thm3_lowerbound(40, 20, &fr(1, 2), &fr(9, 20), 1).unwrap();
        assert_eq!(winner(&inst, &WeightFn::Power(1)).unwrap(), a);
        assert_eq!(empirical_fvr_point(&inst, a, &fr(1, 2)), fr(18, 40));
        assert!(gen_thm3_lowerbound(40, 20, &fr(1, 2), &fr(1, 2), 1).is_err());
    }

    #[test]
    fn general_weight_example() {
        let w = WeightFn::Table(
            crate::weight::WeightTable::new([(fr(1, 4), fr(1, 1)), (fr(1, 2), fr(1, 1))]).unwrap(),
        );
        assert_eq!(
            general_weight_ratio(&w, &fr(1, 4), &fr(1, 2)).unwrap(),
            fr(3, 5)
        );
        let (inst, a) = gen_general_weight_lowerbound(&w, &fr(1, 4), &fr(1, 2), 200).unwrap();
        assert_eq!(inst.m(), 4);
        assert_eq!(winner(&inst, &w).unwrap(), a);
        assert_eq!(empirical_fvr_point(&inst, a, &fr(1, 2)), fr(116, 200));
        let zero = WeightFn::Table(
            crate::weight::WeightTable::new([(fr(1, 4), fr(0, 1)), (fr(1, 2), fr(1, 1))]).unwrap(),
        );
        assert!(gen_general_weight_lowerbound(&zero, &fr(1, 4), &fr(1, 2), 200).is_err());
    }

    #[test]
    fn symmetric_and_party_split() {
        let inst = gen_symmetric(3, 2).unwrap();
        assert_eq!(inst.approvals(), &[vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(gen_symmetric(4, 2).unwrap().n(), 6);
        assert_eq!(
            gen_symmetric(3, 0).unwrap().approvals(),
            &[Vec::<usize>::new()]
        );
        let inst = gen_party_split(2, 1).unwrap();
        assert_eq!(inst.approvals(), &[vec![0, 1], vec![2, 3]]);
        assert!((0..inst.n()).all(|i| inst.flexibility(i).unwrap() == fr(1, 2)));
        assert_eq!(gen_party_split(3, 2).unwrap().n(), 4);
        assert!(gen_party_split(1, 1).is_err());
    }

    #[test]
    fn jr_hard_example() {
        let inst = gen_jr_hard(6, 2).unwrap();
        assert_eq!(inst.n(), 10);
        assert!(inst.approvals()[..5].iter().all(|s| s == &[0]));
        for (j, set) in inst.approvals()[5..].iter().enumerate() {
            assert_eq!(set.len(), 4);
            assert!(!set.contains(&(j + 1)));
            assert_eq!(Frac::ratio(set.len(), 6), fr(2, 3));
        }
        assert!(gen_jr_hard(3, 3).is_err());
    }

    #[test]
    fn random_is_deterministic() {
        assert_eq!(
            random_instance(5, 6, 7).unwrap(),
            random_instance(5, 6, 7).unwrap()
        );
    }

    #[test]
    fn spec_parsing() {
        let spec: GeneratorSpec = "party_split k=2".parse().unwrap();
        assert_eq!(spec.generate().unwrap().0, gen_party_split(2, 1).unwrap());
        let spec: GeneratorSpec = "general_weight f=1/4 fprime=1/2 n=200 w:1/4=1 w:1/2=1"
            .parse()
            .unwrap();
        assert_eq!(spec.generate().unwrap().1, Some(0));
        assert!("nope k=2"
            .parse::<GeneratorSpec>()
            .unwrap()
            .generate()
            .is_err());
        assert!("spread n=2 m=3"
            .parse::<GeneratorSpec>()
            .unwrap()
            .generate()
            .is_err());
        assert!("spread n=1/2 m=3 l=1"
            .parse::<GeneratorSpec>()
            .unwrap()
            .generate()
            .is_err());
        assert!("spread n".parse::<GeneratorSpec>().is_err());
    }
}
