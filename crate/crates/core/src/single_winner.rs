//! Single-winner scoring rules, per-instance audits and theoretical
//! guarantees.
//!
//! A scoring rule parameterized by `w` gives each candidate the sum of
//! `w(f_i)` over the voters approving it and elects a highest-scoring
//! candidate, breaking ties toward the lowest index. Voters approving nothing
//! or everything contribute no score.
//!
//! The audit of a chosen candidate `a` at threshold `s` is the fraction of
//! voters that are `s`-flexible yet disapprove `a`. A rule's guarantee at `s`
//! is the worst such fraction over all instances.

use std::collections::BTreeMap;

use crate::audit::AuditCurve;
use crate::error::{FvrError, Result};
use crate::frac::Frac;
use crate::instance::Instance;
use crate::weight::{WeightFn, WeightTable};

/// One score per candidate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScoreVector(Vec<Frac>);

impl ScoreVector {
    pub fn scores(&self) -> &[Frac] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Lowest index attaining the maximum.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (a, score) in self.0.iter().enumerate().skip(1) {
            if *score > self.0[best] {
                best = a;
            }
        }
        best
    }

    pub fn into_inner(self) -> Vec<Frac> {
        self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundKind {
    ClosedForm,
    /// Evaluated on the flexibility grid `{1/m, …, (m−1)/m}`, with the
    /// intermediate supremum `rho` and infimum `phi`.
    Grid {
        m: usize,
        rho: Frac,
        phi: Frac,
    },
}

/// A theoretical guarantee: at most a `value` fraction of voters can be
/// `s`-flexible and disapprove the winner.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FvrBound {
    pub s: Frac,
    pub value: Frac,
    pub kind: BoundKind,
}

/// `{1/m, …, (m−1)/m}`; empty for `m < 2`.
pub fn flexibility_grid(m: usize) -> Vec<Frac> {
    (1..m).map(|j| Frac::ratio(j, m)).collect()
}

/// Per-candidate `w`-scores.
pub fn score_all(inst: &Instance, w: &WeightFn) -> Result<ScoreVector> {
    w.validate()?;
    let m = inst.m();
    // weight depends only on the approval count
    let mut by_count: Vec<Option<Frac>> = vec![None; m + 1];
    let mut scores = vec![Frac::zero(); m];
    for set in inst.approvals() {
        let l = set.len();
        if l == 0 || l == m {
            continue;
        }
        if by_count[l].is_none() {
            by_count[l] = Some(w.eval(&Frac::ratio(l, m))?);
        }
        let weight = by_count[l].as_ref().expect("filled above");
        if weight.is_zero() {
            continue;
        }
        for &a in set {
            scores[a] += weight;
        }
    }
    Ok(ScoreVector(scores))
}

/// Winner of the scoring rule parameterized by `w`.
pub fn winner(inst: &Instance, w: &WeightFn) -> Result<usize> {
    Ok(score_all(inst, w)?.argmax())
}

/// Winner under `w(f) = 1/(1−f)`.
pub fn ropt_winner(inst: &Instance) -> usize {
    winner(inst, &WeightFn::ropt()).expect("the optimal weight is defined on all of (0, 1)")
}

/// Fraction of voters that are `s`-flexible and disapprove candidate `a`.
pub fn empirical_fvr_point(inst: &Instance, a: usize, s: &Frac) -> Frac {
    assert!(
        a < inst.m(),
        "candidate {a} out of range (m = {})",
        inst.m()
    );
    let count = (0..inst.n())
        .filter(|&i| !inst.approves(i, a) && inst.is_flexible(i, s))
        .count();
    Frac::ratio(count, inst.n())
}

/// The audit of candidate `a` as a function of `s`.
pub fn empirical_fvr_curve(inst: &Instance, a: usize) -> AuditCurve {
    assert!(
        a < inst.m(),
        "candidate {a} out of range (m = {})",
        inst.m()
    );
    // disapprovers grouped by approval count; count 0 never passes s > 0
    let mut by_count: BTreeMap<usize, usize> = BTreeMap::new();
    for i in 0..inst.n() {
        let l = inst.approval_count(i);
        if l > 0 && !inst.approves(i, a) {
            *by_count.entry(l).or_default() += 1;
        }
    }
    let mut remaining: usize = by_count.values().sum();
    let mut breakpoints = Vec::with_capacity(by_count.len());
    for (l, count) in by_count {
        breakpoints.push((Frac::ratio(l, inst.m()), Frac::ratio(remaining, inst.n())));
        remaining -= count;
    }
    AuditCurve::new(breakpoints).expect("disapprover steps are sorted and non-increasing")
}

fn check_threshold(s: &Frac) -> Result<()> {
    if s.in_open_unit() {
        Ok(())
    } else {
        Err(FvrError::FlexibilityOutOfRange(s.clone()))
    }
}

/// Exact guarantee of the named weight families.
///
/// * approval: `1/(1+s)`
/// * `p`-power: `1/(1 + (s(1+p))^{1+p} / p^p)`
/// * optimal: `1 − s`
/// * `s0`-threshold: `1` below `s0`, `(1−s0)/(1−s0+s)` from `s0` on, which
///   equals `1 − s` at `s = s0`.
pub fn closed_form_fvr(family: &WeightFn, s: &Frac) -> Result<FvrBound> {
    check_threshold(s)?;
    family.validate()?;
    let one = Frac::one();
    let value = match family {
        WeightFn::Constant => (&one + s).recip(),
        WeightFn::Power(p) => {
            let p = *p;
            let pf = Frac::from(p as usize);
            let ratio = (s * (&one + &pf)).pow(p + 1) / pf.pow(p);
            (&one + ratio).recip()
        }
        WeightFn::Optimal(_) => &one - s,
        WeightFn::Threshold(s0) => {
            if s < s0 {
                one
            } else {
                let rho = &one - s0;
                &rho / (&rho + s)
            }
        }
        WeightFn::Table(_) => {
            return Err(FvrError::UnsupportedFamily(
                "no closed form for tabulated weights; use grid_theoretical_fvr".into(),
            ))
        }
    };
    Ok(FvrBound {
        s: s.clone(),
        value,
        kind: BoundKind::ClosedForm,
    })
}

/// Guarantee `ρ/(ρ+φ)` with `ρ = max (1−f)·w(f)` and `φ = min_{f ≥ s} f·w(f)`
/// taken over the grid `{1/m, …, (m−1)/m}`. When no grid point reaches `s`,
/// `φ` uses the largest grid point.
pub fn grid_theoretical_fvr(w: &WeightFn, s: &Frac, grid_m: usize) -> Result<FvrBound> {
    check_threshold(s)?;
    if grid_m < 2 {
        return Err(FvrError::InvalidParams(format!(
            "grid needs m >= 2, got {grid_m}"
        )));
    }
    w.validate()?;
    let one = Frac::one();
    let grid = flexibility_grid(grid_m);
    let weights = grid.iter().map(|f| w.eval(f)).collect::<Result<Vec<_>>>()?;
    let rho = grid
        .iter()
        .zip(&weights)
        .map(|(f, wf)| (&one - f) * wf)
        .max()
        .expect("grid is nonempty");
    if rho.is_zero() {
        return Err(FvrError::TrivialWeight);
    }
    let start = grid.partition_point(|f| f < s).min(grid.len() - 1);
    let phi = grid[start..]
        .iter()
        .zip(&weights[start..])
        .map(|(f, wf)| f * wf)
        .min()
        .expect("at least one grid point");
    let value = &rho / (&rho + &phi);
    Ok(FvrBound {
        s: s.clone(),
        value,
        kind: BoundKind::Grid {
            m: grid_m,
            rho,
            phi,
        },
    })
}

/// Whether `(1−f)·w(f)` is the same positive constant on every entry.
pub fn is_optimal_weight_table(table: &WeightTable) -> bool {
    let one = Frac::one();
    let mut products = table.entries().map(|(f, w)| (&one - f) * w);
    match products.next() {
        None => false,
        Some(c) => c.is_positive() && products.all(|x| x == c),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::build_instance;

    fn fr(n: i64, d: i64) -> Frac {
        Frac::new(n, d)
    }

    fn intro() -> Instance {
        build_instance(4, vec![vec![1, 2], vec![1, 3], vec![2, 3]]).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<Frac> {
        v.iter().map(|&x| Frac::integer(x)).collect()
    }

    #[test]
    fn intro_scores() {
        let inst = intro();
        assert_eq!(
            score_all(&inst, &WeightFn::Constant).unwrap().scores(),
            ints(&[0, 2, 2, 2]).as_slice()
        );
        assert_eq!(
            score_all(&inst, &WeightFn::ropt()).unwrap().scores(),
            ints(&[0, 4, 4, 4]).as_slice()
        );
        assert_eq!(winner(&inst, &WeightFn::Constant).unwrap(), 1);
        assert_eq!(ropt_winner(&inst), 1);
    }

    #[test]
    fn universal_approvers_are_ignored() {
        let inst = build_instance(3, vec![vec![0, 1, 2], vec![0, 1, 2]]).unwrap();
        for w in [WeightFn::Constant, WeightFn::ropt(), WeightFn::Power(2)] {
            assert!(score_all(&inst, &w)
                .unwrap()
                .scores()
                .iter()
                .all(Frac::is_zero));
        }
        let inst = build_instance(3, vec![vec![0, 1, 2], vec![0]]).unwrap();
        assert_eq!(ropt_winner(&inst), 0);
    }

    #[test]
    fn single_voter_wins_everywhere() {
        let inst = build_instance(3, vec![vec![2]]).unwrap();
        for w in [
            WeightFn::Constant,
            WeightFn::ropt(),
            WeightFn::Power(1),
            WeightFn::Power(3),
            WeightFn::threshold(fr(1, 3)).unwrap(),
        ] {
            assert_eq!(winner(&inst, &w).unwrap(), 2, "{w}");
        }
    }

    #[test]
    fn table_miss_names_flexibility() {
        let inst = intro();
        let table = WeightTable::new([(fr(1, 4), fr(1, 1))]).unwrap();
        assert_eq!(
            score_all(&inst, &WeightFn::Table(table)).unwrap_err(),
            FvrError::MissingTableEntry(fr(1, 2))
        );
    }

    #[test]
    fn intro_audits() {
        let inst = intro();
        assert_eq!(empirical_fvr_point(&inst, 1, &fr(1, 2)), fr(1, 3));
        assert_eq!(empirical_fvr_point(&inst, 0, &fr(1, 2)), Frac::one());
        let curve = empirical_fvr_curve(&inst, 1);
        assert_eq!(curve.breakpoints(), &[(fr(1, 2), fr(1, 3))]);
        assert_eq!(curve.eval(&fr(1, 4)), fr(1, 3));
        assert_eq!(curve.eval(&fr(3, 5)), Frac::zero());
    }

    #[test]
    fn curve_with_two_disapprover_levels() {
        // m = 4; disapprovers of 0 approve 1 and 3 candidates.
        let inst = build_instance(4, vec![vec![1], vec![1, 2, 3], vec![0], vec![0, 1]]).unwrap();
        let curve = empirical_fvr_curve(&inst, 0);
        for (s, v) in [
            (fr(1, 8), fr(2, 4)),
            (fr(1, 2), fr(1, 4)),
            (fr(7, 8), Frac::zero()),
        ] {
            assert_eq!(curve.eval(&s), v);
            assert_eq!(empirical_fvr_point(&inst, 0, &s), v);
        }
    }

    #[test]
    fn universally_approved_candidate_has_zero_curve() {
        let inst = build_instance(3, vec![vec![0], vec![0, 2]]).unwrap();
        assert_eq!(empirical_fvr_curve(&inst, 0), AuditCurve::zero());
        assert_eq!(empirical_fvr_point(&inst, 0, &fr(1, 3)), Frac::zero());
    }

    #[test]
    fn closed_forms() {
        let half = fr(1, 2);
        assert_eq!(
            closed_form_fvr(&WeightFn::Constant, &half).unwrap().value,
            fr(2, 3)
        );
        assert_eq!(
            closed_form_fvr(&WeightFn::Power(1), &half).unwrap().value,
            half
        );
        assert_eq!(
            closed_form_fvr(&WeightFn::Power(2), &fr(2, 3))
                .unwrap()
                .value,
            fr(1, 3)
        );
        assert_eq!(
            closed_form_fvr(&WeightFn::Power(2), &half).unwrap().value,
            fr(32, 59)
        );
        assert_eq!(
            closed_form_fvr(&WeightFn::ropt(), &fr(1, 5)).unwrap().value,
            fr(4, 5)
        );
        let th = WeightFn::threshold(half.clone()).unwrap();
        assert_eq!(closed_form_fvr(&th, &half).unwrap().value, half);
        assert_eq!(closed_form_fvr(&th, &fr(1, 4)).unwrap().value, Frac::one());
        assert_eq!(closed_form_fvr(&th, &fr(3, 4)).unwrap().value, fr(2, 5));
        let table = WeightFn::Table(WeightTable::new([(half.clone(), Frac::one())]).unwrap());
        assert!(matches!(
            closed_form_fvr(&table, &half),
            Err(FvrError::UnsupportedFamily(_))
        ));
        assert!(closed_form_fvr(&WeightFn::Constant, &Frac::one()).is_err());
    }

    #[test]
    fn grid_examples() {
        let b = grid_theoretical_fvr(&WeightFn::Constant, &fr(1, 2), 10).unwrap();
        assert_eq!(b.value, fr(9, 14));
        assert_eq!(
            b.kind,
            BoundKind::Grid {
                m: 10,
                rho: fr(9, 10),
                phi: fr(1, 2)
            }
        );
        let th = WeightFn::threshold(fr(1, 2)).unwrap();
        assert_eq!(
            grid_theoretical_fvr(&th, &fr(1, 4), 4).unwrap().value,
            Frac::one()
        );
        // s off the grid uses the next grid point up
        let b = grid_theoretical_fvr(&WeightFn::ropt(), &fr(1, 3), 4).unwrap();
        assert_eq!(b.value, fr(1, 2));
        // s beyond the last grid point uses the last grid point
        let b = grid_theoretical_fvr(&WeightFn::ropt(), &fr(9, 10), 4).unwrap();
        assert_eq!(b.value, fr(1, 4));
        let zero = WeightFn::Table(
            WeightTable::new([(fr(1, 2), Frac::zero()), (fr(1, 4), Frac::one())]).unwrap(),
        );
        assert!(matches!(
            grid_theoretical_fvr(&zero, &fr(1, 2), 3),
            Err(FvrError::MissingTableEntry(_))
        ));
        assert!(grid_theoretical_fvr(&WeightFn::Constant, &fr(1, 2), 1).is_err());
    }

    #[test]
    fn grid_rejects_trivial_weights() {
        let th = WeightFn::threshold(fr(9, 10)).unwrap();
        assert_eq!(
            grid_theoretical_fvr(&th, &fr(1, 2), 4).unwrap_err(),
            FvrError::TrivialWeight
        );
    }

    #[test]
    fn optimal_table_check() {
        let t = WeightTable::new([
            (fr(1, 4), fr(4, 3)),
            (fr(1, 2), fr(2, 1)),
            (fr(3, 4), fr(4, 1)),
        ])
        .unwrap();
        assert!(is_optimal_weight_table(&t));
        let t = WeightTable::new([(fr(1, 2), Frac::one()), (fr(3, 4), Frac::one())]).unwrap();
        assert!(!is_optimal_weight_table(&t));
        let t = WeightTable::new([(fr(1, 2), fr(2, 1))]).unwrap();
        assert!(is_optimal_weight_table(&t));
        let t = WeightTable::new([(fr(1, 2), fr(2, 1)), (fr(3, 4), Frac::zero())]).unwrap();
        assert!(!is_optimal_weight_table(&t));
    }
}
