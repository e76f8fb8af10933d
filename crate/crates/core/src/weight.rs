//! Weight functions mapping voter flexibility to score weight.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{FvrError, Result};
use crate::frac::Frac;

/// The weight families used by scoring rules.
///
/// Every family is evaluated on flexibilities in the open interval `(0, 1)`.
/// Voters with flexibility `0` or `1` never have their weight evaluated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeightFn {
    /// `w(f) = 1`: the approval rule.
    Constant,
    /// `w(f) = 1` if `f >= s0`, else `0`.
    Threshold(Frac),
    /// `w(f) = f^p`.
    Power(u32),
    /// `w(f) = c / (1 - f)`.
    Optimal(Frac),
    /// Explicit values at a finite set of flexibilities.
    Table(WeightTable),
}

/// A finitely supported weight function. Keys lie in `(0, 1)`, values are
/// nonnegative and at least one value is positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightTable(BTreeMap<Frac, Frac>);

impl WeightTable {
    pub fn new(entries: impl IntoIterator<Item = (Frac, Frac)>) -> Result<WeightTable> {
        let mut map = BTreeMap::new();
        for (f, w) in entries {
            if !f.in_open_unit() {
                return Err(FvrError::FlexibilityOutOfRange(f));
            }
            if w.is_negative() {
                return Err(FvrError::InvalidWeight(format!("w({f}) = {w} is negative")));
            }
            if let Some(prev) = map.insert(f.clone(), w) {
                return Err(FvrError::InvalidWeight(format!(
                    "duplicate entry for {f} (previously {prev})"
                )));
            }
        }
        if !map.values().any(Frac::is_positive) {
            return Err(FvrError::TrivialWeight);
        }
        Ok(WeightTable(map))
    }

    pub fn get(&self, f: &Frac) -> Option<&Frac> {
        self.0.get(f)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Frac, &Frac)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Every weight multiplied by `c > 0`.
    pub fn scaled(&self, c: &Frac) -> Result<WeightTable> {
        if !c.is_positive() {
            return Err(FvrError::InvalidWeight(format!(
                "scale factor {c} must be positive"
            )));
        }
        Ok(WeightTable(
            self.0.iter().map(|(f, w)| (f.clone(), w * c)).collect(),
        ))
    }
}

/// Evaluates `w` at flexibility `f`.
pub fn eval_weight(w: &WeightFn, f: &Frac) -> Result<Frac> {
    w.eval(f)
}

impl WeightFn {
    pub fn threshold(s0: Frac) -> Result<WeightFn> {
        if !s0.in_open_unit() {
            return Err(FvrError::InvalidWeight(format!(
                "threshold {s0} must lie in (0, 1)"
            )));
        }
        Ok(WeightFn::Threshold(s0))
    }

    pub fn optimal(c: Frac) -> Result<WeightFn> {
        if !c.is_positive() {
            return Err(FvrError::InvalidWeight(format!(
                "optimal scale {c} must be positive"
            )));
        }
        Ok(WeightFn::Optimal(c))
    }

    /// `w(f) = 1/(1-f)`.
    pub fn ropt() -> WeightFn {
        WeightFn::Optimal(Frac::one())
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            WeightFn::Threshold(s0) if !s0.in_open_unit() => Err(FvrError::InvalidWeight(format!(
                "threshold {s0} must lie in (0, 1)"
            ))),
            WeightFn::Optimal(c) if !c.is_positive() => Err(FvrError::InvalidWeight(format!(
                "optimal scale {c} must be positive"
            ))),
            _ => Ok(()),
        }
    }

    pub fn eval(&self, f: &Frac) -> Result<Frac> {
        if !f.in_open_unit() {
            return Err(FvrError::FlexibilityOutOfRange(f.clone()));
        }
        Ok(match self {
            WeightFn::Constant => Frac::one(),
            WeightFn::Threshold(s0) => {
                if f >= s0 {
                    Frac::one()
                } else {
                    Frac::zero()
                }
            }
            WeightFn::Power(p) => f.pow(*p),
            WeightFn::Optimal(c) => c / (Frac::one() - f),
            WeightFn::Table(table) => table
                .get(f)
                .cloned()
                .ok_or_else(|| FvrError::MissingTableEntry(f.clone()))?,
        })
    }

    /// Samples this weight function at the given flexibilities.
    pub fn tabulate<'a>(
        &self,
        flexibilities: impl IntoIterator<Item = &'a Frac>,
    ) -> Result<WeightTable> {
        let entries = flexibilities
            .into_iter()
            .map(|f| Ok((f.clone(), self.eval(f)?)))
            .collect::<Result<Vec<_>>>()?;
        let mut map = BTreeMap::new();
        map.extend(entries);
        WeightTable::new(map)
    }
}

impl fmt::Display for WeightFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightFn::Constant => write!(f, "approval"),
            WeightFn::Threshold(s0) => write!(f, "threshold:{s0}"),
            WeightFn::Power(p) => write!(f, "power:{p}"),
            WeightFn::Optimal(c) if *c == Frac::one() => write!(f, "opt"),
            WeightFn::Optimal(c) => write!(f, "opt:{c}"),
            WeightFn::Table(t) => write!(f, "table[{}]", t.len()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fr(n: i64, d: i64) -> Frac {
        Frac::new(n, d)
    }

    #[test]
    fn family_values() {
        assert_eq!(WeightFn::ropt().eval(&fr(1, 2)).unwrap(), fr(2, 1));
        // (2/5)^2 by repeated multiplication
        assert_eq!(
            WeightFn::Power(2).eval(&fr(2, 5)).unwrap(),
            &fr(2, 5) * &fr(2, 5)
        );
        assert_eq!(WeightFn::Power(2).eval(&fr(2, 5)).unwrap(), fr(4, 25));
        let th = WeightFn::threshold(fr(1, 2)).unwrap();
        assert_eq!(th.eval(&fr(1, 3)).unwrap(), Frac::zero());
        assert_eq!(th.eval(&fr(1, 2)).unwrap(), Frac::one());
        assert_eq!(WeightFn::Constant.eval(&fr(9, 10)).unwrap(), Frac::one());
    }

    #[test]
    fn rejects_flexibility_outside_open_unit() {
        for f in [Frac::zero(), Frac::one(), fr(3, 2), fr(-1, 2)] {
            assert!(matches!(
                WeightFn::Constant.eval(&f),
                Err(FvrError::FlexibilityOutOfRange(_))
            ));
        }
    }

    #[test]
    fn table_lookup_and_validation() {
        let t = WeightTable::new([(fr(1, 4), fr(1, 1)), (fr(1, 2), Frac::zero())]).unwrap();
        let w = WeightFn::Table(t);
        assert_eq!(w.eval(&fr(1, 4)).unwrap(), Frac::one());
        assert_eq!(
            w.eval(&fr(1, 3)).unwrap_err(),
            FvrError::MissingTableEntry(fr(1, 3))
        );
        assert_eq!(
            WeightTable::new([(fr(1, 2), Frac::zero())]).unwrap_err(),
            FvrError::TrivialWeight
        );
        assert!(WeightTable::new([(fr(1, 2), fr(-1, 1))]).is_err());
        assert!(WeightTable::new([(Frac::one(), fr(1, 1))]).is_err());
        assert!(WeightTable::new([(fr(1, 2), fr(1, 1)), (fr(2, 4), fr(1, 1))]).is_err());
    }

    #[test]
    fn constructors_validate() {
        assert!(WeightFn::threshold(Frac::one()).is_err());
        assert!(WeightFn::optimal(Frac::zero()).is_err());
        assert!(WeightFn::Optimal(fr(-1, 1)).validate().is_err());
    }

    #[test]
    fn optimal_times_complement_is_constant() {
        let w = WeightFn::optimal(fr(3, 7)).unwrap();
        for j in 1..20 {
            let f = fr(j, 20);
            assert_eq!(w.eval(&f).unwrap() * (Frac::one() - &f), fr(3, 7));
        }
    }
}
