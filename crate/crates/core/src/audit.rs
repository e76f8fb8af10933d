use crate::error::{FvrError, Result};
use crate::frac::Frac;

/// Non-increasing step function of the flexibility threshold `s`.
///
/// A breakpoint `(s_j, v_j)` means the curve equals `v_j` on `(s_{j-1}, s_j]`
/// (with `s_0 = 0`). Beyond the last breakpoint the curve is `0`. Each step is
/// closed on the right because a voter with flexibility exactly `s` counts as
/// `s`-flexible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditCurve {
    breakpoints: Vec<(Frac, Frac)>,
}

impl AuditCurve {
    pub fn new(breakpoints: Vec<(Frac, Frac)>) -> Result<AuditCurve> {
        let bad = |msg: String| Err(FvrError::InvalidParams(format!("audit curve: {msg}")));
        for (s, v) in &breakpoints {
            if !s.is_positive() || *s > Frac::one() {
                return bad(format!("breakpoint {s} outside (0, 1]"));
            }
            if v.is_negative() || *v > Frac::one() {
                return bad(format!("value {v} outside [0, 1]"));
            }
        }
        for w in breakpoints.windows(2) {
            if w[0].0 >= w[1].0 {
                return bad("breakpoints must be strictly increasing".into());
            }
            if w[0].1 < w[1].1 {
                return bad("values must be non-increasing".into());
            }
        }
        Ok(AuditCurve { breakpoints })
    }

    pub fn zero() -> AuditCurve {
        AuditCurve {
            breakpoints: Vec::new(),
        }
    }

    pub fn breakpoints(&self) -> &[(Frac, Frac)] {
        &self.breakpoints
    }

    pub fn eval(&self, s: &Frac) -> Frac {
        let idx = self.breakpoints.partition_point(|(bp, _)| bp < s);
        self.breakpoints
            .get(idx)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(Frac::zero)
    }

    /// Limit of the curve as `s` approaches 0 from above.
    pub fn at_zero_plus(&self) -> Frac {
        self.breakpoints
            .first()
            .map(|(_, v)| v.clone())
            .unwrap_or_else(Frac::zero)
    }
}
