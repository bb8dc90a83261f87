//! Probability intervals and the two propagation steps used when building
//! arguments: conjunction of premises and probabilistic modus ponens.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::ProbabilityError;

/// Slack absorbed when a computed bound drifts outside `[0, 1]` through
/// floating-point representation error.
pub const REPRESENTATION_SLACK: f64 = 1e-12;

/// Tolerance used when comparing derived quantities.
pub const EPSILON: f64 = 1e-9;

/// A closed subinterval `[lower, upper]` of `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawInterval", into = "RawInterval")]
pub struct ProbInterval {
    lower: f64,
    upper: f64,
}

#[derive(Serialize, Deserialize)]
struct RawInterval {
    l: f64,
    u: f64,
}

impl TryFrom<RawInterval> for ProbInterval {
    type Error = ProbabilityError;

    fn try_from(raw: RawInterval) -> Result<Self, Self::Error> {
        ProbInterval::new(raw.l, raw.u)
    }
}

impl From<ProbInterval> for RawInterval {
    fn from(i: ProbInterval) -> Self {
        RawInterval {
            l: i.lower,
            u: i.upper,
        }
    }
}

impl ProbInterval {
    pub const CERTAIN: ProbInterval = ProbInterval {
        lower: 1.0,
        upper: 1.0,
    };

    pub const VACUOUS: ProbInterval = ProbInterval {
        lower: 0.0,
        upper: 1.0,
    };

    pub fn new(lower: f64, upper: f64) -> Result<Self, ProbabilityError> {
        if !lower.is_finite() || !upper.is_finite() {
            return Err(ProbabilityError::NotFinite { lower, upper });
        }
        if !(0.0..=1.0).contains(&lower) || !(0.0..=1.0).contains(&upper) {
            return Err(ProbabilityError::OutOfRange { lower, upper });
        }
        if lower > upper {
            return Err(ProbabilityError::Inverted { lower, upper });
        }
        Ok(ProbInterval { lower, upper })
    }

    /// Builds an interval from computed bounds, absorbing drift of at most
    /// [`REPRESENTATION_SLACK`]. Anything larger is a logic error.
    pub(crate) fn from_computed(lower: f64, upper: f64) -> Self {
        let clamp = |x: f64| {
            debug_assert!(
                (-REPRESENTATION_SLACK..=1.0 + REPRESENTATION_SLACK).contains(&x),
                "computed bound {x} outside [0,1]"
            );
            x.clamp(0.0, 1.0)
        };
        let (lower, upper) = (clamp(lower), clamp(upper));
        debug_assert!(lower <= upper + REPRESENTATION_SLACK);
        ProbInterval {
            lower: lower.min(upper),
            upper,
        }
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn midpoint(&self) -> f64 {
        (self.lower + self.upper) / 2.0
    }

    pub fn approx_eq(&self, other: &ProbInterval, tol: f64) -> bool {
        (self.lower - other.lower).abs() <= tol && (self.upper - other.upper).abs() <= tol
    }
}

impl fmt::Display for ProbInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lower, self.upper)
    }
}

/// Conjunction of several uncertain premises without any independence
/// assumption (Fréchet–Hoeffding bounds):
/// `lower = max(0, Σ lᵢ − (n−1))`, `upper = min uᵢ`.
pub fn conjoin<'a, I>(intervals: I) -> Result<ProbInterval, ProbabilityError>
where
    I: IntoIterator<Item = &'a ProbInterval>,
{
    let mut n = 0usize;
    let mut lower_sum = 0.0;
    let mut upper = 1.0f64;
    for i in intervals {
        n += 1;
        lower_sum += i.lower;
        upper = upper.min(i.upper);
    }
    if n == 0 {
        return Err(ProbabilityError::EmptyConjunction);
    }
    let lower = (lower_sum - (n as f64 - 1.0)).max(0.0);
    Ok(ProbInterval::from_computed(lower.min(upper), upper))
}

/// Probabilistic modus ponens: from `(ψ|φ)[l,u]` and `(φ|⊤)[l',u']`
/// conclude `(ψ|⊤)[l·l', 1 − l' + u·l']`.
pub fn modus_ponens(rule: ProbInterval, premise: ProbInterval) -> ProbInterval {
    let lp = premise.lower;
    ProbInterval::from_computed(rule.lower * lp, 1.0 - lp + rule.upper * lp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn iv(l: f64, u: f64) -> ProbInterval {
        ProbInterval::new(l, u).unwrap()
    }

    #[test]
    fn rejects_invalid_intervals() {
        assert!(matches!(
            ProbInterval::new(0.6, 0.4),
            Err(ProbabilityError::Inverted { .. })
        ));
        assert!(matches!(
            ProbInterval::new(-0.1, 0.4),
            Err(ProbabilityError::OutOfRange { .. })
        ));
        assert!(matches!(
            ProbInterval::new(0.1, 1.5),
            Err(ProbabilityError::OutOfRange { .. })
        ));
        assert!(ProbInterval::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn conjoin_examples() {
        assert_eq!(conjoin(&[iv(1.0, 1.0), iv(1.0, 1.0)]).unwrap(), iv(1.0, 1.0));
        let c = conjoin(&[iv(0.8, 1.0), iv(0.54, 1.0), iv(0.96, 1.0)]).unwrap();
        assert!(c.approx_eq(&iv(0.30, 1.0), EPSILON));
        assert_eq!(conjoin(&[iv(0.3, 0.6)]).unwrap(), iv(0.3, 0.6));
        assert!(matches!(
            conjoin(&[]),
            Err(ProbabilityError::EmptyConjunction)
        ));
    }

    #[test]
    fn conjoin_floors_at_zero() {
        let c = conjoin(&[iv(0.2, 0.9), iv(0.3, 0.7)]).unwrap();
        assert_eq!(c, iv(0.0, 0.7));
    }

    #[test]
    fn modus_ponens_examples() {
        let out = modus_ponens(iv(0.7, 0.9), iv(0.8, 1.0));
        assert!(out.approx_eq(&iv(0.56, 0.92), EPSILON));
        assert_eq!(modus_ponens(iv(1.0, 1.0), iv(1.0, 1.0)), iv(1.0, 1.0));
        let out = modus_ponens(iv(1.0, 1.0), iv(0.30, 1.0));
        assert!(out.approx_eq(&iv(0.30, 1.0), EPSILON));
    }

    #[test]
    fn serde_uses_l_u_keys() {
        let s = serde_json::to_string(&iv(0.25, 0.5)).unwrap();
        assert_eq!(s, r#"{"l":0.25,"u":0.5}"#);
        assert!(serde_json::from_str::<ProbInterval>(r#"{"l":0.9,"u":0.1}"#).is_err());
    }

    fn interval() -> impl Strategy<Value = ProbInterval> {
        (0.0f64..=1.0, 0.0f64..=1.0).prop_map(|(a, b)| iv(a.min(b), a.max(b)))
    }

    proptest! {
        #[test]
        fn mp_output_is_valid(rule in interval(), premise in interval()) {
            let out = modus_ponens(rule, premise);
            prop_assert!(0.0 <= out.lower() && out.lower() <= out.upper() && out.upper() <= 1.0);
        }

        #[test]
        fn mp_certain_premise_is_identity(rule in interval()) {
            prop_assert_eq!(modus_ponens(rule, ProbInterval::CERTAIN), rule);
        }

        #[test]
        fn mp_weaker_premise_widens(rule in interval(), a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
            let (lo, hi) = (a.min(b), a.max(b));
            let strong = modus_ponens(rule, iv(hi, 1.0));
            let weak = modus_ponens(rule, iv(lo, 1.0));
            prop_assert!(weak.lower() <= strong.lower() + EPSILON);
            prop_assert!(weak.width() + EPSILON >= strong.width());
        }

        #[test]
        fn conjoin_bounds(xs in prop::collection::vec(interval(), 1..6)) {
            let c = conjoin(&xs).unwrap();
            let min_l = xs.iter().map(|i| i.lower()).fold(1.0, f64::min);
            let min_u = xs.iter().map(|i| i.upper()).fold(1.0, f64::min);
            prop_assert!(c.lower() <= min_l + EPSILON);
            prop_assert_eq!(c.upper(), min_u);
            let mut with_certain = xs.clone();
            with_certain.push(ProbInterval::CERTAIN);
            prop_assert!(conjoin(&with_certain).unwrap().approx_eq(&c, 1e-12));
        }

        #[test]
        fn conjoin_is_order_independent(mut xs in prop::collection::vec(interval(), 1..6)) {
            let c = conjoin(&xs).unwrap();
            xs.reverse();
            prop_assert!(conjoin(&xs).unwrap().approx_eq(&c, 1e-12));
        }
    }
}
