//! Logical strength, utility, and the two preference orders over arguments.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::arguments::{ArgIndex, Argument, ArgumentSet};
use crate::kb::{Atom, KnowledgeBase};
use crate::probability::{ProbInterval, EPSILON};

/// `⟨CO, PR, LO⟩` of a claim interval.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StrengthVector {
    pub co: f64,
    pub pr: f64,
    pub lo: f64,
}

impl StrengthVector {
    pub fn of_interval(i: ProbInterval) -> Self {
        let pr = 1.0 - i.width();
        let lo = i.midpoint();
        StrengthVector { co: pr * lo, pr, lo }
    }
}

impl fmt::Display for StrengthVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "⟨{},{},{}⟩",
            short(self.co),
            short(self.pr),
            short(self.lo)
        )
    }
}

/// Up to four decimals, trailing zeros trimmed.
pub(crate) fn short(x: f64) -> String {
    let s = format!("{x:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

pub fn logical_strength(a: &Argument) -> StrengthVector {
    StrengthVector::of_interval(a.claim_interval())
}

/// Scalar sum of every resource amount the plan needs.
pub fn cost(a: &Argument) -> f64 {
    a.list_res_arg().values().sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct UtilityValue {
    pub value: f64,
    pub pref_sum: f64,
    pub comb: f64,
    pub cost: f64,
}

impl UtilityValue {
    pub fn from_parts(pref_sum: f64, comb: f64, cost: f64) -> Self {
        UtilityValue {
            value: pref_sum + comb - cost,
            pref_sum,
            comb,
            cost,
        }
    }
}

/// Goal atoms occurring as claims in `SUPPORT(A)`: the argument's own claim
/// and the claims of its sub-arguments.
pub fn support_goals(args: &ArgumentSet, idx: ArgIndex) -> BTreeSet<Atom> {
    let a = args.get(idx);
    std::iter::once(a.claim())
        .chain(a.subs().iter().map(|&s| args.get(s).claim()))
        .map(|l| l.atom().clone())
        .collect()
}

/// `UTILITY(A) = Σ PREF(g) + COMB(A) − COST(A)`, each goal atom counted once.
pub fn utility(args: &ArgumentSet, idx: ArgIndex, kb: &KnowledgeBase) -> UtilityValue {
    let pref_sum = support_goals(args, idx)
        .iter()
        .map(|g| kb.pref(g).unwrap_or(0.0))
        .sum();
    let a = args.get(idx);
    UtilityValue::from_parts(pref_sum, logical_strength(a).co, cost(a))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Preference {
    APreferred,
    BPreferred,
    Tie,
}

impl Preference {
    pub fn flip(self) -> Self {
        match self {
            Preference::APreferred => Preference::BPreferred,
            Preference::BPreferred => Preference::APreferred,
            Preference::Tie => Preference::Tie,
        }
    }
}

/// How co-equal strength vectors are separated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tiebreak {
    /// The definition as written: on equal CO, a strictly better PR counts
    /// only with equal LO, and vice versa. Everything else is a tie.
    #[default]
    Strict,
    /// Lexicographic on CO, then PR, then LO.
    Pr,
    /// Lexicographic on CO, then LO, then PR.
    Lo,
}

impl FromStr for Tiebreak {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "strict" => Ok(Tiebreak::Strict),
            "pr" => Ok(Tiebreak::Pr),
            "lo" => Ok(Tiebreak::Lo),
            other => Err(format!("unknown tiebreak `{other}` (expected pr, lo or strict)")),
        }
    }
}

fn cmp_tol(a: f64, b: f64) -> Ordering {
    if (a - b).abs() <= EPSILON {
        Ordering::Equal
    } else if a > b {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

fn from_ordering(o: Ordering) -> Preference {
    match o {
        Ordering::Greater => Preference::APreferred,
        Ordering::Less => Preference::BPreferred,
        Ordering::Equal => Preference::Tie,
    }
}

/// `A ≻ B` on logical strength.
pub fn prefer_logical(a: &StrengthVector, b: &StrengthVector, tiebreak: Tiebreak) -> Preference {
    let co = cmp_tol(a.co, b.co);
    if co != Ordering::Equal {
        return from_ordering(co);
    }
    let pr = cmp_tol(a.pr, b.pr);
    let lo = cmp_tol(a.lo, b.lo);
    match tiebreak {
        Tiebreak::Strict => match (pr, lo) {
            (p, Ordering::Equal) => from_ordering(p),
            (Ordering::Equal, l) => from_ordering(l),
            _ => Preference::Tie,
        },
        Tiebreak::Pr => from_ordering(pr.then(lo)),
        Tiebreak::Lo => from_ordering(lo.then(pr)),
    }
}

/// `A ≻_R B` on utility.
pub fn prefer_utility(a: &UtilityValue, b: &UtilityValue) -> Preference {
    from_ordering(cmp_tol(a.value, b.value))
}

/// Strength and utility of every argument, computed once.
#[derive(Clone, Debug)]
pub struct StrengthTable {
    pub logical: Vec<StrengthVector>,
    pub utility: Vec<UtilityValue>,
}

impl StrengthTable {
    pub fn compute(args: &ArgumentSet, kb: &KnowledgeBase) -> Self {
        StrengthTable {
            logical: args.iter().map(|(_, a)| logical_strength(a)).collect(),
            utility: args.iter().map(|(i, _)| utility(args, i, kb)).collect(),
        }
    }

    /// Whether `a` successfully attacks `b`: strictly preferred on logical
    /// strength or on utility.
    pub fn succeeds(&self, a: ArgIndex, b: ArgIndex, tiebreak: Tiebreak) -> bool {
        prefer_logical(&self.logical[a], &self.logical[b], tiebreak) == Preference::APreferred
            || prefer_utility(&self.utility[a], &self.utility[b]) == Preference::APreferred
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sv(l: f64, u: f64) -> StrengthVector {
        StrengthVector::of_interval(ProbInterval::new(l, u).unwrap())
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn strength_examples() {
        let a = sv(0.30, 1.0);
        assert!(close(a.co, 0.195, 1e-12) && close(a.pr, 0.3, 1e-12) && close(a.lo, 0.65, 1e-12));
        let b = sv(0.8, 1.0);
        assert!(close(b.co, 0.72, 1e-12) && close(b.pr, 0.8, 1e-12) && close(b.lo, 0.9, 1e-12));
        let v = sv(0.0, 1.0);
        assert_eq!((v.co, v.pr, v.lo), (0.0, 0.0, 0.5));
    }

    #[test]
    fn utility_examples() {
        assert!(close(UtilityValue::from_parts(0.9, 0.3, 0.5).value, 0.7, 1e-12));
        assert_eq!(UtilityValue::from_parts(0.0, 0.0, 40.0).value, -40.0);
        assert_eq!(UtilityValue::from_parts(9.0, 1.0, 0.0).value, 10.0);
    }

    #[test]
    fn logical_preference_examples() {
        let hi = StrengthVector { co: 0.72, pr: 0.8, lo: 0.9 };
        let lo = StrengthVector { co: 0.195, pr: 0.3, lo: 0.65 };
        assert_eq!(prefer_logical(&hi, &lo, Tiebreak::Strict), Preference::APreferred);
        assert_eq!(prefer_logical(&lo, &hi, Tiebreak::Strict), Preference::BPreferred);

        let a = StrengthVector { co: 0.24, pr: 0.6, lo: 0.4 };
        let b = StrengthVector { co: 0.24, pr: 0.4, lo: 0.6 };
        assert_eq!(prefer_logical(&a, &b, Tiebreak::Strict), Preference::Tie);
        assert_eq!(prefer_logical(&a, &a, Tiebreak::Strict), Preference::Tie);
        // Lexicographic variants separate the co-equal pair.
        assert_eq!(prefer_logical(&a, &b, Tiebreak::Pr), Preference::APreferred);
        assert_eq!(prefer_logical(&a, &b, Tiebreak::Lo), Preference::BPreferred);
    }

    #[test]
    fn strict_tiebreak_clauses() {
        let a = StrengthVector { co: 0.3, pr: 0.6, lo: 0.5 };
        let b = StrengthVector { co: 0.3, pr: 0.5, lo: 0.5 };
        assert_eq!(prefer_logical(&a, &b, Tiebreak::Strict), Preference::APreferred);
        let c = StrengthVector { co: 0.3, pr: 0.5, lo: 0.6 };
        assert_eq!(prefer_logical(&b, &c, Tiebreak::Strict), Preference::BPreferred);
    }

    #[test]
    fn utility_preference_examples() {
        let u = |v| UtilityValue::from_parts(v, 0.0, 0.0);
        assert_eq!(prefer_utility(&u(0.7), &u(-40.0)), Preference::APreferred);
        assert_eq!(prefer_utility(&u(0.5), &u(0.5)), Preference::Tie);
        assert_eq!(prefer_utility(&u(-1.0), &u(0.0)), Preference::BPreferred);
    }

    #[test]
    fn short_formatting() {
        assert_eq!(short(0.195), "0.195");
        assert_eq!(short(0.41580000001), "0.4158");
        assert_eq!(short(1.0), "1");
        assert_eq!(short(-0.00001), "0");
    }

    fn vector() -> impl Strategy<Value = StrengthVector> {
        (0.0f64..=1.0, 0.0f64..=1.0).prop_map(|(a, b)| sv(a.min(b), a.max(b)))
    }

    proptest! {
        #[test]
        fn co_is_product(v in vector()) {
            prop_assert!((v.co - v.pr * v.lo).abs() <= 1e-12);
            prop_assert!((0.0..=1.0).contains(&v.co));
        }

        #[test]
        fn logical_preference_is_antisymmetric(a in vector(), b in vector()) {
            for t in [Tiebreak::Strict, Tiebreak::Pr, Tiebreak::Lo] {
                let ab = prefer_logical(&a, &b, t);
                prop_assert_eq!(ab, prefer_logical(&b, &a, t).flip());
                prop_assert_eq!(prefer_logical(&a, &a, t), Preference::Tie);
            }
        }

        #[test]
        fn tiebreak_only_matters_on_equal_co(a in vector(), b in vector()) {
            if (a.co - b.co).abs() > EPSILON {
                let s = prefer_logical(&a, &b, Tiebreak::Strict);
                prop_assert_eq!(s, prefer_logical(&a, &b, Tiebreak::Pr));
                prop_assert_eq!(s, prefer_logical(&a, &b, Tiebreak::Lo));
            }
        }
    }
}
