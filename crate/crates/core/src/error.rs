use thiserror::Error;

use crate::kb::{Atom, Base, Literal};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProbabilityError {
    #[error("interval bounds must be finite, got [{lower}, {upper}]")]
    NotFinite { lower: f64, upper: f64 },
    #[error("interval [{lower}, {upper}] is not within [0, 1]")]
    OutOfRange { lower: f64, upper: f64 },
    #[error("interval lower bound {lower} exceeds upper bound {upper}")]
    Inverted { lower: f64, upper: f64 },
    #[error("cannot conjoin an empty list of intervals")]
    EmptyConjunction,
}

/// A knowledge base that parsed but violates one of its invariants.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValidationError {
    #[error("invalid atom name `{0}` (expected [a-z_][a-z0-9_]*)")]
    InvalidAtom(String),
    #[error("invalid identifier `{0}`")]
    InvalidId(String),
    #[error("atom `{atom}` declared both as {first} and as {second}")]
    BaseOverlap {
        atom: Atom,
        first: Base,
        second: Base,
    },
    #[error("{base} `{literal}` declared more than once")]
    DuplicateFact { base: Base, literal: Literal },
    #[error("{base} `{atom}` declared more than once")]
    DuplicateDecl { base: Base, atom: Atom },
    #[error("rule id `{0}` used more than once")]
    DuplicateRule(String),
    #[error("{context}: {source}")]
    Interval {
        context: String,
        source: ProbabilityError,
    },
    #[error("goal `{goal}` has preference {pref}, expected a value in [0, 1]")]
    Preference { goal: Atom, pref: f64 },
    #[error("{context}: amount {amount} must be a finite nonnegative number")]
    Amount { context: String, amount: f64 },
    #[error("rule `{rule}` references `{atom}` as a {expected}, but it is not declared as one")]
    UndeclaredAtom {
        rule: String,
        atom: Atom,
        expected: Base,
    },
    #[error("rule `{0}` has an empty body")]
    EmptyBody(String),
    #[error("cyclic goal dependency: {}", .0.iter().map(|a| a.as_str()).collect::<Vec<_>>().join(" -> "))]
    CyclicGoals(Vec<Atom>),
    #[error("pursued goal `{0}` has no plan rule")]
    PursuedWithoutRule(Atom),
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("malformed agent spec: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid agent spec: {0}")]
    Validation(#[from] ValidationError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LookupError {
    #[error("unknown resource `{0}`")]
    UnknownResource(Atom),
    #[error("unknown goal `{0}`")]
    UnknownGoal(Atom),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BuildError {
    #[error("argument construction exceeded the cap of {cap} arguments")]
    TooManyArguments { cap: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SemanticsError {
    #[error(
        "refusing to enumerate conflict-free sets over {count} arguments (cap {cap}); \
         raise the cap or split the knowledge base"
    )]
    TooManyArguments { count: usize, cap: usize },
    #[error("more than {cap} conflict-free sets; raise --max-extensions to continue")]
    TooManyExtensions { cap: usize },
}

/// Any failure of the end-to-end selection pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SelectError {
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}
