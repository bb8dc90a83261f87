//! Goal selection for BDI-style agents by argumentation over plans with
//! interval-valued probabilities.
//!
//! The pipeline: load a [`KnowledgeBase`], build every [`Argument`], derive
//! terminal, resource and superfluous attacks, keep the successful ones,
//! enumerate conflict-free extensions and pick winners by goal count and
//! preference.

pub mod arguments;
pub mod attacks;
pub mod error;
pub mod gen;
pub mod kb;
pub mod postulates;
pub mod probability;
pub mod report;
pub mod semantics;
pub mod strength;

pub use arguments::{
    build_all, build_all_capped, ArgIndex, Argument, ArgumentId, ArgumentSet, BodyLiterals,
    Diagnostic, ElementaryArgument,
};
pub use attacks::{all_attacks, Attack, AttackRelation, AttackType};
pub use error::{
    BuildError, LoadError, LookupError, ProbabilityError, SelectError, SemanticsError,
    ValidationError,
};
pub use kb::{
    load_spec, Atom, Base, FactKind, GoalDecl, KnowledgeBase, Literal, PlanRule, ProbFact,
    ResourceDecl, RuleId, SpecDocument,
};
pub use postulates::{verify, PostulateReport};
pub use report::{to_dot, SelectionReport};
pub use probability::{conjoin, modus_ponens, ProbInterval};
pub use semantics::{select, Extension, SelectOptions, Selection};
pub use strength::{Preference, StrengthTable, StrengthVector, Tiebreak, UtilityValue};
