//! Executable checks of the rationality postulates over a family of
//! extensions: direct consistency, closure under the plan rules, and
//! indirect consistency.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::arguments::{ArgIndex, ArgumentSet, BodyLiterals};
use crate::kb::{KnowledgeBase, Literal, PlanRule};

/// `BEL(E)`, `ACT(E)`, `GOA(E)`: body literals of every member's support.
pub fn support_projections(members: &[ArgIndex], args: &ArgumentSet) -> BodyLiterals {
    let mut out = BodyLiterals::default();
    for &m in members {
        out.extend(args.body_literals(m));
    }
    out
}

/// `CONCS(E)`: claims of the members.
pub fn conclusions(members: &[ArgIndex], args: &ArgumentSet) -> BTreeSet<Literal> {
    members.iter().map(|&m| args.get(m).claim().clone()).collect()
}

/// Least superset of `literals` closed under firing `rules`.
pub fn closure_pr(literals: &BTreeSet<Literal>, rules: &[PlanRule]) -> BTreeSet<Literal> {
    let mut closed = literals.clone();
    loop {
        let before = closed.len();
        for r in rules {
            if !closed.contains(&r.head) && r.body().all(|l| closed.contains(l)) {
                closed.insert(r.head.clone());
            }
        }
        if closed.len() == before {
            return closed;
        }
    }
}

fn complementary_pairs(lits: &BTreeSet<Literal>) -> Vec<String> {
    lits.iter()
        .filter(|l| l.is_positive() && lits.contains(&l.complement()))
        .map(|l| format!("{l} / {}", l.complement()))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub pass: bool,
    pub witnesses: Vec<String>,
}

impl Verdict {
    fn from_witnesses(witnesses: Vec<String>) -> Self {
        Verdict {
            pass: witnesses.is_empty(),
            witnesses,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DirectConsistency {
    pub beliefs: Verdict,
    pub actions: Verdict,
    pub goals: Verdict,
    pub superfluity: Verdict,
}

impl DirectConsistency {
    pub fn pass(&self) -> bool {
        self.beliefs.pass && self.actions.pass && self.goals.pass && self.superfluity.pass
    }
}

pub fn check_direct_consistency(members: &[ArgIndex], args: &ArgumentSet) -> DirectConsistency {
    let proj = support_projections(members, args);
    let mut superfluous = Vec::new();
    for (i, &a) in members.iter().enumerate() {
        for &b in &members[i + 1..] {
            let (x, y) = (args.get(a), args.get(b));
            if x.claim() == y.claim() && x.support_literals() != y.support_literals() {
                superfluous.push(format!("{} / {} both claim {}", x.id(), y.id(), x.claim()));
            }
        }
    }
    DirectConsistency {
        beliefs: Verdict::from_witnesses(complementary_pairs(&proj.beliefs)),
        actions: Verdict::from_witnesses(complementary_pairs(&proj.actions)),
        goals: Verdict::from_witnesses(complementary_pairs(&proj.goals)),
        superfluity: Verdict::from_witnesses(superfluous),
    }
}

/// What closure is computed from: the conclusions plus every literal the
/// members' plans are built from.
fn closure_input(members: &[ArgIndex], args: &ArgumentSet) -> BTreeSet<Literal> {
    let mut input = conclusions(members, args);
    input.extend(support_projections(members, args).all().cloned());
    input
}

/// Goal literals that firing the plan rules adds to `input` and that are not
/// among `concs`.
fn missing_conclusions(
    input: &BTreeSet<Literal>,
    concs: &BTreeSet<Literal>,
    kb: &KnowledgeBase,
) -> Vec<String> {
    closure_pr(input, kb.rules())
        .difference(input)
        .filter(|l| !concs.contains(l))
        .map(|l| l.to_string())
        .collect()
}

pub fn check_closure(members: &[ArgIndex], args: &ArgumentSet, kb: &KnowledgeBase) -> Verdict {
    let input = closure_input(members, args);
    Verdict::from_witnesses(missing_conclusions(&input, &conclusions(members, args), kb))
}

pub fn check_indirect_consistency(
    members: &[ArgIndex],
    args: &ArgumentSet,
    kb: &KnowledgeBase,
) -> Verdict {
    let closed = closure_pr(&closure_input(members, args), kb.rules());
    Verdict::from_witnesses(complementary_pairs(&closed))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionVerdict {
    pub members: Vec<String>,
    pub conclusions: Vec<String>,
    pub direct: DirectConsistency,
    pub closure: Verdict,
    pub indirect: Verdict,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OutputVerdict {
    pub conclusions: Vec<String>,
    pub closure: Verdict,
    pub indirect: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PostulateReport {
    pub extensions: Vec<ExtensionVerdict>,
    /// Checks on `Output`, the conclusions shared by every extension.
    pub output: Option<OutputVerdict>,
    pub pass: bool,
}

impl PostulateReport {
    pub fn failures(&self) -> impl Iterator<Item = &ExtensionVerdict> {
        self.extensions.iter().filter(|e| !e.pass)
    }
}

/// Runs every check on each extension of `family` and on their shared
/// conclusions.
pub fn verify(family: &[Vec<ArgIndex>], args: &ArgumentSet, kb: &KnowledgeBase) -> PostulateReport {
    let extensions: Vec<ExtensionVerdict> = family
        .iter()
        .map(|members| {
            let direct = check_direct_consistency(members, args);
            let closure = check_closure(members, args, kb);
            let indirect = check_indirect_consistency(members, args, kb);
            let pass = direct.pass() && closure.pass && indirect.pass;
            ExtensionVerdict {
                members: members.iter().map(|&m| args.get(m).id().to_string()).collect(),
                conclusions: conclusions(members, args).iter().map(|l| l.to_string()).collect(),
                direct,
                closure,
                indirect,
                pass,
            }
        })
        .collect();

    let output = family.split_first().map(|(first, rest)| {
        let mut concs = conclusions(first, args);
        let mut input = closure_input(first, args);
        for members in rest {
            let c = conclusions(members, args);
            concs.retain(|l| c.contains(l));
            let i = closure_input(members, args);
            input.retain(|l| i.contains(l));
        }
        OutputVerdict {
            conclusions: concs.iter().map(|l| l.to_string()).collect(),
            closure: Verdict::from_witnesses(missing_conclusions(&input, &concs, kb)),
            indirect: Verdict::from_witnesses(complementary_pairs(&closure_pr(&input, kb.rules()))),
        }
    });

    let pass = extensions.iter().all(|e| e.pass)
        && output
            .as_ref()
            .is_none_or(|o| o.closure.pass && o.indirect.pass);
    PostulateReport {
        extensions,
        output,
        pass,
    }
}
