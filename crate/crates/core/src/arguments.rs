//! Construction of elementary and instrumental arguments.
//!
//! Arguments live in an arena ([`ArgumentSet`]); every goal child of an
//! argument is itself an argument of the set, so `SUB(A)` is just the set of
//! arena indices reachable through goal children.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::BuildError;
use crate::kb::{Atom, Base, FactKind, KnowledgeBase, Literal, PlanRule, RuleId};
use crate::probability::{conjoin, modus_ponens, ProbInterval};

pub const DEFAULT_MAX_ARGUMENTS: usize = 10_000;

/// Index of an argument inside its [`ArgumentSet`].
pub type ArgIndex = usize;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct ArgumentId(String);

impl ArgumentId {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ArgumentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A leaf: a single belief or action fact with empty support.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ElementaryArgument {
    pub claim: Literal,
    pub interval: ProbInterval,
    pub kind: FactKind,
}

/// An instrumental argument: a plan-rule node whose belief and action
/// premises are elementary arguments and whose goal premises are other
/// arguments of the same set.
#[derive(Clone, Debug)]
pub struct Argument {
    id: ArgumentId,
    rule: RuleId,
    claim: Literal,
    interval: ProbInterval,
    beliefs: Vec<ElementaryArgument>,
    actions: Vec<ElementaryArgument>,
    children: Vec<ArgIndex>,
    subs: BTreeSet<ArgIndex>,
    support: BTreeSet<Literal>,
    needs: BTreeMap<Atom, f64>,
}

impl Argument {
    pub fn id(&self) -> &ArgumentId {
        &self.id
    }

    pub fn rule(&self) -> &RuleId {
        &self.rule
    }

    pub fn claim(&self) -> &Literal {
        &self.claim
    }

    pub fn claim_interval(&self) -> ProbInterval {
        self.interval
    }

    pub fn belief_children(&self) -> &[ElementaryArgument] {
        &self.beliefs
    }

    pub fn action_children(&self) -> &[ElementaryArgument] {
        &self.actions
    }

    /// Direct sub-arguments, one per body goal in rule order.
    pub fn goal_children(&self) -> &[ArgIndex] {
        &self.children
    }

    /// `SUB(A)`: every strict descendant argument.
    pub fn subs(&self) -> &BTreeSet<ArgIndex> {
        &self.subs
    }

    /// Literal content of `SUPPORT(A)`: claims of the elementary leaves plus
    /// the heads of this argument's root and of every sub-argument root.
    pub fn support_literals(&self) -> &BTreeSet<Literal> {
        &self.support
    }

    /// `LIST_RES_ARG(A)`: resource needs summed over every rule node of the tree.
    pub fn list_res_arg(&self) -> &BTreeMap<Atom, f64> {
        &self.needs
    }

    /// `NEED_RES(A, res)`.
    pub fn need_res(&self, res: &Atom) -> f64 {
        self.needs.get(res).copied().unwrap_or(0.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Diagnostic {
    /// A pursued goal for which no argument could be built.
    PursuedGoalWithoutArgument { goal: Atom },
    /// A candidate dropped because its own support holds a literal and its
    /// complement.
    InconsistentCandidate { rule: RuleId, literal: Literal },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::PursuedGoalWithoutArgument { goal } => {
                write!(f, "pursued goal `{goal}` has no argument")
            }
            Diagnostic::InconsistentCandidate { rule, literal } => write!(
                f,
                "candidate built from rule `{rule}` dropped: support contains both `{literal}` and `{}`",
                literal.complement()
            ),
        }
    }
}

/// All arguments of a knowledge base, in canonical id order.
#[derive(Clone, Debug)]
pub struct ArgumentSet {
    args: Vec<Argument>,
    diagnostics: Vec<Diagnostic>,
}

impl ArgumentSet {
    pub fn len(&self) -> usize {
        self.args.len()
    }

    pub fn is_empty(&self) -> bool {
        self.args.is_empty()
    }

    pub fn get(&self, idx: ArgIndex) -> &Argument {
        &self.args[idx]
    }

    pub fn iter(&self) -> impl Iterator<Item = (ArgIndex, &Argument)> {
        self.args.iter().enumerate()
    }

    pub fn index_of(&self, id: &str) -> Option<ArgIndex> {
        self.args.iter().position(|a| a.id.as_str() == id)
    }

    pub fn diagnostics(&self) -> &[Diagnostic] {
        &self.diagnostics
    }

    /// Literals in the bodies of every rule node of `idx`'s tree, split by
    /// base: leaf claims for beliefs and actions, sub-argument claims for goals.
    pub fn body_literals(&self, idx: ArgIndex) -> BodyLiterals {
        let mut out = BodyLiterals::default();
        self.collect_body(idx, &mut out);
        out
    }

    fn collect_body(&self, idx: ArgIndex, out: &mut BodyLiterals) {
        let a = &self.args[idx];
        out.beliefs.extend(a.beliefs.iter().map(|e| e.claim.clone()));
        out.actions.extend(a.actions.iter().map(|e| e.claim.clone()));
        for &c in &a.children {
            out.goals.insert(self.args[c].claim.clone());
            self.collect_body(c, out);
        }
    }

    /// Recomputes the claim interval from the leaves up, ignoring stored
    /// intervals of sub-arguments.
    pub fn recompute_interval(&self, idx: ArgIndex, kb: &KnowledgeBase) -> ProbInterval {
        let a = &self.args[idx];
        let rule = kb.rule(&a.rule).expect("argument rule comes from kb");
        let mut premises: Vec<ProbInterval> = a
            .beliefs
            .iter()
            .chain(a.actions.iter())
            .map(|e| e.interval)
            .collect();
        premises.extend(a.children.iter().map(|&c| self.recompute_interval(c, kb)));
        node_interval(rule.interval, &premises)
    }

    /// Claims of the given arguments and of all their sub-arguments.
    pub fn claims_with_subs<'a, I>(&self, members: I) -> BTreeSet<Literal>
    where
        I: IntoIterator<Item = &'a ArgIndex>,
    {
        let mut out = BTreeSet::new();
        for &m in members {
            let a = &self.args[m];
            out.insert(a.claim.clone());
            out.extend(a.subs.iter().map(|&s| self.args[s].claim.clone()));
        }
        out
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BodyLiterals {
    pub beliefs: BTreeSet<Literal>,
    pub actions: BTreeSet<Literal>,
    pub goals: BTreeSet<Literal>,
}

impl BodyLiterals {
    pub fn of_base(&self, base: Base) -> Option<&BTreeSet<Literal>> {
        match base {
            Base::Belief => Some(&self.beliefs),
            Base::Action => Some(&self.actions),
            Base::Goal => Some(&self.goals),
            Base::Resource => None,
        }
    }

    pub fn extend(&mut self, other: BodyLiterals) {
        self.beliefs.extend(other.beliefs);
        self.actions.extend(other.actions);
        self.goals.extend(other.goals);
    }

    pub fn all(&self) -> impl Iterator<Item = &Literal> {
        self.beliefs
            .iter()
            .chain(self.actions.iter())
            .chain(self.goals.iter())
    }
}

/// Interval of a rule node: conjoin all premises, then apply modus ponens.
pub(crate) fn node_interval(rule: ProbInterval, premises: &[ProbInterval]) -> ProbInterval {
    let body = conjoin(premises).expect("plan rule bodies are nonempty");
    modus_ponens(rule, body)
}

fn inconsistent_literal(lits: &BTreeSet<Literal>) -> Option<&Literal> {
    lits.iter()
        .find(|l| l.is_positive() && lits.contains(&l.complement()))
}

struct Candidate {
    rule: RuleId,
    claim: Literal,
    interval: ProbInterval,
    beliefs: Vec<ElementaryArgument>,
    actions: Vec<ElementaryArgument>,
    children: Vec<ArgIndex>,
    subs: BTreeSet<ArgIndex>,
    support: BTreeSet<Literal>,
    needs: BTreeMap<Atom, f64>,
}

fn leaves(
    lits: &BTreeSet<Literal>,
    kind: FactKind,
    kb: &KnowledgeBase,
) -> Option<Vec<ElementaryArgument>> {
    lits.iter()
        .map(|l| {
            let interval = match kind {
                FactKind::Belief => kb.belief(l),
                FactKind::Action => kb.action(l),
            }?;
            Some(ElementaryArgument {
                claim: l.clone(),
                interval,
                kind,
            })
        })
        .collect()
}

/// Builds every argument the knowledge base supports.
pub fn build_all(kb: &KnowledgeBase) -> Result<ArgumentSet, BuildError> {
    build_all_capped(kb, DEFAULT_MAX_ARGUMENTS)
}

pub fn build_all_capped(kb: &KnowledgeBase, cap: usize) -> Result<ArgumentSet, BuildError> {
    let mut built: Vec<Candidate> = Vec::new();
    let mut by_claim: BTreeMap<Literal, Vec<ArgIndex>> = BTreeMap::new();
    let mut diagnostics = Vec::new();

    let mut rules_by_head: BTreeMap<&Atom, Vec<&PlanRule>> = BTreeMap::new();
    for r in kb.rules() {
        rules_by_head.entry(r.head.atom()).or_default().push(r);
    }

    for goal in kb.goal_order() {
        let Some(rules) = rules_by_head.get(goal) else {
            continue;
        };
        for rule in rules {
            let Some(beliefs) = leaves(&rule.beliefs, FactKind::Belief, kb) else {
                continue;
            };
            let Some(actions) = leaves(&rule.actions, FactKind::Action, kb) else {
                continue;
            };
            let options: Vec<Vec<ArgIndex>> = rule
                .goals
                .iter()
                .map(|g| by_claim.get(g).cloned().unwrap_or_default())
                .collect();
            if options.iter().any(|o| o.is_empty()) {
                continue;
            }

            let mut cursor = vec![0usize; options.len()];
            loop {
                let children: Vec<ArgIndex> =
                    cursor.iter().zip(&options).map(|(&i, o)| o[i]).collect();
                let candidate = assemble(rule, &beliefs, &actions, children, &built);
                match inconsistent_literal(&candidate.support) {
                    Some(lit) => diagnostics.push(Diagnostic::InconsistentCandidate {
                        rule: rule.id.clone(),
                        literal: lit.clone(),
                    }),
                    None => {
                        if built.len() >= cap {
                            return Err(BuildError::TooManyArguments { cap });
                        }
                        by_claim
                            .entry(candidate.claim.clone())
                            .or_default()
                            .push(built.len());
                        built.push(candidate);
                    }
                }
                if !advance(&mut cursor, &options) {
                    break;
                }
            }
        }
    }

    diagnostics.dedup();
    for g in kb.goals().filter(|g| g.pursued) {
        if !by_claim.contains_key(&Literal::pos(g.goal.clone())) {
            diagnostics.push(Diagnostic::PursuedGoalWithoutArgument {
                goal: g.goal.clone(),
            });
        }
    }

    Ok(canonicalize(built, diagnostics))
}

fn advance(cursor: &mut [usize], options: &[Vec<ArgIndex>]) -> bool {
    for (pos, opts) in cursor.iter_mut().zip(options).rev() {
        *pos += 1;
        if *pos < opts.len() {
            return true;
        }
        *pos = 0;
    }
    false
}

fn assemble(
    rule: &PlanRule,
    beliefs: &[ElementaryArgument],
    actions: &[ElementaryArgument],
    children: Vec<ArgIndex>,
    built: &[Candidate],
) -> Candidate {
    let mut premises: Vec<ProbInterval> = beliefs
        .iter()
        .chain(actions)
        .map(|e| e.interval)
        .collect();
    let mut support: BTreeSet<Literal> = beliefs
        .iter()
        .chain(actions)
        .map(|e| e.claim.clone())
        .collect();
    support.insert(rule.head.clone());
    let mut subs = BTreeSet::new();
    let mut needs = rule.needs.clone();
    for &c in &children {
        let child = &built[c];
        premises.push(child.interval);
        support.extend(child.support.iter().cloned());
        subs.insert(c);
        subs.extend(child.subs.iter().copied());
        for (res, amount) in &child.needs {
            *needs.entry(res.clone()).or_insert(0.0) += amount;
        }
    }
    Candidate {
        rule: rule.id.clone(),
        claim: rule.head.clone(),
        interval: node_interval(rule.interval, &premises),
        beliefs: beliefs.to_vec(),
        actions: actions.to_vec(),
        children,
        subs,
        support,
        needs,
    }
}

/// Sorts arguments by their rule-id chain and assigns ids: the bare rule id
/// when the rule yields a single argument, `rule.k` otherwise.
fn canonicalize(built: Vec<Candidate>, diagnostics: Vec<Diagnostic>) -> ArgumentSet {
    fn key(i: ArgIndex, built: &[Candidate], memo: &mut Vec<Option<String>>) -> String {
        if let Some(k) = &memo[i] {
            return k.clone();
        }
        let c = &built[i];
        let mut k = c.rule.to_string();
        if !c.children.is_empty() {
            let parts: Vec<String> = c.children.iter().map(|&ch| key(ch, built, memo)).collect();
            k.push('(');
            k.push_str(&parts.join(","));
            k.push(')');
        }
        memo[i] = Some(k.clone());
        k
    }

    let mut memo = vec![None; built.len()];
    let keys: Vec<String> = (0..built.len()).map(|i| key(i, &built, &mut memo)).collect();
    let mut order: Vec<ArgIndex> = (0..built.len()).collect();
    order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    let mut new_index = vec![0; built.len()];
    for (new, &old) in order.iter().enumerate() {
        new_index[old] = new;
    }

    let mut per_rule: BTreeMap<&RuleId, usize> = BTreeMap::new();
    for c in &built {
        *per_rule.entry(&c.rule).or_default() += 1;
    }
    let mut seen: BTreeMap<&RuleId, usize> = BTreeMap::new();
    let mut ids = vec![String::new(); built.len()];
    for &old in &order {
        let rule = &built[old].rule;
        let k = seen.entry(rule).or_default();
        *k += 1;
        ids[old] = if per_rule[rule] == 1 {
            rule.to_string()
        } else {
            format!("{rule}.{k}")
        };
    }

    let mut slots: Vec<Option<Argument>> = vec![None; built.len()];
    for (old, c) in built.into_iter().enumerate() {
        slots[new_index[old]] = Some(Argument {
            id: ArgumentId(std::mem::take(&mut ids[old])),
            rule: c.rule,
            claim: c.claim,
            interval: c.interval,
            beliefs: c.beliefs,
            actions: c.actions,
            children: c.children.iter().map(|&x| new_index[x]).collect(),
            subs: c.subs.iter().map(|&x| new_index[x]).collect(),
            support: c.support,
            needs: c.needs,
        });
    }
    ArgumentSet {
        args: slots.into_iter().map(|a| a.expect("permutation")).collect(),
        diagnostics,
    }
}
