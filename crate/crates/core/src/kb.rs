//! The agent's mental state: beliefs, actions, goals, resources and plan
//! rules, plus loading and validation of the JSON agent-spec document.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{LoadError, LookupError, ValidationError};
use crate::probability::ProbInterval;

fn is_token(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

/// A propositional symbol, restricted to `[a-z_][a-z0-9_]*`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Atom(String);

impl Atom {
    pub fn new(name: impl Into<String>) -> Result<Self, ValidationError> {
        let name = name.into();
        if is_token(&name) {
            Ok(Atom(name))
        } else {
            Err(ValidationError::InvalidAtom(name))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for Atom {
    type Error = ValidationError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        Atom::new(s)
    }
}

impl From<Atom> for String {
    fn from(a: Atom) -> Self {
        a.0
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A signed atom. Written `x` or `~x`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Literal {
    atom: Atom,
    positive: bool,
}

impl Literal {
    pub fn new(atom: Atom, positive: bool) -> Self {
        Literal { atom, positive }
    }

    pub fn pos(atom: Atom) -> Self {
        Literal::new(atom, true)
    }

    pub fn neg(atom: Atom) -> Self {
        Literal::new(atom, false)
    }

    pub fn atom(&self) -> &Atom {
        &self.atom
    }

    pub fn is_positive(&self) -> bool {
        self.positive
    }

    pub fn complement(&self) -> Literal {
        Literal {
            atom: self.atom.clone(),
            positive: !self.positive,
        }
    }
}

impl FromStr for Literal {
    type Err = ValidationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.strip_prefix('~') {
            Some(rest) => Ok(Literal::neg(Atom::new(rest)?)),
            None => Ok(Literal::pos(Atom::new(s)?)),
        }
    }
}

impl TryFrom<String> for Literal {
    type Error = ValidationError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Literal> for String {
    fn from(l: Literal) -> Self {
        l.to_string()
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("~")?;
        }
        f.write_str(self.atom.as_str())
    }
}

/// The four pairwise-disjoint bases an atom can belong to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Base {
    Belief,
    Action,
    Goal,
    Resource,
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Base::Belief => "belief",
            Base::Action => "action",
            Base::Goal => "goal",
            Base::Resource => "resource",
        })
    }
}

/// Identifier of a plan rule.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct RuleId(String);

impl RuleId {
    pub fn new(id: impl Into<String>) -> Result<Self, ValidationError> {
        let id = id.into();
        let ok = !id.is_empty()
            && id
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-');
        if ok {
            Ok(RuleId(id))
        } else {
            Err(ValidationError::InvalidId(id))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for RuleId {
    type Error = ValidationError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        RuleId::new(s)
    }
}

impl From<RuleId> for String {
    fn from(r: RuleId) -> Self {
        r.0
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FactKind {
    Belief,
    Action,
}

impl FactKind {
    pub fn base(self) -> Base {
        match self {
            FactKind::Belief => Base::Belief,
            FactKind::Action => Base::Action,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbFact {
    pub literal: Literal,
    pub interval: ProbInterval,
    pub kind: FactKind,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GoalDecl {
    pub goal: Atom,
    pub preference: f64,
    pub pursued: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResourceDecl {
    pub resource: Atom,
    pub available: f64,
}

/// A probabilistic plan rule `(head | beliefs ∧ goals ∧ actions)[l,u]`
/// annotated with the resources it consumes.
#[derive(Clone, Debug, PartialEq)]
pub struct PlanRule {
    pub id: RuleId,
    pub head: Literal,
    pub beliefs: BTreeSet<Literal>,
    pub goals: BTreeSet<Literal>,
    pub actions: BTreeSet<Literal>,
    pub interval: ProbInterval,
    pub needs: BTreeMap<Atom, f64>,
}

impl PlanRule {
    /// Every body literal, beliefs first, then goals, then actions.
    pub fn body(&self) -> impl Iterator<Item = &Literal> {
        self.beliefs
            .iter()
            .chain(self.goals.iter())
            .chain(self.actions.iter())
    }
}

// ---------------------------------------------------------------------------
// Document format

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDocument {
    #[serde(default)]
    pub beliefs: Vec<FactEntry>,
    #[serde(default)]
    pub actions: Vec<FactEntry>,
    #[serde(default)]
    pub goals: Vec<GoalEntry>,
    #[serde(default)]
    pub resources: Vec<ResourceEntry>,
    #[serde(default)]
    pub rules: Vec<RuleEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactEntry {
    pub lit: String,
    pub l: f64,
    pub u: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoalEntry {
    pub name: String,
    #[serde(default)]
    pub pref: f64,
    #[serde(default)]
    pub pursued: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResourceEntry {
    pub name: String,
    pub amount: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleEntry {
    pub id: String,
    pub head: String,
    #[serde(default)]
    pub beliefs: Vec<String>,
    #[serde(default)]
    pub goals: Vec<String>,
    #[serde(default)]
    pub actions: Vec<String>,
    pub l: f64,
    pub u: f64,
    #[serde(default)]
    pub needs: BTreeMap<String, f64>,
}

// ---------------------------------------------------------------------------

/// A validated, immutable knowledge base.
#[derive(Clone, Debug, PartialEq)]
pub struct KnowledgeBase {
    beliefs: BTreeMap<Literal, ProbInterval>,
    actions: BTreeMap<Literal, ProbInterval>,
    goals: BTreeMap<Atom, GoalDecl>,
    resources: BTreeMap<Atom, f64>,
    rules: Vec<PlanRule>,
    bases: BTreeMap<Atom, Base>,
    /// Goal atoms ordered so that every body goal precedes the heads using it.
    goal_order: Vec<Atom>,
}

/// Parses and validates an agent-spec JSON document.
pub fn load_spec(document: &str) -> Result<KnowledgeBase, LoadError> {
    let doc: SpecDocument = serde_json::from_str(document)?;
    Ok(KnowledgeBase::from_document(&doc)?)
}

fn interval(context: impl FnOnce() -> String, l: f64, u: f64) -> Result<ProbInterval, ValidationError> {
    ProbInterval::new(l, u).map_err(|source| ValidationError::Interval {
        context: context(),
        source,
    })
}

fn amount(context: impl FnOnce() -> String, amount: f64) -> Result<f64, ValidationError> {
    if amount.is_finite() && amount >= 0.0 {
        Ok(amount)
    } else {
        Err(ValidationError::Amount {
            context: context(),
            amount,
        })
    }
}

impl KnowledgeBase {
    pub fn empty() -> Self {
        KnowledgeBase::from_document(&SpecDocument::default()).expect("empty kb is valid")
    }

    pub fn from_document(doc: &SpecDocument) -> Result<Self, ValidationError> {
        let mut bases: BTreeMap<Atom, Base> = BTreeMap::new();
        let mut declare = |atom: &Atom, base: Base| -> Result<(), ValidationError> {
            match bases.get(atom) {
                Some(&first) if first != base => Err(ValidationError::BaseOverlap {
                    atom: atom.clone(),
                    first,
                    second: base,
                }),
                _ => {
                    bases.insert(atom.clone(), base);
                    Ok(())
                }
            }
        };

        let mut facts = |entries: &[FactEntry], base: Base| {
            let mut out = BTreeMap::new();
            for e in entries {
                let literal: Literal = e.lit.parse()?;
                let iv = interval(|| format!("{base} `{}`", e.lit), e.l, e.u)?;
                declare(literal.atom(), base)?;
                if out.insert(literal.clone(), iv).is_some() {
                    return Err(ValidationError::DuplicateFact { base, literal });
                }
            }
            Ok(out)
        };
        let beliefs = facts(&doc.beliefs, Base::Belief)?;
        let actions = facts(&doc.actions, Base::Action)?;

        let mut goals = BTreeMap::new();
        for g in &doc.goals {
            let atom = Atom::new(g.name.clone())?;
            if !(g.pref.is_finite() && (0.0..=1.0).contains(&g.pref)) {
                return Err(ValidationError::Preference {
                    goal: atom,
                    pref: g.pref,
                });
            }
            declare(&atom, Base::Goal)?;
            let decl = GoalDecl {
                goal: atom.clone(),
                preference: g.pref,
                pursued: g.pursued,
            };
            if goals.insert(atom.clone(), decl).is_some() {
                return Err(ValidationError::DuplicateDecl {
                    base: Base::Goal,
                    atom,
                });
            }
        }

        let mut resources = BTreeMap::new();
        for r in &doc.resources {
            let atom = Atom::new(r.name.clone())?;
            let available = amount(|| format!("resource `{}`", r.name), r.amount)?;
            declare(&atom, Base::Resource)?;
            if resources.insert(atom.clone(), available).is_some() {
                return Err(ValidationError::DuplicateDecl {
                    base: Base::Resource,
                    atom,
                });
            }
        }

        let mut rules: Vec<PlanRule> = Vec::with_capacity(doc.rules.len());
        let mut seen_ids = BTreeSet::new();
        for r in &doc.rules {
            let rule = parse_rule(r, &bases)?;
            if !seen_ids.insert(rule.id.clone()) {
                return Err(ValidationError::DuplicateRule(r.id.clone()));
            }
            rules.push(rule);
        }
        rules.sort_by(|a, b| a.id.cmp(&b.id));

        let goal_order = goal_order(&goals, &rules)?;

        for decl in goals.values().filter(|g| g.pursued) {
            let has_rule = rules
                .iter()
                .any(|r| r.head.is_positive() && r.head.atom() == &decl.goal);
            if !has_rule {
                return Err(ValidationError::PursuedWithoutRule(decl.goal.clone()));
            }
        }

        Ok(KnowledgeBase {
            beliefs,
            actions,
            goals,
            resources,
            rules,
            bases,
            goal_order,
        })
    }

    /// Canonical document form; `from_document(kb.to_document())` yields `kb`.
    pub fn to_document(&self) -> SpecDocument {
        let facts = |m: &BTreeMap<Literal, ProbInterval>| {
            m.iter()
                .map(|(lit, iv)| FactEntry {
                    lit: lit.to_string(),
                    l: iv.lower(),
                    u: iv.upper(),
                })
                .collect()
        };
        let strings = |s: &BTreeSet<Literal>| s.iter().map(|l| l.to_string()).collect();
        SpecDocument {
            beliefs: facts(&self.beliefs),
            actions: facts(&self.actions),
            goals: self
                .goals
                .values()
                .map(|g| GoalEntry {
                    name: g.goal.to_string(),
                    pref: g.preference,
                    pursued: g.pursued,
                })
                .collect(),
            resources: self
                .resources
                .iter()
                .map(|(a, &amount)| ResourceEntry {
                    name: a.to_string(),
                    amount,
                })
                .collect(),
            rules: self
                .rules
                .iter()
                .map(|r| RuleEntry {
                    id: r.id.to_string(),
                    head: r.head.to_string(),
                    beliefs: strings(&r.beliefs),
                    goals: strings(&r.goals),
                    actions: strings(&r.actions),
                    l: r.interval.lower(),
                    u: r.interval.upper(),
                    needs: r.needs.iter().map(|(a, &v)| (a.to_string(), v)).collect(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("document serializes")
    }

    pub fn belief(&self, literal: &Literal) -> Option<ProbInterval> {
        self.beliefs.get(literal).copied()
    }

    pub fn action(&self, literal: &Literal) -> Option<ProbInterval> {
        self.actions.get(literal).copied()
    }

    pub fn beliefs(&self) -> impl Iterator<Item = ProbFact> + '_ {
        self.beliefs.iter().map(|(l, &i)| ProbFact {
            literal: l.clone(),
            interval: i,
            kind: FactKind::Belief,
        })
    }

    pub fn actions(&self) -> impl Iterator<Item = ProbFact> + '_ {
        self.actions.iter().map(|(l, &i)| ProbFact {
            literal: l.clone(),
            interval: i,
            kind: FactKind::Action,
        })
    }

    pub fn goals(&self) -> impl Iterator<Item = &GoalDecl> {
        self.goals.values()
    }

    pub fn goal(&self, atom: &Atom) -> Option<&GoalDecl> {
        self.goals.get(atom)
    }

    pub fn is_pursued(&self, atom: &Atom) -> bool {
        self.goals.get(atom).is_some_and(|g| g.pursued)
    }

    pub fn resources(&self) -> impl Iterator<Item = ResourceDecl> + '_ {
        self.resources.iter().map(|(a, &v)| ResourceDecl {
            resource: a.clone(),
            available: v,
        })
    }

    pub fn rules(&self) -> &[PlanRule] {
        &self.rules
    }

    pub fn rule(&self, id: &RuleId) -> Option<&PlanRule> {
        self.rules
            .binary_search_by(|r| r.id.cmp(id))
            .ok()
            .map(|i| &self.rules[i])
    }

    pub fn base_of(&self, atom: &Atom) -> Option<Base> {
        self.bases.get(atom).copied()
    }

    pub(crate) fn goal_order(&self) -> &[Atom] {
        &self.goal_order
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty() && self.rules.is_empty()
    }

    pub fn available_res(&self, res: &Atom) -> Result<f64, LookupError> {
        self.resources
            .get(res)
            .copied()
            .ok_or_else(|| LookupError::UnknownResource(res.clone()))
    }

    pub fn pref(&self, goal: &Atom) -> Result<f64, LookupError> {
        self.goals
            .get(goal)
            .map(|g| g.preference)
            .ok_or_else(|| LookupError::UnknownGoal(goal.clone()))
    }
}

fn parse_rule(r: &RuleEntry, bases: &BTreeMap<Atom, Base>) -> Result<PlanRule, ValidationError> {
    let id = RuleId::new(r.id.clone())?;
    let check = |lit: &Literal, expected: Base| {
        if bases.get(lit.atom()) == Some(&expected) {
            Ok(())
        } else {
            Err(ValidationError::UndeclaredAtom {
                rule: r.id.clone(),
                atom: lit.atom().clone(),
                expected,
            })
        }
    };
    let part = |items: &[String], base: Base| -> Result<BTreeSet<Literal>, ValidationError> {
        items
            .iter()
            .map(|s| {
                let lit: Literal = s.parse()?;
                check(&lit, base)?;
                Ok(lit)
            })
            .collect()
    };

    let head: Literal = r.head.parse()?;
    check(&head, Base::Goal)?;
    let beliefs = part(&r.beliefs, Base::Belief)?;
    let goals = part(&r.goals, Base::Goal)?;
    let actions = part(&r.actions, Base::Action)?;
    if beliefs.is_empty() && goals.is_empty() && actions.is_empty() {
        return Err(ValidationError::EmptyBody(r.id.clone()));
    }
    let interval = interval(|| format!("rule `{}`", r.id), r.l, r.u)?;
    let mut needs = BTreeMap::new();
    for (name, &v) in &r.needs {
        let atom = Atom::new(name.clone())?;
        if bases.get(&atom) != Some(&Base::Resource) {
            return Err(ValidationError::UndeclaredAtom {
                rule: r.id.clone(),
                atom,
                expected: Base::Resource,
            });
        }
        needs.insert(atom, amount(|| format!("rule `{}` need `{name}`", r.id), v)?);
    }
    Ok(PlanRule {
        id,
        head,
        beliefs,
        goals,
        actions,
        interval,
        needs,
    })
}

/// Topological order of goal atoms over the head → body-goal graph, or the
/// first cycle found.
fn goal_order(
    goals: &BTreeMap<Atom, GoalDecl>,
    rules: &[PlanRule],
) -> Result<Vec<Atom>, ValidationError> {
    let mut edges: BTreeMap<&Atom, BTreeSet<&Atom>> = goals.keys().map(|g| (g, BTreeSet::new())).collect();
    for r in rules {
        let out = edges.entry(r.head.atom()).or_default();
        out.extend(r.goals.iter().map(|g| g.atom()));
    }

    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Fresh,
        Active,
        Done,
    }
    let mut mark: BTreeMap<&Atom, Mark> = edges.keys().map(|&g| (g, Mark::Fresh)).collect();
    let mut order = Vec::with_capacity(edges.len());
    let mut stack: Vec<&Atom> = Vec::new();

    fn visit<'a>(
        node: &'a Atom,
        edges: &BTreeMap<&'a Atom, BTreeSet<&'a Atom>>,
        mark: &mut BTreeMap<&'a Atom, Mark>,
        stack: &mut Vec<&'a Atom>,
        order: &mut Vec<Atom>,
    ) -> Result<(), ValidationError> {
        match mark[node] {
            Mark::Done => return Ok(()),
            Mark::Active => {
                let start = stack.iter().position(|&a| a == node).unwrap_or(0);
                let mut cycle: Vec<Atom> = stack[start..].iter().map(|&a| a.clone()).collect();
                cycle.push(node.clone());
                return Err(ValidationError::CyclicGoals(cycle));
            }
            Mark::Fresh => {}
        }
        mark.insert(node, Mark::Active);
        stack.push(node);
        for &next in &edges[node] {
            visit(next, edges, mark, stack, order)?;
        }
        stack.pop();
        mark.insert(node, Mark::Done);
        order.push(node.clone());
        Ok(())
    }

    for &g in edges.keys() {
        visit(g, &edges, &mut mark, &mut stack, &mut order)?;
    }
    Ok(order)
}
