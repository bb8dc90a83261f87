//! Typed attack relations: support rebuttal (terminal incompatibility),
//! resource over-subscription, and superfluity.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::arguments::{ArgIndex, ArgumentSet};
use crate::kb::KnowledgeBase;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AttackType {
    Terminal,
    Resource,
    Superfluous,
}

impl fmt::Display for AttackType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AttackType::Terminal => "terminal",
            AttackType::Resource => "resource",
            AttackType::Superfluous => "superfluous",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Attack {
    pub attacker: ArgIndex,
    pub target: ArgIndex,
    pub types: BTreeSet<AttackType>,
}

/// A directed attack relation with one record per ordered pair.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AttackRelation {
    edges: BTreeMap<(ArgIndex, ArgIndex), BTreeSet<AttackType>>,
}

impl AttackRelation {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `(attacker, target)` with the given type. Self-attacks are ignored.
    pub fn insert(&mut self, attacker: ArgIndex, target: ArgIndex, ty: AttackType) {
        if attacker != target {
            self.edges.entry((attacker, target)).or_default().insert(ty);
        }
    }

    fn insert_both(&mut self, a: ArgIndex, b: ArgIndex, ty: AttackType) {
        self.insert(a, b, ty);
        self.insert(b, a, ty);
    }

    pub fn remove(&mut self, attacker: ArgIndex, target: ArgIndex) -> bool {
        self.edges.remove(&(attacker, target)).is_some()
    }

    pub fn contains(&self, attacker: ArgIndex, target: ArgIndex) -> bool {
        self.edges.contains_key(&(attacker, target))
    }

    pub fn types(&self, attacker: ArgIndex, target: ArgIndex) -> Option<&BTreeSet<AttackType>> {
        self.edges.get(&(attacker, target))
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn pairs(&self) -> BTreeSet<(ArgIndex, ArgIndex)> {
        self.edges.keys().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = Attack> + '_ {
        self.edges.iter().map(|(&(attacker, target), types)| Attack {
            attacker,
            target,
            types: types.clone(),
        })
    }

    /// Union; attacks on the same ordered pair merge their type sets.
    pub fn merge(&mut self, other: &AttackRelation) {
        for (&pair, types) in &other.edges {
            self.edges.entry(pair).or_default().extend(types.iter().copied());
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.edges
            .iter()
            .all(|(&(a, b), t)| self.edges.get(&(b, a)) == Some(t))
    }

    /// Unordered pairs `{a, b}` with `a < b` connected in either direction.
    pub fn conflict_pairs(&self) -> BTreeSet<(ArgIndex, ArgIndex)> {
        self.edges
            .keys()
            .map(|&(a, b)| (a.min(b), a.max(b)))
            .collect()
    }
}

/// Propagates each base pair to sub-arguments: for `(A, B)`, every
/// `C ∈ SUB(B)` and `D ∈ SUB(A)` gives `(C, D)`, `(D, C)`, `(A, C)` and
/// `(C, A)`. Applied to both orientations, so the result is symmetric. One
/// pass reaches the fixpoint because `SUB` is transitively closed.
///
/// Pairs where one argument is a sub-argument of the other are skipped: a
/// sub-plan shared by both sides never conflicts with the plans using it.
fn inherit(args: &ArgumentSet, base: &[(ArgIndex, ArgIndex)], ty: AttackType) -> AttackRelation {
    let nested = |p: ArgIndex, q: ArgIndex| args.get(p).subs().contains(&q) || args.get(q).subs().contains(&p);
    let mut rel = AttackRelation::new();
    let mut add = |p: ArgIndex, q: ArgIndex| {
        if !nested(p, q) {
            rel.insert_both(p, q, ty);
        }
    };
    for &(a, b) in base {
        for (x, y) in [(a, b), (b, a)] {
            add(x, y);
            let sub_x = args.get(x).subs();
            for &c in args.get(y).subs() {
                add(x, c);
                for &d in sub_x {
                    add(c, d);
                }
            }
        }
    }
    rel
}

/// `R_t`: arguments for different claims whose supports contain
/// complementary literals, closed under sub-argument inheritance.
pub fn terminal_attacks(args: &ArgumentSet) -> AttackRelation {
    let mut base = Vec::new();
    for (i, a) in args.iter() {
        for (j, b) in args.iter().skip(i + 1) {
            if a.claim() == b.claim() {
                continue;
            }
            let rebuts = a
                .support_literals()
                .iter()
                .any(|l| b.support_literals().contains(&l.complement()));
            if rebuts {
                base.push((i, j));
            }
        }
    }
    inherit(args, &base, AttackType::Terminal)
}

/// `R_r`: pairs for different claims whose combined need of a shared
/// resource strictly exceeds what is available. Not inherited.
pub fn resource_attacks(args: &ArgumentSet, kb: &KnowledgeBase) -> AttackRelation {
    let mut rel = AttackRelation::new();
    for (i, a) in args.iter() {
        for (j, b) in args.iter().skip(i + 1) {
            if a.claim() == b.claim() {
                continue;
            }
            let over = a.list_res_arg().iter().any(|(res, &need_a)| {
                let need_b = b.need_res(res);
                need_a > 0.0
                    && need_b > 0.0
                    && kb
                        .available_res(res)
                        .is_ok_and(|avail| need_a + need_b > avail)
            });
            if over {
                rel.insert_both(i, j, AttackType::Resource);
            }
        }
    }
    rel
}

/// `R_s`: arguments for the same claim with different supports, closed
/// under the same inheritance pattern as `R_t`.
pub fn superfluous_attacks(args: &ArgumentSet) -> AttackRelation {
    let mut base = Vec::new();
    for (i, a) in args.iter() {
        for (j, b) in args.iter().skip(i + 1) {
            if a.claim() == b.claim() && a.support_literals() != b.support_literals() {
                base.push((i, j));
            }
        }
    }
    inherit(args, &base, AttackType::Superfluous)
}

/// `R = R_t ∪ R_s ∪ R_r`, one record per ordered pair.
pub fn all_attacks(args: &ArgumentSet, kb: &KnowledgeBase) -> AttackRelation {
    let mut rel = terminal_attacks(args);
    rel.merge(&resource_attacks(args, kb));
    rel.merge(&superfluous_attacks(args));
    rel
}
