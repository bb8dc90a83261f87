//! Goal selection: successful-attack filtering, conflict-free extension
//! enumeration, the MAX_GOAL and MAX_UTIL operators, and projection of the
//! winners onto compatible goal sets.

use std::collections::BTreeSet;

use crate::arguments::{build_all_capped, ArgIndex, ArgumentSet, DEFAULT_MAX_ARGUMENTS};
use crate::attacks::{all_attacks, AttackRelation};
use crate::error::{SelectError, SemanticsError};
use crate::kb::{Atom, KnowledgeBase, Literal};
use crate::probability::EPSILON;
use crate::strength::{StrengthTable, Tiebreak};

/// Default refusal threshold for conflict-free enumeration.
pub const DEFAULT_MAX_ENUMERATION_ARGS: usize = 25;
pub const DEFAULT_MAX_EXTENSIONS: usize = 1 << 22;
/// Members are tracked as `u64` bitmasks.
const HARD_ENUMERATION_LIMIT: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SelectOptions {
    pub tiebreak: Tiebreak,
    pub max_arguments: usize,
    pub max_enumeration_args: usize,
    pub max_extensions: usize,
}

impl Default for SelectOptions {
    fn default() -> Self {
        SelectOptions {
            tiebreak: Tiebreak::default(),
            max_arguments: DEFAULT_MAX_ARGUMENTS,
            max_enumeration_args: DEFAULT_MAX_ENUMERATION_ARGS,
            max_extensions: DEFAULT_MAX_EXTENSIONS,
        }
    }
}

/// Keeps only the successful direction of each attacked pair. When exactly
/// one of `A → B`, `B → A` succeeds the other edge is dropped; when both or
/// neither succeed, both edges stay.
pub fn successful_filter(
    attacks: &AttackRelation,
    strengths: &StrengthTable,
    tiebreak: Tiebreak,
) -> AttackRelation {
    let mut out = attacks.clone();
    for (a, b) in attacks.conflict_pairs() {
        if !(attacks.contains(a, b) && attacks.contains(b, a)) {
            continue;
        }
        let ab = strengths.succeeds(a, b, tiebreak);
        let ba = strengths.succeeds(b, a, tiebreak);
        match (ab, ba) {
            (true, false) => {
                out.remove(b, a);
            }
            (false, true) => {
                out.remove(a, b);
            }
            _ => {}
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct Extension {
    pub members: Vec<ArgIndex>,
    /// Pursued goals claimed (positively) by members.
    pub top_goals: BTreeSet<Atom>,
    pub pref_total: f64,
}

impl Extension {
    pub fn new(members: Vec<ArgIndex>, args: &ArgumentSet, kb: &KnowledgeBase) -> Self {
        let top_goals: BTreeSet<Atom> = members
            .iter()
            .map(|&m| args.get(m).claim())
            .filter(|c| c.is_positive() && kb.is_pursued(c.atom()))
            .map(|c| c.atom().clone())
            .collect();
        let pref_total = top_goals.iter().map(|g| kb.pref(g).unwrap_or(0.0)).sum();
        Extension {
            members,
            top_goals,
            pref_total,
        }
    }

    fn mask(&self) -> u64 {
        self.members.iter().fold(0, |m, &i| m | (1u64 << i))
    }
}

/// All subsets of `0..n` with no attack in either direction between two
/// members, ordered by size and then lexicographically.
pub fn conflict_free(
    n: usize,
    attacks: &AttackRelation,
    max_args: usize,
    max_extensions: usize,
) -> Result<Vec<Vec<ArgIndex>>, SemanticsError> {
    let cap = max_args.min(HARD_ENUMERATION_LIMIT);
    if n > cap {
        return Err(SemanticsError::TooManyArguments { count: n, cap });
    }
    let mut adjacent = vec![0u64; n];
    for (a, b) in attacks.conflict_pairs() {
        adjacent[a] |= 1 << b;
        adjacent[b] |= 1 << a;
    }

    let mut found: Vec<u64> = Vec::new();
    // Depth-first over candidates in increasing index order; `blocked` holds
    // every index adjacent to a chosen member.
    let mut stack: Vec<(u64, u64, usize)> = vec![(0, 0, 0)];
    while let Some((set, blocked, next)) = stack.pop() {
        if found.len() >= max_extensions {
            return Err(SemanticsError::TooManyExtensions {
                cap: max_extensions,
            });
        }
        found.push(set);
        for i in (next..n).rev() {
            if blocked & (1 << i) == 0 {
                stack.push((set | (1 << i), blocked | adjacent[i], i + 1));
            }
        }
    }

    let mut sets: Vec<Vec<ArgIndex>> = found
        .into_iter()
        .map(|m| (0..n).filter(|&i| m & (1 << i) != 0).collect())
        .collect();
    sets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(sets)
}

/// Extensions reaching the greatest number of pursued top goals, reduced to
/// the inclusion-maximal ones.
pub fn max_goal(cf: &[Extension]) -> Vec<Extension> {
    let Some(best) = cf.iter().map(|e| e.top_goals.len()).max() else {
        return Vec::new();
    };
    let winners: Vec<&Extension> = cf.iter().filter(|e| e.top_goals.len() == best).collect();
    let masks: Vec<u64> = winners.iter().map(|e| e.mask()).collect();
    winners
        .iter()
        .zip(&masks)
        .filter(|(_, &m)| !masks.iter().any(|&o| o != m && o & m == m))
        .map(|(e, _)| (*e).clone())
        .collect()
}

/// Extensions with the greatest summed preference of their top goals; all
/// of them on a tie.
pub fn max_util(cf: &[Extension]) -> Vec<Extension> {
    let best = cf
        .iter()
        .map(|e| e.pref_total)
        .fold(f64::NEG_INFINITY, f64::max);
    cf.iter()
        .filter(|e| e.pref_total >= best - EPSILON)
        .cloned()
        .collect()
}

/// Claims of the members and of all their sub-arguments.
pub fn comp_goals(e: &Extension, args: &ArgumentSet) -> BTreeSet<Literal> {
    args.claims_with_subs(&e.members)
}

/// Every intermediate artifact of one selection run.
#[derive(Clone, Debug)]
pub struct Selection {
    pub arguments: ArgumentSet,
    pub strengths: StrengthTable,
    pub attacks: AttackRelation,
    pub filtered: AttackRelation,
    pub conflict_free: Vec<Extension>,
    pub max_goal: Vec<Extension>,
    pub max_util: Vec<Extension>,
    pub compatible_goals: Vec<BTreeSet<Literal>>,
}

/// Runs the whole pipeline: arguments, attacks, success filter,
/// conflict-free sets, MAX_GOAL, MAX_UTIL, projection.
pub fn select(kb: &KnowledgeBase, opts: &SelectOptions) -> Result<Selection, SelectError> {
    let arguments = build_all_capped(kb, opts.max_arguments)?;
    let strengths = StrengthTable::compute(&arguments, kb);
    let attacks = all_attacks(&arguments, kb);
    let filtered = successful_filter(&attacks, &strengths, opts.tiebreak);
    let sets = conflict_free(
        arguments.len(),
        &filtered,
        opts.max_enumeration_args,
        opts.max_extensions,
    )?;
    let cf: Vec<Extension> = sets
        .into_iter()
        .map(|m| Extension::new(m, &arguments, kb))
        .collect();
    let by_goal = max_goal(&cf);
    let by_util = max_util(&by_goal);
    let compatible_goals = by_util.iter().map(|e| comp_goals(e, &arguments)).collect();
    Ok(Selection {
        arguments,
        strengths,
        attacks,
        filtered,
        conflict_free: cf,
        max_goal: by_goal,
        max_util: by_util,
        compatible_goals,
    })
}
