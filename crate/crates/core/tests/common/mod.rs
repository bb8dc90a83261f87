//! Independent reference implementations used as test oracles. Nothing here
//! calls into the library's algorithms; only the loaded knowledge base and
//! the argument set under test are read.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use goalsel::kb::Literal;
use goalsel::{ArgumentSet, AttackRelation, KnowledgeBase};

pub fn fixture(name: &str) -> KnowledgeBase {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name);
    let text = std::fs::read_to_string(&path).unwrap();
    goalsel::load_spec(&text).unwrap()
}

/// A plan tree as the oracle sees it.
#[derive(Clone, Debug)]
pub struct Tree {
    pub rule: String,
    pub claim: Literal,
    pub l: f64,
    pub u: f64,
    pub children: Vec<Tree>,
    pub literals: BTreeSet<Literal>,
    pub needs: BTreeMap<String, f64>,
}

impl Tree {
    pub fn key(&self) -> String {
        if self.children.is_empty() {
            self.rule.clone()
        } else {
            let parts: Vec<String> = self.children.iter().map(Tree::key).collect();
            format!("{}({})", self.rule, parts.join(","))
        }
    }
}

fn consistent(lits: &BTreeSet<Literal>) -> bool {
    lits.iter().all(|l| !lits.contains(&l.complement()))
}

/// Every tree for `goal`, found by plain recursion on the rules.
fn trees_for(kb: &KnowledgeBase, goal: &Literal, memo: &mut BTreeMap<Literal, Vec<Tree>>) -> Vec<Tree> {
    if let Some(t) = memo.get(goal) {
        return t.clone();
    }
    let mut out = Vec::new();
    for rule in kb.rules().iter().filter(|r| &r.head == goal) {
        let mut leaf_lu = Vec::new();
        let mut lits = BTreeSet::from([rule.head.clone()]);
        let mut ok = true;
        for b in &rule.beliefs {
            match kb.belief(b) {
                Some(i) => leaf_lu.push((i.lower(), i.upper())),
                None => ok = false,
            }
            lits.insert(b.clone());
        }
        for a in &rule.actions {
            match kb.action(a) {
                Some(i) => leaf_lu.push((i.lower(), i.upper())),
                None => ok = false,
            }
            lits.insert(a.clone());
        }
        if !ok {
            continue;
        }
        // Cartesian product over the goal premises, in rule order.
        let mut partial: Vec<Vec<Tree>> = vec![Vec::new()];
        for g in &rule.goals {
            let options = trees_for(kb, g, memo);
            let mut next = Vec::new();
            for p in &partial {
                for o in &options {
                    let mut q = p.clone();
                    q.push(o.clone());
                    next.push(q);
                }
            }
            partial = next;
        }
        for children in partial {
            let mut lu = leaf_lu.clone();
            let mut literals = lits.clone();
            let mut needs: BTreeMap<String, f64> = rule
                .needs
                .iter()
                .map(|(k, v)| (k.to_string(), *v))
                .collect();
            for c in &children {
                lu.push((c.l, c.u));
                literals.extend(c.literals.iter().cloned());
                for (k, v) in &c.needs {
                    *needs.entry(k.clone()).or_insert(0.0) += v;
                }
            }
            if !consistent(&literals) {
                continue;
            }
            // Premise upper bounds never enter the conclusion interval.
            let n = lu.len() as f64;
            let pl = (lu.iter().map(|x| x.0).sum::<f64>() - (n - 1.0)).max(0.0);
            let (rl, ru) = (rule.interval.lower(), rule.interval.upper());
            out.push(Tree {
                rule: rule.id.to_string(),
                claim: rule.head.clone(),
                l: rl * pl,
                u: 1.0 - pl + ru * pl,
                children,
                literals,
                needs,
            });
        }
    }
    memo.insert(goal.clone(), out.clone());
    out
}

/// All trees the knowledge base supports, keyed by structure.
pub fn oracle_trees(kb: &KnowledgeBase) -> BTreeMap<String, Tree> {
    let mut memo = BTreeMap::new();
    let mut heads: BTreeSet<Literal> = BTreeSet::new();
    for r in kb.rules() {
        heads.insert(r.head.clone());
    }
    let mut out = BTreeMap::new();
    for h in heads {
        for t in trees_for(kb, &h, &mut memo) {
            out.insert(t.key(), t);
        }
    }
    out
}

/// Structural key of an argument under test, read through its public
/// accessors only.
pub fn arg_key(args: &ArgumentSet, i: usize) -> String {
    let a = args.get(i);
    let children = a.goal_children();
    if children.is_empty() {
        a.rule().to_string()
    } else {
        let parts: Vec<String> = children.iter().map(|&c| arg_key(args, c)).collect();
        format!("{}({})", a.rule(), parts.join(","))
    }
}

/// `SUB` recomputed from the child links.
pub fn oracle_subs(args: &ArgumentSet, i: usize) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    let mut stack: Vec<usize> = args.get(i).goal_children().to_vec();
    while let Some(c) = stack.pop() {
        if out.insert(c) {
            stack.extend(args.get(c).goal_children().iter().copied());
        }
    }
    out
}

/// Literal content of a support, recomputed from leaves and child claims.
pub fn oracle_support(args: &ArgumentSet, i: usize) -> BTreeSet<Literal> {
    let a = args.get(i);
    let mut out: BTreeSet<Literal> = a
        .belief_children()
        .iter()
        .chain(a.action_children())
        .map(|e| e.claim.clone())
        .collect();
    out.insert(a.claim().clone());
    for &c in a.goal_children() {
        out.extend(oracle_support(args, c));
    }
    out
}

pub fn oracle_needs(args: &ArgumentSet, kb: &KnowledgeBase, i: usize) -> BTreeMap<String, f64> {
    let a = args.get(i);
    let mut out: BTreeMap<String, f64> = kb
        .rule(a.rule())
        .unwrap()
        .needs
        .iter()
        .map(|(k, v)| (k.to_string(), *v))
        .collect();
    for &c in a.goal_children() {
        for (k, v) in oracle_needs(args, kb, c) {
            *out.entry(k).or_insert(0.0) += v;
        }
    }
    out
}

/// Closes `base` under inheritance by iterating to a fixpoint. Pairs where
/// one side is a sub-argument of the other are never added.
fn inheritance_fixpoint(args: &ArgumentSet, base: BTreeSet<(usize, usize)>) -> BTreeSet<(usize, usize)> {
    let subs: Vec<BTreeSet<usize>> = (0..args.len()).map(|i| oracle_subs(args, i)).collect();
    let nested = |p: usize, q: usize| subs[p].contains(&q) || subs[q].contains(&p);
    let mut rel = base;
    loop {
        let mut added = Vec::new();
        for &(a, b) in &rel {
            for &c in &subs[b] {
                added.push((a, c));
                added.push((c, a));
                for &d in &subs[a] {
                    added.push((c, d));
                    added.push((d, c));
                }
            }
        }
        let before = rel.len();
        rel.extend(added.into_iter().filter(|&(p, q)| p != q && !nested(p, q)));
        if rel.len() == before {
            return rel;
        }
    }
}

pub fn oracle_terminal(args: &ArgumentSet) -> BTreeSet<(usize, usize)> {
    let mut base = BTreeSet::new();
    for a in 0..args.len() {
        for b in 0..args.len() {
            if a == b || args.get(a).claim() == args.get(b).claim() {
                continue;
            }
            let sa = oracle_support(args, a);
            let sb = oracle_support(args, b);
            if sa.iter().any(|l| sb.contains(&l.complement())) {
                base.insert((a, b));
            }
        }
    }
    inheritance_fixpoint(args, base)
}

pub fn oracle_superfluous(args: &ArgumentSet) -> BTreeSet<(usize, usize)> {
    let mut base = BTreeSet::new();
    for a in 0..args.len() {
        for b in 0..args.len() {
            if a != b
                && args.get(a).claim() == args.get(b).claim()
                && oracle_support(args, a) != oracle_support(args, b)
            {
                base.insert((a, b));
            }
        }
    }
    inheritance_fixpoint(args, base)
}

pub fn oracle_resource(args: &ArgumentSet, kb: &KnowledgeBase) -> BTreeSet<(usize, usize)> {
    let mut out = BTreeSet::new();
    for a in 0..args.len() {
        for b in 0..args.len() {
            if a == b || args.get(a).claim() == args.get(b).claim() {
                continue;
            }
            let na = oracle_needs(args, kb, a);
            let nb = oracle_needs(args, kb, b);
            for res in kb.resources() {
                let x = na.get(res.resource.as_str()).copied().unwrap_or(0.0);
                let y = nb.get(res.resource.as_str()).copied().unwrap_or(0.0);
                if x > 0.0 && y > 0.0 && x + y > res.available {
                    out.insert((a, b));
                }
            }
        }
    }
    out
}

/// Every subset of `0..n` with no directed edge of `rel` inside it, by
/// exhaustive enumeration.
pub fn power_set_conflict_free(n: usize, rel: &AttackRelation) -> Vec<Vec<usize>> {
    let pairs = rel.pairs();
    let mut out: Vec<Vec<usize>> = (0u32..(1 << n))
        .filter(|m| pairs.iter().all(|&(a, b)| m & (1 << a) == 0 || m & (1 << b) == 0))
        .map(|m| (0..n).filter(|i| m & (1 << i) != 0).collect())
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}
