//! Seeded random knowledge bases for fuzzing and property tests.
//!
//! Goals are numbered and a rule may only use goals numbered below its head,
//! so every generated base is acyclic and loads without error.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::kb::{FactEntry, GoalEntry, KnowledgeBase, ResourceEntry, RuleEntry, SpecDocument};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeneratorConfig {
    /// Upper bound on goals, beliefs, actions and resources together.
    pub max_atoms: usize,
    pub max_rules: usize,
    pub max_resources: usize,
    /// Per base, per rule body.
    pub max_body: usize,
    /// Every interval endpoint and preference is a multiple of this.
    pub grid: f64,
    /// Chance that a belief or action also has its negation as a fact.
    pub both_polarities: f64,
    /// Chance that a rule head is a negative literal.
    pub negative_head: f64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            max_atoms: 10,
            max_rules: 8,
            max_resources: 1,
            max_body: 2,
            grid: 0.05,
            both_polarities: 0.3,
            negative_head: 0.25,
        }
    }
}

fn on_grid(rng: &mut impl Rng, grid: f64) -> f64 {
    let steps = (1.0 / grid).round() as u32;
    f64::from(rng.gen_range(0..=steps)) / f64::from(steps)
}

fn interval(rng: &mut impl Rng, grid: f64) -> (f64, f64) {
    let a = on_grid(rng, grid);
    let b = on_grid(rng, grid);
    (a.min(b), a.max(b))
}

fn literal(rng: &mut impl Rng, atom: &str, negative: f64) -> String {
    if rng.gen_bool(negative) {
        format!("~{atom}")
    } else {
        atom.to_string()
    }
}

fn facts(rng: &mut impl Rng, atoms: &[String], cfg: &GeneratorConfig) -> Vec<FactEntry> {
    let mut out = Vec::new();
    for a in atoms {
        let polarities: &[&str] = if rng.gen_bool(cfg.both_polarities) {
            &["", "~"]
        } else if rng.gen_bool(0.2) {
            &["~"]
        } else {
            &[""]
        };
        for p in polarities {
            let (l, u) = interval(rng, cfg.grid);
            out.push(FactEntry {
                lit: format!("{p}{a}"),
                l,
                u,
            });
        }
    }
    out
}

fn pick(rng: &mut impl Rng, atoms: &[String], max: usize, negative: f64) -> Vec<String> {
    let k = rng.gen_range(0..=max.min(atoms.len()));
    atoms
        .choose_multiple(rng, k)
        .map(|a| literal(rng, a, negative))
        .collect()
}

/// A random document drawn from `rng`. Always loads successfully.
pub fn random_document(rng: &mut impl Rng, cfg: &GeneratorConfig) -> SpecDocument {
    let budget = cfg.max_atoms.max(4);
    let n_resources = rng.gen_range(0..=cfg.max_resources.min(1));
    let n_actions = rng.gen_range(1..=2);
    let n_beliefs = rng.gen_range(1..=3);
    let n_goals = rng.gen_range(2..=(budget - n_resources - n_actions - n_beliefs).clamp(2, 4));

    let names = |p: &str, n: usize| (0..n).map(|i| format!("{p}{i}")).collect::<Vec<_>>();
    let goals = names("g", n_goals);
    let beliefs = names("b", n_beliefs);
    let actions = names("a", n_actions);
    let resources: Vec<(String, f64)> = names("res", n_resources)
        .into_iter()
        .map(|r| (r, f64::from(rng.gen_range(1..=10u32))))
        .collect();

    let n_rules = rng.gen_range(1..=cfg.max_rules.max(1));
    let mut rules = Vec::with_capacity(n_rules);
    for k in 0..n_rules {
        let head_idx = rng.gen_range(0..n_goals);
        let head = literal(rng, &goals[head_idx], cfg.negative_head);
        let mut rule_beliefs = pick(rng, &beliefs, cfg.max_body, 0.3);
        let rule_goals = pick(rng, &goals[..head_idx], cfg.max_body, 0.3);
        let rule_actions = pick(rng, &actions, cfg.max_body, 0.2);
        if rule_beliefs.is_empty() && rule_goals.is_empty() && rule_actions.is_empty() {
            rule_beliefs.push(beliefs[rng.gen_range(0..n_beliefs)].clone());
        }
        let (l, u) = interval(rng, cfg.grid);
        let mut needs = std::collections::BTreeMap::new();
        for (r, amount) in &resources {
            if rng.gen_bool(0.6) {
                needs.insert(r.clone(), f64::from(rng.gen_range(1..=*amount as u32)));
            }
        }
        rules.push(RuleEntry {
            id: format!("r{k}"),
            head,
            beliefs: rule_beliefs,
            goals: rule_goals,
            actions: rule_actions,
            l,
            u,
            needs,
        });
    }

    let goal_entries = goals
        .iter()
        .map(|g| {
            let has_rule = rules.iter().any(|r| &r.head == g);
            GoalEntry {
                name: g.clone(),
                pref: on_grid(rng, cfg.grid),
                pursued: has_rule && rng.gen_bool(0.7),
            }
        })
        .collect();

    SpecDocument {
        beliefs: facts(rng, &beliefs, cfg),
        actions: facts(rng, &actions, cfg),
        goals: goal_entries,
        resources: resources
            .into_iter()
            .map(|(name, amount)| ResourceEntry { name, amount })
            .collect(),
        rules,
    }
}

/// The knowledge base generated from `seed`.
pub fn random_kb(seed: u64, cfg: &GeneratorConfig) -> KnowledgeBase {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let doc = random_document(&mut rng, cfg);
    KnowledgeBase::from_document(&doc).expect("generated documents are valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_bases_respect_bounds() {
        let cfg = GeneratorConfig::default();
        for seed in 0..300 {
            let kb = random_kb(seed, &cfg);
            let doc = kb.to_document();
            let atoms = doc.goals.len()
                + doc.resources.len()
                + doc
                    .beliefs
                    .iter()
                    .chain(&doc.actions)
                    .map(|f| f.lit.trim_start_matches('~'))
                    .collect::<std::collections::BTreeSet<_>>()
                    .len();
            assert!(atoms <= cfg.max_atoms, "seed {seed}: {atoms} atoms");
            assert!(!doc.rules.is_empty() && doc.rules.len() <= cfg.max_rules);
            for r in &doc.rules {
                for x in [r.l, r.u] {
                    assert!(((x / cfg.grid) - (x / cfg.grid).round()).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn same_seed_same_base() {
        let cfg = GeneratorConfig::default();
        assert_eq!(random_kb(42, &cfg), random_kb(42, &cfg));
        assert_ne!(random_kb(1, &cfg), random_kb(2, &cfg));
    }
}
