//! Serializable views of a selection run, a plain-text rendering, and DOT
//! export of the surviving attack graph.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::arguments::{ArgumentSet, Diagnostic};
use crate::attacks::{AttackRelation, AttackType};
use crate::probability::ProbInterval;
use crate::semantics::{Extension, Selection};
use crate::strength::{short, StrengthTable, StrengthVector, UtilityValue};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ArgumentRow {
    pub id: String,
    pub rule: String,
    pub claim: String,
    pub interval: ProbInterval,
    pub strength: StrengthVector,
    pub utility: UtilityValue,
    pub sub_arguments: Vec<String>,
    pub support: Vec<String>,
    pub needs: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AttackRow {
    pub attacker: String,
    pub target: String,
    pub types: Vec<AttackType>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtensionRow {
    pub members: Vec<String>,
    pub top_goals: Vec<String>,
    pub pref_total: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SelectionReport {
    pub arguments: Vec<ArgumentRow>,
    pub attacks: Vec<AttackRow>,
    pub successful_attacks: Vec<AttackRow>,
    pub conflict_free: Vec<ExtensionRow>,
    pub max_goal: Vec<ExtensionRow>,
    pub max_util: Vec<ExtensionRow>,
    pub compatible_goals: Vec<Vec<String>>,
    pub diagnostics: Vec<Diagnostic>,
}

pub fn argument_rows(args: &ArgumentSet, strengths: &StrengthTable) -> Vec<ArgumentRow> {
    args.iter()
        .map(|(i, a)| ArgumentRow {
            id: a.id().to_string(),
            rule: a.rule().to_string(),
            claim: a.claim().to_string(),
            interval: a.claim_interval(),
            strength: strengths.logical[i],
            utility: strengths.utility[i],
            sub_arguments: a.subs().iter().map(|&s| args.get(s).id().to_string()).collect(),
            support: a.support_literals().iter().map(|l| l.to_string()).collect(),
            needs: a
                .list_res_arg()
                .iter()
                .map(|(r, n)| (r.to_string(), *n))
                .collect(),
        })
        .collect()
}

pub fn attack_rows(rel: &AttackRelation, args: &ArgumentSet) -> Vec<AttackRow> {
    rel.iter()
        .map(|a| AttackRow {
            attacker: args.get(a.attacker).id().to_string(),
            target: args.get(a.target).id().to_string(),
            types: a.types.into_iter().collect(),
        })
        .collect()
}

fn extension_rows(exts: &[Extension], args: &ArgumentSet) -> Vec<ExtensionRow> {
    exts.iter()
        .map(|e| ExtensionRow {
            members: e.members.iter().map(|&m| args.get(m).id().to_string()).collect(),
            top_goals: e.top_goals.iter().map(|g| g.to_string()).collect(),
            pref_total: e.pref_total,
        })
        .collect()
}

impl SelectionReport {
    pub fn new(sel: &Selection) -> Self {
        let args = &sel.arguments;
        SelectionReport {
            arguments: argument_rows(args, &sel.strengths),
            attacks: attack_rows(&sel.attacks, args),
            successful_attacks: attack_rows(&sel.filtered, args),
            conflict_free: extension_rows(&sel.conflict_free, args),
            max_goal: extension_rows(&sel.max_goal, args),
            max_util: extension_rows(&sel.max_util, args),
            compatible_goals: sel
                .compatible_goals
                .iter()
                .map(|s| s.iter().map(|l| l.to_string()).collect())
                .collect(),
            diagnostics: args.diagnostics().to_vec(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("arguments:\n");
        out.push_str(&arguments_text(&self.arguments));
        out.push_str("attacks:\n");
        out.push_str(&attacks_text(&self.attacks));
        out.push_str("successful attacks:\n");
        out.push_str(&attacks_text(&self.successful_attacks));
        for (title, rows) in [
            ("conflict-free", &self.conflict_free),
            ("max_goal", &self.max_goal),
            ("max_util", &self.max_util),
        ] {
            let _ = writeln!(out, "{title}: {}", sets_text(rows.iter().map(|r| &r.members)));
        }
        let _ = writeln!(out, "compatible goals: {}", sets_text(self.compatible_goals.iter()));
        for d in &self.diagnostics {
            let _ = writeln!(out, "note: {d}");
        }
        out
    }
}

pub fn arguments_text(rows: &[ArgumentRow]) -> String {
    let mut out = String::new();
    for r in rows {
        let _ = writeln!(
            out,
            "  {:<8} {:<14} [{}, {}]  {}  utility {}",
            r.id,
            r.claim,
            short(r.interval.lower()),
            short(r.interval.upper()),
            r.strength,
            short(r.utility.value)
        );
    }
    out
}

pub fn attacks_text(rows: &[AttackRow]) -> String {
    let mut out = String::new();
    for r in rows {
        let types: Vec<&str> = r
            .types
            .iter()
            .map(|t| match t {
                AttackType::Terminal => "terminal",
                AttackType::Resource => "resource",
                AttackType::Superfluous => "superfluous",
            })
            .collect();
        let _ = writeln!(out, "  {} -> {}  ({})", r.attacker, r.target, types.join(","));
    }
    out
}

fn sets_text<'a, I>(sets: I) -> String
where
    I: Iterator<Item = &'a Vec<String>>,
{
    let parts: Vec<String> = sets.map(|s| format!("{{{}}}", s.join(","))).collect();
    format!("{{{}}}", parts.join(", "))
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// One node per argument labelled with its strength vector, one edge per
/// directed attack in `rel`.
pub fn to_dot(args: &ArgumentSet, strengths: &StrengthTable, rel: &AttackRelation) -> String {
    let mut out = String::from("digraph attacks {\n");
    for (i, a) in args.iter() {
        let id = dot_escape(a.id().as_str());
        let _ = writeln!(out, "  \"{id}\" [label=\"{id}\\n{}\"];", strengths.logical[i]);
    }
    for (a, b) in rel.pairs() {
        let _ = writeln!(
            out,
            "  \"{}\" -> \"{}\";",
            dot_escape(args.get(a).id().as_str()),
            dot_escape(args.get(b).id().as_str())
        );
    }
    out.push_str("}\n");
    out
}
