use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use goalsel::gen::{random_kb, GeneratorConfig};
use goalsel::postulates::{verify, PostulateReport, Verdict};
use goalsel::report::{argument_rows, arguments_text, attack_rows, attacks_text, to_dot, SelectionReport};
use goalsel::semantics::{select, SelectOptions, Selection, DEFAULT_MAX_ENUMERATION_ARGS, DEFAULT_MAX_EXTENSIONS};
use goalsel::{build_all_capped, KnowledgeBase, Tiebreak};

#[derive(Parser, Debug)]
#[command(name = "goalsel", version, about = "Select compatible goals by argumentation over plans")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// How co-equal logical strengths are separated.
    #[arg(long, global = true, value_enum, default_value_t = TiebreakArg::Strict)]
    tiebreak: TiebreakArg,

    /// Refuse conflict-free enumeration above this many arguments (at most 64).
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_ENUMERATION_ARGS)]
    max_args: usize,

    /// Refuse enumeration once this many extensions have been found.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_EXTENSIONS)]
    max_extensions: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a knowledge base and echo it in canonical form.
    Check { input: PathBuf },
    /// List arguments with claim intervals, strengths and utilities.
    Args { input: PathBuf },
    /// List typed attacks before and after the success filter.
    Attacks { input: PathBuf },
    /// Run the full selection and emit every intermediate result.
    Select { input: PathBuf },
    /// Check the rationality postulates on a file or on random bases.
    Verify {
        #[arg(required_unless_present = "fuzz", conflicts_with = "fuzz")]
        input: Option<PathBuf>,
        /// Check this many generated knowledge bases instead of a file.
        #[arg(long)]
        fuzz: Option<u64>,
        /// First generator seed for `--fuzz`.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Which extensions to check.
        #[arg(long, value_enum, default_value_t = Family::MaxUtil)]
        family: Family,
    },
    /// Write the surviving attack graph in DOT.
    ExportDot { input: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TiebreakArg {
    Strict,
    Pr,
    Lo,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    ConflictFree,
    MaxGoal,
    MaxUtil,
}

/// Exit 1: the input or the result is rejected. Exit 2: the invocation
/// itself is wrong or the environment fails it.
enum Failure {
    Rejected(anyhow::Error),
    Usage(anyhow::Error),
}

/// A finished command: what to print and whether it counts as success.
struct Output {
    body: String,
    ok: bool,
}

fn ok(body: String) -> Result<Output, Failure> {
    Ok(Output { body, ok: true })
}

fn rejected<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Rejected(e.into())
}

fn read_kb(path: &Path) -> Result<KnowledgeBase, Failure> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(Failure::Usage)?;
    goalsel::load_spec(&text)
        .with_context(|| format!("{} is not a valid knowledge base", path.display()))
        .map_err(Failure::Rejected)
}

fn options(cli: &Cli) -> SelectOptions {
    SelectOptions {
        tiebreak: match cli.tiebreak {
            TiebreakArg::Strict => Tiebreak::Strict,
            TiebreakArg::Pr => Tiebreak::Pr,
            TiebreakArg::Lo => Tiebreak::Lo,
        },
        max_enumeration_args: cli.max_args,
        max_extensions: cli.max_extensions,
        ..SelectOptions::default()
    }
}

fn to_json<T: serde::Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn run_select(kb: &KnowledgeBase, opts: &SelectOptions) -> Result<Selection, Failure> {
    select(kb, opts).context("selection refused").map_err(rejected)
}

fn check(cli: &Cli, input: &Path) -> Result<Output, Failure> {
    let kb = read_kb(input)?;
    match cli.format {
        Format::Json => ok(kb.to_json() + "\n"),
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "valid: {} beliefs, {} actions, {} goals, {} resources, {} rules",
                kb.beliefs().count(),
                kb.actions().count(),
                kb.goals().count(),
                kb.resources().count(),
                kb.rules().len()
            );
            for r in kb.rules() {
                let body: Vec<String> = r.body().map(|l| l.to_string()).collect();
                let _ = writeln!(out, "  {}: {} :- {}  {}", r.id, r.head, body.join(", "), r.interval);
            }
            ok(out)
        }
    }
}

fn args(cli: &Cli, input: &Path) -> Result<Output, Failure> {
    let kb = read_kb(input)?;
    let opts = options(cli);
    let set = build_all_capped(&kb, opts.max_arguments).map_err(rejected)?;
    let table = goalsel::StrengthTable::compute(&set, &kb);
    let rows = argument_rows(&set, &table);
    match cli.format {
        Format::Json => ok(to_json(&json!({ "arguments": rows, "diagnostics": set.diagnostics() }))),
        Format::Text => {
            let mut out = arguments_text(&rows);
            for d in set.diagnostics() {
                let _ = writeln!(out, "note: {d}");
            }
            ok(out)
        }
    }
}

fn attacks(cli: &Cli, input: &Path) -> Result<Output, Failure> {
    let kb = read_kb(input)?;
    let opts = options(cli);
    let set = build_all_capped(&kb, opts.max_arguments).map_err(rejected)?;
    let table = goalsel::StrengthTable::compute(&set, &kb);
    let all = goalsel::all_attacks(&set, &kb);
    let filtered = goalsel::semantics::successful_filter(&all, &table, opts.tiebreak);
    let (before, after) = (attack_rows(&all, &set), attack_rows(&filtered, &set));
    match cli.format {
        Format::Json => ok(to_json(&json!({ "attacks": before, "successful_attacks": after }))),
        Format::Text => ok(format!(
            "attacks:\n{}successful attacks:\n{}",
            attacks_text(&before),
            attacks_text(&after)
        )),
    }
}

fn select_cmd(cli: &Cli, input: &Path) -> Result<Output, Failure> {
    let kb = read_kb(input)?;
    let sel = run_select(&kb, &options(cli))?;
    let report = SelectionReport::new(&sel);
    match cli.format {
        Format::Json => ok(to_json(&report)),
        Format::Text => ok(report.to_text()),
    }
}

fn family_of(sel: &Selection, family: Family) -> Vec<Vec<usize>> {
    let exts = match family {
        Family::ConflictFree => &sel.conflict_free,
        Family::MaxGoal => &sel.max_goal,
        Family::MaxUtil => &sel.max_util,
    };
    exts.iter().map(|e| e.members.clone()).collect()
}

fn verdict_text(name: &str, v: &Verdict) -> String {
    if v.pass {
        String::new()
    } else {
        format!(" {name}: {}", v.witnesses.join("; "))
    }
}

fn postulates_text(r: &PostulateReport) -> String {
    let mut out = String::new();
    for e in &r.extensions {
        let status = if e.pass { "PASS" } else { "FAIL" };
        let _ = write!(out, "{status} {{{}}}", e.members.join(","));
        for (name, v) in [
            ("beliefs", &e.direct.beliefs),
            ("actions", &e.direct.actions),
            ("goals", &e.direct.goals),
            ("superfluity", &e.direct.superfluity),
            ("closure adds", &e.closure),
            ("indirect", &e.indirect),
        ] {
            out.push_str(&verdict_text(name, v));
        }
        out.push('\n');
    }
    if let Some(o) = &r.output {
        let status = if o.closure.pass && o.indirect.pass { "PASS" } else { "FAIL" };
        let _ = writeln!(
            out,
            "{status} output {{{}}}{}{}",
            o.conclusions.join(","),
            verdict_text("closure adds", &o.closure),
            verdict_text("indirect", &o.indirect)
        );
    }
    let _ = writeln!(out, "overall: {}", if r.pass { "PASS" } else { "FAIL" });
    out
}

fn verify_file(cli: &Cli, input: &Path, family: Family) -> Result<Output, Failure> {
    let kb = read_kb(input)?;
    let sel = run_select(&kb, &options(cli))?;
    let report = verify(&family_of(&sel, family), &sel.arguments, &kb);
    let body = match cli.format {
        Format::Json => to_json(&report),
        Format::Text => postulates_text(&report),
    };
    Ok(Output { body, ok: report.pass })
}

/// Shown in full for at most this many failing bases.
const FUZZ_EXAMPLES: usize = 5;

fn verify_fuzz(cli: &Cli, count: u64, first_seed: u64, family: Family) -> Result<Output, Failure> {
    let cfg = GeneratorConfig::default();
    let opts = options(cli);
    let (mut skipped, mut failing) = (0u64, 0u64);
    let mut examples = Vec::new();
    for seed in first_seed..first_seed.saturating_add(count) {
        let kb = random_kb(seed, &cfg);
        let Ok(sel) = select(&kb, &opts) else {
            skipped += 1;
            continue;
        };
        let report = verify(&family_of(&sel, family), &sel.arguments, &kb);
        if !report.pass {
            failing += 1;
            if examples.len() < FUZZ_EXAMPLES {
                examples.push((seed, kb, report));
            }
        }
    }
    let body = match cli.format {
        Format::Json => to_json(&json!({
            "instances": count,
            "skipped": skipped,
            "failing": failing,
            "examples": examples.iter().map(|(seed, kb, report)| json!({
                "seed": seed,
                "kb": kb.to_document(),
                "report": report,
            })).collect::<Vec<_>>(),
        })),
        Format::Text => {
            let mut out = format!("{count} instances, {skipped} skipped, {failing} failing\n");
            for (seed, _, report) in &examples {
                let _ = write!(out, "seed {seed}:\n{}", postulates_text(report));
            }
            out
        }
    };
    Ok(Output { body, ok: failing == 0 })
}

fn export_dot(cli: &Cli, input: &Path) -> Result<Output, Failure> {
    let kb = read_kb(input)?;
    let opts = options(cli);
    let set = build_all_capped(&kb, opts.max_arguments).map_err(rejected)?;
    let table = goalsel::StrengthTable::compute(&set, &kb);
    let filtered = goalsel::semantics::successful_filter(&goalsel::all_attacks(&set, &kb), &table, opts.tiebreak);
    ok(to_dot(&set, &table, &filtered))
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Check { input } => check(cli, input),
        Command::Args { input } => args(cli, input),
        Command::Attacks { input } => attacks(cli, input),
        Command::Select { input } => select_cmd(cli, input),
        Command::Verify { input, fuzz, seed, family } => match (input, fuzz) {
            (_, Some(n)) => verify_fuzz(cli, *n, *seed, *family),
            (Some(path), None) => verify_file(cli, path, *family),
            (None, None) => Err(Failure::Usage(anyhow::anyhow!("verify needs an input file or --fuzz"))),
        },
        Command::ExportDot { input } => export_dot(cli, input),
    }
}

/// Core errors already spell out their causes, so the chain stops after the
/// first one below the CLI's own context.
fn report_error(e: &anyhow::Error) {
    let parts: Vec<String> = e.chain().take(2).map(|c| c.to_string()).collect();
    eprintln!("error: {}", parts.join(": "));
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match run(&cli) {
        Ok(out) => out,
        Err(Failure::Rejected(e)) => {
            report_error(&e);
            return ExitCode::from(1);
        }
        Err(Failure::Usage(e)) => {
            report_error(&e);
            return ExitCode::from(2);
        }
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &out.body).with_context(|| format!("cannot write {}", path.display())),
        None => {
            print!("{}", out.body);
            Ok(())
        }
    };
    if let Err(e) = written {
        report_error(&e);
        return ExitCode::from(2);
    }
    if out.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
