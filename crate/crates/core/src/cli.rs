//! Command-line front end.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};

use crate::analysis::{check_unique_extension, classify_easy, stratify, Sampler, UniqueReport};
use crate::engine::{debug_solve, ground, ground_with, optimize, stable_models, GroundOptions, SolveOptions};
use crate::ht::{program_stable_models, project, AtomSet, ModelSet, DEFAULT_MAX_ATOMS};
use crate::syntax::{parse_formula, parse_program_with, ParseOptions, Program};
use crate::transform::{
    choices_to_normal, debug_transform, eliminate_aggregate_heads, translate_formula, translate_program,
};

pub const EXIT_SAT: i32 = 10;
pub const EXIT_UNSAT: i32 = 20;
pub const EXIT_OPTIMUM: i32 = 30;

#[derive(Parser, Debug)]
#[command(name = "austere", version, about = "Classify, translate and solve easy answer set programs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Override a `#const` definition, as name=int.
    #[arg(long = "const", value_name = "NAME=INT", global = true, value_parser = parse_const)]
    consts: Vec<(String, i64)>,
    /// Seed for sampling choice subsets.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify a program and report diagnostics.
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Atom bound for the stable model counts in the uniqueness report.
        #[arg(long, default_value_t = 12)]
        max_atoms: usize,
        /// Skip the well-founded check over choice subsets.
        #[arg(long)]
        no_unique: bool,
    },
    /// Print the stratification.
    Stratify {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Rewrite a program.
    Translate {
        #[arg(long, value_enum, default_value_t = Target::Austere)]
        to: Target,
        /// Write the auxiliary atom map to this file.
        #[arg(long, value_name = "FILE")]
        emit_map: Option<PathBuf>,
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Compute stable models, or optimal ones under `#minimize`.
    Solve {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Number of models to print; 0 prints all.
        #[arg(long, default_value_t = 0)]
        models: usize,
        #[arg(long, default_value_t = 24)]
        max_choices: usize,
    },
    /// Compute stable models by enumerating here-and-there interpretations.
    Oracle {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long, default_value_t = 0)]
        models: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_ATOMS)]
        max_atoms: usize,
    },
    /// Solve with constraints relaxed, minimizing violations.
    Debug {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long, default_value_t = 0)]
        models: usize,
        #[arg(long, default_value_t = 24)]
        max_choices: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Target {
    /// Negation through auxiliary choices; input is ground first.
    Austere,
    /// Cardinality choices to plain choices and constraints.
    Aggregates,
    /// Plain choices to pairs of normal rules.
    Normal,
    /// Constraints to `ic/1` atoms with a minimize statement.
    Debug,
    /// Input is one formula.
    Formula,
}

fn parse_const(s: &str) -> Result<(String, i64), String> {
    let (k, v) = s.split_once('=').ok_or("expected NAME=INT")?;
    let v = v.trim().parse::<i64>().map_err(|e| e.to_string())?;
    Ok((k.trim().to_string(), v))
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<(i32, String), Failure>;

fn color_enabled() -> bool {
    matches!(std::env::var("AUSTERE_COLOR").as_deref(), Ok("1" | "always" | "true"))
}

fn read_inputs(files: &[PathBuf], stdin: &mut dyn Read) -> Result<String, Failure> {
    let mut text = String::new();
    for f in files {
        if f.as_os_str() == "-" {
            stdin.read_to_string(&mut text)?;
        } else {
            let s = std::fs::read_to_string(f).map_err(|e| Failure(format!("{}: {e}", f.display())))?;
            text.push_str(&s);
        }
        if !text.ends_with('\n') {
            text.push('\n');
        }
    }
    Ok(text)
}

fn load(
    files: &[PathBuf],
    consts: &[(String, i64)],
    stdin: &mut dyn Read,
    err: &mut dyn Write,
) -> Result<Program, Failure> {
    let text = read_inputs(files, stdin)?;
    let opts = ParseOptions { consts: consts.iter().cloned().collect::<BTreeMap<_, _>>() };
    let parsed = parse_program_with(&text, &opts)?;
    for w in parsed.warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    Ok(parsed.program)
}

fn models_text(models: &[AtomSet], limit: usize) -> String {
    let mut s = String::new();
    let shown = if limit == 0 { models.len() } else { limit.min(models.len()) };
    for (i, m) in models.iter().take(shown).enumerate() {
        let atoms: Vec<&str> = m.iter().map(String::as_str).collect();
        let _ = writeln!(s, "Answer: {}", i + 1);
        let _ = writeln!(s, "{}", atoms.join(" "));
    }
    s
}

fn models_json(models: &[AtomSet], limit: usize) -> Json {
    let shown = if limit == 0 { models.len() } else { limit.min(models.len()) };
    json!(models[..shown])
}

fn report_models(ms: &ModelSet, limit: usize, cost: Option<Option<i64>>, as_json: bool) -> (i32, String) {
    let (code, status) = match (ms.is_empty(), cost) {
        (true, _) => (EXIT_UNSAT, "UNSATISFIABLE".to_string()),
        (false, Some(Some(c))) => (EXIT_OPTIMUM, format!("OPTIMUM FOUND cost {c}")),
        (false, _) => (EXIT_SAT, "SATISFIABLE".to_string()),
    };
    if as_json {
        let mut v = json!({ "result": status, "models": models_json(&ms.models, limit) });
        if let Some(Some(c)) = cost {
            v["cost"] = json!(c);
        }
        return (code, format!("{v:#}\n"));
    }
    (code, format!("{}{status}\n", models_text(&ms.models, limit)))
}

fn unique_json(r: &Result<UniqueReport, String>) -> Json {
    match r {
        Ok(r) => json!({
            "ok": r.ok(),
            "exhaustive": r.exhaustive,
            "checked": r.checked,
            "failures": r.failures,
        }),
        Err(e) => json!({ "error": e }),
    }
}

fn check(p: &Program, cli: &Cli, max_atoms: usize, no_unique: bool) -> Outcome {
    let d = classify_easy(p);
    let unique = if no_unique || !d.easy {
        None
    } else {
        let sampler = Sampler { seed: cli.seed, ..Sampler::default() };
        Some(check_unique_extension(p, &sampler, max_atoms).map_err(|e| e.to_string()))
    };
    if cli.json {
        let strata: Vec<Json> = d.parts(p).iter().map(|s| json!(s.iter().collect::<Vec<_>>())).collect();
        let violations: Vec<_> = d.errors().collect();
        let v = json!({
            "class": d.class(),
            "austere": d.austere,
            "stratified_negation": d.stratified_negation,
            "strata": strata,
            "diagnostics": d.diagnostics,
            "violations": violations,
            "unique_extension": unique.as_ref().map(unique_json),
        });
        return Ok((0, format!("{v:#}\n")));
    }
    let mut s = String::new();
    let _ = writeln!(s, "class: {}", d.class());
    let _ = writeln!(s, "strata: {}", d.render(p));
    let _ = writeln!(s, "austere: {}", d.austere);
    let _ = writeln!(s, "stratified negation: {}", d.stratified_negation);
    match &unique {
        Some(Ok(r)) => {
            let scope = if r.exhaustive { "all" } else { "sampled" };
            let verdict = if r.ok() { "total" } else { "not total" };
            let _ = writeln!(s, "well-founded model over {scope} {} choice subsets: {verdict}", r.checked);
            for f in &r.failures {
                let chosen: Vec<&str> = f.choice.iter().map(String::as_str).collect();
                let unknown: Vec<&str> = f.unknown.iter().map(String::as_str).collect();
                let _ = writeln!(s, "  choice {{{}}} leaves {{{}}} undefined", chosen.join(","), unknown.join(","));
            }
        }
        Some(Err(e)) => {
            let _ = writeln!(s, "well-founded check skipped: {e}");
        }
        None => {}
    }
    s.push_str(&d.render_diagnostics(color_enabled()));
    Ok((0, s))
}

fn stratify_cmd(p: &Program, as_json: bool) -> Outcome {
    let st = stratify(p);
    if as_json {
        let strata: Vec<Json> = st
            .strata
            .iter()
            .map(|s| {
                json!({
                    "kind": s.kind,
                    "lines": s.lines(p),
                    "predicates": s.predicates,
                })
            })
            .collect();
        return Ok((0, format!("{:#}\n", json!({ "strata": strata }))));
    }
    let mut s = format!("{}\n", st.render(p));
    for (i, x) in st.strata.iter().enumerate() {
        let kind = format!("{:?}", x.kind).to_lowercase();
        let mut line = format!("{} {kind} {}", i + 1, crate::analysis::render_lines(&x.lines(p)));
        for q in &x.predicates {
            let _ = write!(line, " {q}");
        }
        let _ = writeln!(s, "{line}");
    }
    Ok((0, s))
}

fn translate(text: &str, p: Option<&Program>, to: Target, emit_map: Option<&PathBuf>) -> Outcome {
    let (out, map) = match to {
        Target::Formula => {
            let t = translate_formula(&parse_formula(text.trim())?)?;
            let map: String = t.aux_map().iter().map(|(k, v)| format!("{k}\t{v}\n")).collect();
            (format!("{}\n", t.formula()), map)
        }
        _ => {
            let p = p.expect("program input");
            match to {
                Target::Austere => {
                    let g = ground_with(p, GroundOptions { simplify: false })?;
                    let t = translate_program(&g.to_program())?;
                    (t.program.to_string(), t.aux_map_lines())
                }
                Target::Aggregates => (eliminate_aggregate_heads(p)?.to_string(), String::new()),
                Target::Normal => (choices_to_normal(p)?.to_string(), String::new()),
                Target::Debug => (debug_transform(p)?.to_string(), String::new()),
                Target::Formula => unreachable!(),
            }
        }
    };
    if let Some(path) = emit_map {
        std::fs::write(path, map).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    }
    let mut out = out;
    if !out.ends_with('\n') {
        out.push('\n');
    }
    Ok((0, out))
}

fn oracle(p: &Program, models: usize, max_atoms: usize, as_json: bool) -> Outcome {
    let g = ground_with(p, GroundOptions { simplify: false })?;
    let ms = program_stable_models(&g.to_program(), max_atoms)?;
    Ok(report_models(&project(&ms, &g.vocabulary()), models, None, as_json))
}

fn debug_status(cost: Option<i64>) -> (i32, String) {
    match cost {
        None => (EXIT_UNSAT, "UNSATISFIABLE".to_string()),
        Some(c) => (EXIT_OPTIMUM, format!("OPTIMUM FOUND cost {c}")),
    }
}

fn debug(p: &Program, models: usize, max_choices: usize, as_json: bool) -> Outcome {
    let r = debug_solve(p, &SolveOptions { max_choices, max_models: 0 })?;
    if as_json {
        let (code, status) = debug_status(r.cost);
        let shown = if models == 0 { r.models.len() } else { models.min(r.models.len()) };
        let v = json!({
            "result": status,
            "cost": r.cost,
            "models": models_json(&r.models.models, models),
            "violations": r.violations[..shown],
        });
        return Ok((code, format!("{v:#}\n")));
    }
    let mut s = String::new();
    let shown = if models == 0 { r.models.len() } else { models.min(r.models.len()) };
    for (i, m) in r.models.models.iter().take(shown).enumerate() {
        let atoms: Vec<&str> = m.iter().map(String::as_str).collect();
        let _ = writeln!(s, "Answer: {}", i + 1);
        let _ = writeln!(s, "{}", atoms.join(" "));
        for v in &r.violations[i] {
            let binds: Vec<String> = v.bindings.iter().map(|(k, x)| format!("{k}={x}")).collect();
            let _ = writeln!(s, "% {} violates rule@{}: {} [{}]", v.atom, v.line, v.constraint, binds.join(", "));
        }
    }
    let (code, status) = debug_status(r.cost);
    let _ = writeln!(s, "{status}");
    Ok((code, s))
}

fn dispatch(cli: &Cli, stdin: &mut dyn Read, err: &mut dyn Write) -> Outcome {
    match &cli.command {
        Command::Check { files, max_atoms, no_unique } => {
            check(&load(files, &cli.consts, stdin, err)?, cli, *max_atoms, *no_unique)
        }
        Command::Stratify { files } => stratify_cmd(&load(files, &cli.consts, stdin, err)?, cli.json),
        Command::Translate { to, emit_map, files } => {
            if *to == Target::Formula {
                let text = read_inputs(files, stdin)?;
                translate(&text, None, *to, emit_map.as_ref())
            } else {
                let p = load(files, &cli.consts, stdin, err)?;
                translate("", Some(&p), *to, emit_map.as_ref())
            }
        }
        Command::Solve { files, models, max_choices } => {
            let p = load(files, &cli.consts, stdin, err)?;
            let g = ground(&p)?;
            let opts = SolveOptions { max_choices: *max_choices, max_models: *models };
            if g.optimize {
                let o = optimize(&g, &opts)?;
                Ok(report_models(&o.models, *models, Some(o.cost), cli.json))
            } else {
                Ok(report_models(&stable_models(&g, &opts)?, *models, None, cli.json))
            }
        }
        Command::Oracle { files, models, max_atoms } => {
            oracle(&load(files, &cli.consts, stdin, err)?, *models, *max_atoms, cli.json)
        }
        Command::Debug { files, models, max_choices } => {
            debug(&load(files, &cli.consts, stdin, err)?, *models, *max_choices, cli.json)
        }
    }
}

/// Runs one invocation; returns the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(&cli, stdin, err) {
        Ok((code, text)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}
