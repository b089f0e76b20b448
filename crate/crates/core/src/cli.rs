//! The `tt` command line.
//!
//! Exit status is 0 when every check passes, 1 when some check fails and 2
//! when an input cannot be read, parsed or bound. Reports are plain text;
//! `TT_COLOR=1` colors the verdict words.

use crate::kernel::{run_script, Checker, Signature};
use crate::modelcheck::{run_engine, ENGINES};
use crate::semantics::{
    interp_judgement, verify_rule_soundness, Comparison, Interp, ModelEnv, RuleInstance, SemError, SemanticValue,
};
use crate::sset::{
    is_fibration_truncated, map_from_json, pi_f_formula, verify_sset_adjunction, SSetError, SimplicialMap,
};
use crate::syntax::{parse_script, print_judgement, Judgement, Statement, Type};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Parser, Debug, Clone)]
#[command(name = "tt", version, about = "Type checker and finite semantics lab")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Also write the report to this file.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Typecheck every judgement of a script.
    Check {
        file: PathBuf,
        /// Report all failures instead of stopping at the first.
        #[arg(long)]
        keep_going: bool,
    },
    /// Interpret a script in a groupoid model and check soundness.
    Interp {
        file: PathBuf,
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Run the model-structure checks for an engine.
    Modelcheck {
        /// One of gpd, finset-minimal, finset-discrete.
        engine: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        size: usize,
    },
    /// Truncated simplicial sets.
    Sset {
        #[command(subcommand)]
        command: SsetCommand,
    },
}

#[derive(Subcommand, Debug, Clone)]
pub enum SsetCommand {
    /// Π along `f: B → A` of `p: X → B`, with adjunction checks.
    Pi {
        f: PathBuf,
        p: PathBuf,
        #[arg(long)]
        trunc: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    InputError,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::InputError => 2,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub status: Status,
    pub text: String,
    pub json: Option<Value>,
}

impl Report {
    fn input_error(header: String, msg: impl std::fmt::Display) -> Report {
        Report {
            status: Status::InputError,
            text: format!("{header}\nerror: {msg}\nRESULT ERROR"),
            json: None,
        }
    }
}

fn color_enabled() -> bool {
    std::env::var("TT_COLOR").map(|v| v == "1").unwrap_or(false)
}

/// Colors PASS/FAIL/SOUND/UNSOUND/ERROR words when `TT_COLOR=1`.
pub fn paint(text: &str) -> String {
    if !color_enabled() {
        return text.to_string();
    }
    let mut out = text.to_string();
    for (w, c) in [("UNSOUND", 31), ("SOUND", 32), ("FAIL", 31), ("PASS", 32), ("ERROR", 33)] {
        let mut next = String::new();
        let mut rest = out.as_str();
        while let Some(i) = rest.find(w) {
            let before_ok = i == 0 || !rest.as_bytes()[i - 1].is_ascii_alphanumeric();
            next.push_str(&rest[..i]);
            if before_ok {
                next.push_str(&format!("\x1b[{c}m{w}\x1b[0m"));
            } else {
                next.push_str(w);
            }
            rest = &rest[i + w.len()..];
        }
        next.push_str(rest);
        out = next;
    }
    out
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn cmd_check(file: &Path, keep_going: bool) -> Report {
    match read(file) {
        Ok(text) => check_source(&file.display().to_string(), &text, keep_going),
        Err(e) => Report::input_error(format!("# tt check {}", file.display()), e),
    }
}

/// Checks script text; `name` is used in the header and locations.
pub fn check_source(name: &str, text: &str, keep_going: bool) -> Report {
    let header = format!("# tt check {name}");
    let script = match parse_script(text) {
        Ok(s) => s,
        Err(e) => return Report::input_error(header, format!("{name}:{e}")),
    };
    let rep = run_script(&script, keep_going);
    let mut lines = vec![header];
    for o in &rep.outcomes {
        match &o.result {
            Ok(d) => lines.push(format!("PASS {name}:{} {} [{} steps]", o.loc, o.text, d.node_count())),
            Err(e) => lines.push(format!("FAIL {name}:{} {} :: {e}", o.loc, o.text)),
        }
    }
    if let Some((loc, e)) = &rep.declaration_error {
        lines.push(format!("FAIL {name}:{loc} declaration :: {e}"));
    }
    let passed = rep.outcomes.iter().filter(|o| o.passed()).count();
    lines.push(format!("checked {} of {} judgements", passed, rep.outcomes.len()));
    let ok = rep.all_passed();
    lines.push(format!("RESULT {}", if ok { "PASS" } else { "FAIL" }));
    Report {
        status: if ok { Status::Pass } else { Status::Fail },
        text: lines.join("\n"),
        json: None,
    }
}

fn input_sem_error(e: &SemError) -> bool {
    matches!(
        e,
        SemError::MissingBaseBinding(_)
            | SemError::MissingConstBinding(_)
            | SemError::Unsupported(_)
            | SemError::Format(_)
            | SemError::NotSplit(_)
    )
}

pub fn cmd_interp(file: &Path, model: &Path) -> Report {
    let header = format!("# tt interp {} --model {}", file.display(), model.display());
    let text = match read(file) {
        Ok(t) => t,
        Err(e) => return Report::input_error(header, e),
    };
    match ModelEnv::load(model) {
        Ok(env) => interp_source(&file.display().to_string(), &text, &model.display().to_string(), &env),
        Err(e) => Report::input_error(header, e),
    }
}

/// Interprets script text in a loaded model environment.
pub fn interp_source(name: &str, text: &str, model_name: &str, env: &ModelEnv) -> Report {
    let header = format!("# tt interp {name} --model {model_name}");
    let script = match parse_script(text) {
        Ok(s) => s,
        Err(e) => return Report::input_error(header, format!("{name}:{e}")),
    };
    let mut sig = Signature::new();
    let mut lines = vec![header.clone()];
    let mut items = Vec::new();
    let mut stats: BTreeMap<String, usize> = BTreeMap::new();
    let mut status = Status::Pass;
    for st in &script.statements {
        let loc = format!("{name}:{}", st.loc);
        let judgement = match &st.item {
            Statement::Base { name, params } => {
                if let Err(e) = sig.declare_base(name, params.clone()) {
                    return Report::input_error(header, format!("{loc}: {e}"));
                }
                continue;
            }
            Statement::Const { name, ty } => {
                if let Err(e) = sig.declare_const(name, ty.clone()) {
                    return Report::input_error(header, format!("{loc}: {e}"));
                }
                continue;
            }
            Statement::Check { judgement, exch } => {
                if exch.is_some() {
                    lines.push(format!("skip {loc} exchange checks have no interpretation here"));
                    continue;
                }
                judgement
            }
        };
        let shown = print_judgement(judgement);
        if let Err(e) = Checker::new(&sig).check_judgement(judgement) {
            lines.push(format!("FAIL {loc} {shown} :: {e}"));
            items.push(json!({"loc": loc, "judgement": shown, "verdict": "ill-typed", "error": e.to_string()}));
            status = Status::Fail;
            continue;
        }
        let ip = Interp::new(&sig, env);
        let value = match interp_judgement(&ip, judgement) {
            Ok(v) => v,
            Err(e) => {
                lines.push(format!("ERROR {loc} {shown} :: {e}"));
                items.push(json!({"loc": loc, "judgement": shown, "verdict": "error", "error": e.to_string()}));
                if input_sem_error(&e) {
                    status = Status::InputError;
                    break;
                }
                status = Status::Fail;
                continue;
            }
        };
        let mut item = json!({"loc": loc, "judgement": shown});
        match value {
            SemanticValue::Context(sc) => {
                let (o, m) = (sc.groupoid.obj_count(), sc.groupoid.mor_count());
                lines.push(format!("ctx  {loc} {shown} :: {o} objects, {m} morphisms"));
                item["kind"] = "context".into();
                item["objects"] = o.into();
                item["morphisms"] = m.into();
            }
            SemanticValue::Type(ty) => {
                let total = &ty.slice.total;
                let (o, m) = (total.obj_count(), total.mor_count());
                let mut line = format!("type {loc} {shown} :: {o} objects, {m} morphisms");
                item["kind"] = "type".into();
                item["objects"] = o.into();
                item["morphisms"] = m.into();
                if let Judgement::TypeForm { ctx, ty: t @ (Type::Pi(..) | Type::Sigma(..)) } = judgement {
                    let r = verify_rule_soundness(&ip, &RuleInstance::Formation { ctx: ctx.clone(), ty: t.clone() });
                    *stats.entry(r.comparison.to_string()).or_default() += 1;
                    line.push_str(&format!("; formation {} ({})", if r.passed { "PASS" } else { "FAIL" }, r.comparison));
                    item["comparison"] = r.comparison.to_string().into();
                    if !r.passed {
                        status = Status::Fail;
                    }
                }
                lines.push(line);
            }
            SemanticValue::Term(tm) => {
                let o = tm.section.dom.obj_count();
                lines.push(format!("term {loc} {shown} :: section over {o} objects"));
                item["kind"] = "term".into();
                item["objects"] = o.into();
            }
            SemanticValue::Equal(_) => {
                let r = verify_rule_soundness(&ip, &RuleInstance::Equation(judgement.clone()));
                *stats.entry(r.comparison.to_string()).or_default() += 1;
                let verdict = if r.passed { "SOUND" } else { "UNSOUND" };
                lines.push(format!("eq   {loc} {shown} :: {verdict} ({})", r.comparison));
                item["kind"] = "equation".into();
                item["verdict"] = verdict.into();
                item["comparison"] = r.comparison.to_string().into();
                if r.comparison == Comparison::Failed {
                    status = Status::Fail;
                }
            }
        }
        items.push(item);
    }
    let summary: Vec<String> = stats.iter().map(|(k, v)| format!("{k}={v}")).collect();
    lines.push(format!("comparisons: {}", if summary.is_empty() { "none".into() } else { summary.join(" ") }));
    let verdict = match status {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::InputError => "ERROR",
    };
    lines.push(format!("RESULT {verdict}"));
    Report {
        status,
        text: lines.join("\n"),
        json: Some(json!({
            "command": "interp",
            "file": name,
            "model": model_name,
            "judgements": items,
            "comparisons": stats,
            "result": verdict,
        })),
    }
}

pub fn cmd_modelcheck(engine: &str, seed: u64, size: usize) -> Report {
    match run_engine(engine, seed, size) {
        Some(r) => Report {
            status: if r.passed() { Status::Pass } else { Status::Fail },
            text: r.to_string(),
            json: None,
        },
        None => Report::input_error(
            format!("# modelcheck engine={engine} seed={seed} size={size}"),
            format!("unknown engine `{engine}`; expected one of {}", ENGINES.join(", ")),
        ),
    }
}

fn load_map(path: &Path, trunc: Option<usize>) -> Result<SimplicialMap, SSetError> {
    let text = read(path).map_err(SSetError::Format)?;
    let m = map_from_json(&text, path.parent())?;
    match trunc {
        Some(n) => m.truncate(n),
        None => Ok(m),
    }
}

pub fn cmd_sset_pi(f: &Path, p: &Path, trunc: Option<usize>) -> Report {
    let header = format!(
        "# tt sset pi {} {} trunc={}",
        f.display(),
        p.display(),
        trunc.map_or("file".to_string(), |n| n.to_string())
    );
    let (fm, pm) = match (load_map(f, trunc), load_map(p, trunc)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return Report::input_error(header, e),
    };
    let n = fm.cod.truncation();
    let mut lines = vec![header.clone()];
    lines.push(format!("A levels {:?}", fm.cod.counts()));
    lines.push(format!("B levels {:?}", fm.dom.counts()));
    lines.push(format!("X levels {:?}", pm.dom.counts()));
    let mut ok = true;
    for (name, m) in [("f", &fm), ("p", &pm)] {
        let fib = is_fibration_truncated(m, n);
        lines.push(format!("{name} fibration {}", if fib { "yes" } else { "no" }));
        ok &= fib;
    }
    if !ok {
        lines.push("RESULT FAIL".into());
        return Report {
            status: Status::Fail,
            text: lines.join("\n"),
            json: None,
        };
    }
    let pi = match pi_f_formula(&fm, &pm) {
        Ok(pi) => pi,
        Err(e @ (SSetError::CodomainMismatch | SSetError::LevelMismatch(..))) => return Report::input_error(header, e),
        Err(e) => {
            lines.push(format!("FAIL pi :: {e}"));
            lines.push("RESULT FAIL".into());
            return Report {
                status: Status::Fail,
                text: lines.join("\n"),
                json: None,
            };
        }
    };
    lines.push(format!("Pi levels {:?}", pi.total.counts()));
    let pi_fib = is_fibration_truncated(&pi.proj, n);
    lines.push(format!("Pi fibration {}", if pi_fib { "yes" } else { "no" }));
    ok &= pi_fib;
    // Test objects: the identity of A and each vertex of A.
    let a = &fm.cod;
    let mut tests = vec![("id".to_string(), SimplicialMap::identity(a))];
    for v in 0..a.count(0) {
        if let Ok(q) = SimplicialMap::classifying(a, 0, v) {
            tests.push((format!("vertex {}", a.simplex(0, v)), q));
        }
    }
    for (name, q) in &tests {
        match verify_sset_adjunction(&fm, &pm, q) {
            Ok(r) => {
                let pass = r.holds();
                ok &= pass;
                lines.push(format!(
                    "{} adjunction over {name}: {} = {}{}",
                    if pass { "PASS" } else { "FAIL" },
                    r.lhs,
                    r.rhs,
                    if r.bijective { "" } else { ", transpose not bijective" }
                ));
            }
            Err(e) => {
                ok = false;
                lines.push(format!("FAIL adjunction over {name} :: {e}"));
            }
        }
    }
    lines.push(format!("RESULT {}", if ok { "PASS" } else { "FAIL" }));
    Report {
        status: if ok { Status::Pass } else { Status::Fail },
        text: lines.join("\n"),
        json: None,
    }
}

pub fn run(cfg: &RunConfig) -> Report {
    match &cfg.command {
        Command::Check { file, keep_going } => cmd_check(file, *keep_going),
        Command::Interp { file, model, json } => {
            let mut r = cmd_interp(file, model);
            if !json {
                r.json = None;
            }
            r
        }
        Command::Modelcheck { engine, seed, size } => cmd_modelcheck(engine, *seed, *size),
        Command::Sset {
            command: SsetCommand::Pi { f, p, trunc },
        } => cmd_sset_pi(f, p, *trunc),
    }
}

/// Parses arguments, runs, prints and returns the exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let r = run(&cfg);
    let body = match &r.json {
        Some(v) => serde_json::to_string_pretty(v).expect("json"),
        None => r.text.clone(),
    };
    if let Some(path) = &cfg.report {
        if let Err(e) = std::fs::write(path, format!("{body}\n")) {
            eprintln!("error: {}: {e}", path.display());
            return 2;
        }
    }
    if r.status == Status::InputError {
        eprintln!("{}", paint(&body));
    } else {
        println!("{}", paint(&body));
    }
    r.status.code()
}

pub fn main() -> ! {
    std::process::exit(main_with(std::env::args_os()))
}
