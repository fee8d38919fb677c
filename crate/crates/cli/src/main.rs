use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use beth_forge::beth::{
    countermodel_search, lem_fixture, mp_fixture, mp_psi, parse_frame, print_frame, Forcer, SearchBounds, WalkNode,
};
use beth_forge::calculus::{check_proof, parse_proof, CalcError, Theory, TheoryId};
use beth_forge::classical::{eval_slp, eval_ti, tr, Assignment, EvalError, FunctionalUniverse, TypedUniverse};
use beth_forge::corpus;
use beth_forge::model::{
    enumerate_domain, lawless_extend, lemmas, Elem, parse_node, parse_table, print_table, Model, TruncationParams,
};
use beth_forge::syntax::godel::{decode_formula, encode_formula, GodelCode};
use beth_forge::syntax::{closure, free_vars, parse_expr, parse_formula, sort_of, Expr, Formula, Language, Var};
use beth_forge::translate::{interpret, neg, prime, star};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "beth-forge", version, about = "Beth forcing, proof checking, functional models and translations")]
struct Cli {
    /// Output style.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for generated corpora.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Highest type level.
    #[arg(long, global = true, default_value_t = 2)]
    s: u32,
    /// Bound on frame size for countermodel search.
    #[arg(long, global = true, default_value_t = 4)]
    max_states: usize,
    /// Truncation depth of the functional model.
    #[arg(long, global = true, default_value_t = 2)]
    depth: u32,
    /// Truncation base of the functional model.
    #[arg(long, global = true, default_value_t = 2)]
    base: u32,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Lang {
    #[value(name = "L")]
    L,
    #[value(name = "LP")]
    Lp,
    #[value(name = "SLP")]
    Slp,
    #[value(name = "TI")]
    Ti,
}

impl From<Lang> for Language {
    fn from(l: Lang) -> Language {
        match l {
            Lang::L => Language::L,
            Lang::Lp => Language::LP,
            Lang::Slp => Language::SLP,
            Lang::Ti => Language::TI,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Pass {
    Star,
    Prime,
    Neg,
    Int,
}

#[derive(Clone, Copy, ValueEnum)]
enum Demo {
    Lem,
    Mp,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and report its sort and Goedel number.
    Parse {
        formula: String,
        #[arg(long, value_enum, default_value_t = Lang::Slp)]
        lang: Lang,
    },
    /// Check a proof file against a theory.
    CheckProof {
        file: PathBuf,
        #[arg(long, default_value = "L")]
        theory: String,
    },
    /// Decide whether a walk of a frame forces a formula.
    Force {
        frame: PathBuf,
        formula: String,
        /// Walk as dot-separated state names; the root by default.
        #[arg(long)]
        walk: Option<String>,
    },
    /// Search for a frame whose root does not force the closure of a formula.
    Countermodel {
        formula: String,
        #[arg(long, default_value_t = 2)]
        max_carrier: u32,
    },
    /// Truncations of the functional model.
    Bs {
        #[command(subcommand)]
        action: BsAction,
    },
    /// Translate a TI formula into SLP.
    Translate {
        formula: String,
        #[arg(long, default_value = "TI")]
        from: String,
        #[arg(long, value_enum, default_value_t = Pass::Int)]
        pass: Pass,
        /// Report every stage.
        #[arg(long)]
        trace: bool,
    },
    /// Evaluate a TI formula in a finite type structure.
    Eval {
        formula: String,
        #[arg(long, default_value = "s=2,N=2")]
        universe: String,
        /// Values such as `x1=0,X1_1={0}`.
        #[arg(long, default_value = "")]
        assign: String,
    },
    /// Evaluate the formula with the given Goedel number by recursion on codes.
    Tr {
        code: String,
        #[arg(long, default_value = "s=2,N=2")]
        universe: String,
        #[arg(long, default_value = "")]
        assign: String,
    },
    /// Compare TI truth with the truth of the interpretation.
    IntCheck {
        /// One TI formula per line; a generated corpus when absent.
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long, default_value_t = 300)]
        count: usize,
        #[arg(long, default_value = "s=2,N=2")]
        universe: String,
    },
    /// The two countermodels of the excluded middle and Markov's principle.
    Demo {
        #[arg(value_enum)]
        which: Demo,
    },
}

#[derive(Subcommand)]
enum BsAction {
    /// Sizes and members of a truncated carrier.
    Enumerate {
        #[arg(long, default_value_t = 1)]
        level: u32,
    },
    /// Run property suites.
    Lemmas {
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Build a lawless table agreeing with a given one on an initial segment.
    ExtendLawless {
        table: PathBuf,
        #[arg(long)]
        x: u32,
        /// Node in the form `<0,1|K1>`.
        #[arg(long)]
        gamma: String,
    },
}

/// A finished command: exit code, text and structured document.
struct Outcome {
    code: u8,
    text: String,
    doc: Value,
}

impl Outcome {
    fn ok(text: String, doc: Value) -> Outcome {
        Outcome { code: 0, text, doc }
    }

    fn verdict(holds: bool, text: String, doc: Value) -> Outcome {
        Outcome { code: if holds { 0 } else { 1 }, text, doc }
    }
}

/// An input or usage error, reported with exit code 2.
#[derive(Debug)]
struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Usage {
        Usage(e.to_string())
    }
}

type Res = Result<Outcome, Usage>;

fn read(path: &Path) -> Result<String, Usage> {
    std::fs::read_to_string(path).map_err(|e| Usage(format!("{}: {e}", path.display())))
}

fn universe(desc: &str) -> Result<TypedUniverse, Usage> {
    let (mut s, mut n) = (None, None);
    for part in desc.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| Usage(format!("bad universe entry '{part}'")))?;
        let v: u64 = v.trim().parse().map_err(|_| Usage(format!("bad number in '{part}'")))?;
        match k.trim() {
            "s" => s = Some(v as u32),
            "N" | "n" => n = Some(v),
            other => return Err(Usage(format!("unknown universe key '{other}'"))),
        }
    }
    let (s, n) = (s.unwrap_or(2), n.unwrap_or(2));
    Ok(TypedUniverse::new(s, n)?)
}

/// Splits at commas outside braces.
fn top_level_split(text: &str) -> Vec<&str> {
    let (mut out, mut depth, mut start) = (Vec::new(), 0i32, 0);
    for (i, c) in text.char_indices() {
        match c {
            '{' => depth += 1,
            '}' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&text[start..]);
    out.into_iter().map(str::trim).filter(|p| !p.is_empty()).collect()
}

fn assignment(u: &TypedUniverse, desc: &str) -> Result<Assignment<u64>, Usage> {
    let mut e = Assignment::new();
    for part in top_level_split(desc) {
        let (name, value) = part.split_once('=').ok_or_else(|| Usage(format!("bad assignment '{part}'")))?;
        let Expr::Var(v) = parse_expr(name.trim(), Language::TI, u.s)? else {
            return Err(Usage(format!("'{name}' is not a variable")));
        };
        e.set(v, u.parse_element(v.level, value)?);
    }
    Ok(e)
}

fn unbound(f: &Formula, e: &Assignment<u64>) -> Vec<Var> {
    free_vars(f).into_iter().filter(|v| e.get(v).is_none()).collect()
}

fn run(cli: &Cli) -> Res {
    match &cli.command {
        Command::Parse { formula, lang } => parse_cmd(cli, formula, (*lang).into()),
        Command::CheckProof { file, theory } => check_cmd(cli, file, theory),
        Command::Force { frame, formula, walk } => force_cmd(cli, frame, formula, walk.as_deref()),
        Command::Countermodel { formula, max_carrier } => countermodel_cmd(cli, formula, *max_carrier),
        Command::Bs { action } => bs_cmd(cli, action),
        Command::Translate { formula, from, pass, trace } => translate_cmd(cli, formula, from, *pass, *trace),
        Command::Eval { formula, universe: desc, assign } => {
            let u = universe(desc)?;
            let f = parse_formula(formula, Language::TI, u.s)?;
            let e = assignment(&u, assign)?;
            let missing = unbound(&f, &e);
            if !missing.is_empty() {
                return Err(Usage(format!("no value for {}", join(&missing))));
            }
            let v = eval_ti(&u, &f, &e)?;
            Ok(Outcome::ok(format!("{v}\n"), json!({"formula": f.to_string(), "universe": desc, "value": v})))
        }
        Command::Tr { code, universe: desc, assign } => {
            let u = universe(desc)?;
            let code: GodelCode = code.trim().parse().map_err(|_| Usage(format!("'{code}' is not a number")))?;
            let f = decode_formula(&code)?;
            let e = assignment(&u, assign)?;
            let v = tr(&u, &code, &e)?;
            Ok(Outcome::ok(format!("{f}\n{v}\n"), json!({"formula": f.to_string(), "value": v})))
        }
        Command::IntCheck { corpus: file, count, universe: desc } => int_check(cli, file.as_deref(), *count, desc),
        Command::Demo { which } => demo(*which),
    }
}

fn join(vars: &[Var]) -> String {
    vars.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")
}

fn parse_cmd(cli: &Cli, text: &str, lang: Language) -> Res {
    let f = parse_formula(text, lang, cli.s)?;
    let code = encode_formula(&f);
    let text = format!("{f}\nsort {}\ndepth {}\ngoedel {code}\n", sort_of(&f), f.depth());
    Ok(Outcome::ok(
        text,
        json!({"formula": f.to_string(), "sort": sort_of(&f), "depth": f.depth(), "goedel": code.to_string()}),
    ))
}

fn check_cmd(cli: &Cli, file: &Path, theory: &str) -> Res {
    let id: TheoryId = theory.parse().map_err(Usage)?;
    let th = Theory::new(id, cli.s);
    let proof = parse_proof(&read(file)?, &th)?;
    match check_proof(&th, &proof) {
        Ok(c) => {
            let ctx: Vec<String> = c.sequent.context.iter().map(|f| f.to_string()).collect();
            let axioms: Vec<String> = c.axioms.iter().map(|a| a.family.to_string()).collect();
            let text = format!(
                "valid in {id}_{}: {}|- {}\naxioms: {}\n",
                cli.s,
                ctx.iter().map(|f| format!("{f} ")).collect::<String>(),
                c.sequent.conclusion,
                if axioms.is_empty() { "none".into() } else { axioms.join(", ") }
            );
            let doc = json!({"valid": true, "theory": id.to_string(), "s": cli.s, "context": ctx,
                "conclusion": c.sequent.conclusion.to_string(), "axioms": axioms, "classical": c.classical});
            Ok(Outcome::ok(text, doc))
        }
        Err(CalcError::Syntax(e)) => Err(Usage(e.to_string())),
        Err(e) => Ok(Outcome::verdict(false, format!("invalid: {e}\n"), json!({"valid": false, "error": e.to_string()}))),
    }
}

fn force_cmd(cli: &Cli, frame_file: &Path, text: &str, walk: Option<&str>) -> Res {
    let frame = parse_frame(&read(frame_file)?)?;
    let problems = frame.validate();
    if !problems.is_empty() {
        let list: Vec<String> = problems.iter().map(|v| v.to_string()).collect();
        return Err(Usage(format!("invalid frame: {}", list.join("; "))));
    }
    let phi = closure(&parse_formula(text, Language::SLP, cli.s)?);
    let node = match walk {
        Some(w) => WalkNode::parse(w, &frame)?,
        None => WalkNode::root(&frame),
    };
    let fo = Forcer::for_formula(&frame, &phi)?;
    let forced = fo.force(&node, &phi, &Default::default())?;
    let at = node.display(&frame);
    let text = format!("{at} {} {phi}\n", if forced { "forces" } else { "does not force" });
    Ok(Outcome::verdict(forced, text, json!({"walk": at, "formula": phi.to_string(), "forced": forced})))
}

fn countermodel_cmd(cli: &Cli, text: &str, max_carrier: u32) -> Res {
    let phi = parse_formula(text, Language::LP, cli.s)?;
    let bounds = SearchBounds { max_states: cli.max_states, max_carrier };
    match countermodel_search(&phi, bounds)? {
        Some((frame, walk)) => {
            let printed = print_frame(&frame);
            let at = walk.display(&frame);
            let text = format!("countermodel: {at} does not force {}\n{printed}", closure(&phi));
            Ok(Outcome::verdict(false, text, json!({"refuted": true, "walk": at, "frame": printed})))
        }
        None => {
            let text = format!("no countermodel with at most {} states\n", cli.max_states);
            Ok(Outcome::ok(text, json!({"refuted": false, "max_states": cli.max_states})))
        }
    }
}

fn model(cli: &Cli) -> Result<Model, Usage> {
    Ok(Model::new(TruncationParams::new(cli.s, cli.depth, cli.base)?)?)
}

fn bs_cmd(cli: &Cli, action: &BsAction) -> Res {
    let m = model(cli)?;
    match action {
        BsAction::Enumerate { level } => {
            let d = enumerate_domain(&m, *level)?;
            let over = if *level == 0 { 0 } else { m.domain_of(*level)?.len() };
            let show = |i: usize| -> Result<String, Usage> {
                let e = &d.carrier[i];
                let name = m.describe(e);
                match e {
                    Elem::Fun(t) if name.starts_with('<') => Ok(print_table(&m, t)?),
                    _ => Ok(name),
                }
            };
            let lawlike: Vec<String> = d.lawlike.iter().map(|&i| show(i)).collect::<Result<_, _>>()?;
            let lawless: Vec<String> = d.lawless.iter().map(|(i, _)| show(*i)).collect::<Result<_, _>>()?;
            let mut text = format!("{}: a_{level} has {} elements", m.params, d.carrier.len());
            if *level > 0 {
                let _ = write!(text, ", tables over {over} nodes");
            }
            text.push('\n');
            for (title, list) in [("lawlike", &lawlike), ("lawless", &lawless)] {
                let _ = writeln!(text, "{title} ({}):", list.len());
                for l in list.iter() {
                    for line in l.lines() {
                        let _ = writeln!(text, "  {line}");
                    }
                }
            }
            let doc = json!({"params": m.params.to_string(), "level": level, "carrier": d.carrier.len(),
                "nodes": over, "lawlike": lawlike, "lawless": lawless});
            Ok(Outcome::ok(text, doc))
        }
        BsAction::Lemmas { suite } => {
            let reports = if suite == "all" { lemmas::run_all(&m)? } else { vec![lemmas::run_suite(&m, suite)?] };
            let mut text = format!("{}\n", m.params);
            let mut rows = Vec::new();
            for r in &reports {
                let _ = writeln!(
                    text,
                    "{:<16} {:>8} instances {:>4} failed {}",
                    r.name,
                    r.instances,
                    r.failed,
                    if r.passed() { "PASS" } else { "FAIL" }
                );
                for f in &r.failures {
                    let _ = writeln!(text, "    {f}");
                }
                rows.push(json!({"suite": r.name, "instances": r.instances, "failed": r.failed, "failures": r.failures}));
            }
            let all = reports.iter().all(|r| r.passed());
            Ok(Outcome::verdict(all, text, json!({"params": m.params.to_string(), "suites": rows, "passed": all})))
        }
        BsAction::ExtendLawless { table, x, gamma } => {
            let f = parse_table(&m, &read(table)?)?;
            let node = parse_node(&m, gamma, cli.s as usize)?;
            let at = m.m().find(&node).ok_or_else(|| Usage(format!("{gamma} is not a node of the truncation")))?;
            let h = lawless_extend(&m, &f, *x, at)?;
            let printed = print_table(&m, &h)?;
            Ok(Outcome::ok(printed.clone(), json!({"table": printed})))
        }
    }
}

fn translate_cmd(cli: &Cli, text: &str, from: &str, pass: Pass, trace: bool) -> Res {
    if !from.eq_ignore_ascii_case("TI") {
        return Err(Usage(format!("only TI formulas can be translated, not {from}")));
    }
    let f = parse_formula(text, Language::TI, cli.s)?;
    let t = interpret(&f);
    let result = match pass {
        Pass::Star => star(&f),
        Pass::Prime => prime(&f),
        Pass::Neg => neg(&f),
        Pass::Int => t.int.clone(),
    };
    let defs: Vec<Value> = t
        .definitions
        .iter()
        .map(|d| json!({"level": d.level, "lhs": d.lhs.to_string(), "rhs": d.rhs.to_string(), "expansion": d.expansion.to_string()}))
        .collect();
    let mut doc = json!({"input": f.to_string(), "result": result.to_string()});
    let mut out = format!("{result}\n");
    if trace {
        doc["trace"] = json!({"closed": t.closed.to_string(), "star": t.star.to_string(), "prime": t.prime.to_string(),
            "int": t.int.to_string(), "definitions": defs});
        out = format!(
            "input  {f}\nclosed {}\nstar   {}\nprime  {}\nint    {}\n",
            t.closed, t.star, t.prime, t.int
        );
        for d in &t.definitions {
            let _ = writeln!(out, "def    {} ~{} {} := {}", d.lhs, d.level, d.rhs, d.expansion);
        }
    }
    Ok(Outcome::ok(out, doc))
}

fn int_check(cli: &Cli, file: Option<&Path>, count: usize, desc: &str) -> Res {
    let u = universe(desc)?;
    let w = FunctionalUniverse::companion(&u)?;
    let formulas: Vec<Formula> = match file {
        Some(path) => read(path)?
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| parse_formula(l, Language::TI, u.s).map(|f| closure(&f)))
            .collect::<Result<_, _>>()?,
        None => corpus::ti_formulas(cli.seed, u.s, count),
    };
    let e = Assignment::new();
    let show = |r: &Result<bool, EvalError>| match r {
        Ok(b) => b.to_string(),
        Err(e) => format!("error: {e}"),
    };
    let mut text = format!("{:<6} {:<6} {:<6} {:<6} {:<6} formula\n", "TI", "int", "star", "neg", "agree");
    let (mut rows, mut agree) = (Vec::new(), 0);
    for f in &formulas {
        let truth = eval_ti(&u, f, &e);
        let t = interpret(f);
        let int = eval_slp(&w, &t.int, &Assignment::new());
        let st = eval_ti(&u, &t.star, &e);
        let ng = eval_ti(&u, &neg(f), &e);
        let ok = truth.is_ok() && int == truth && st == truth && ng == truth;
        agree += usize::from(ok);
        let _ = writeln!(
            text,
            "{:<6} {:<6} {:<6} {:<6} {:<6} {f}",
            show(&truth),
            show(&int),
            show(&st),
            show(&ng),
            if ok { "yes" } else { "NO" }
        );
        rows.push(json!({"formula": f.to_string(), "ti": truth.ok(), "int": int.ok(), "star": st.ok(), "neg": ng.ok(), "agree": ok}));
    }
    let _ = writeln!(text, "{agree}/{} agree (numbers 0..{} in SLP)", formulas.len(), w.top);
    let all = agree == formulas.len();
    Ok(Outcome::verdict(all, text, json!({"rows": rows, "agree": agree, "total": formulas.len(), "top": w.top})))
}

fn demo(which: Demo) -> Res {
    match which {
        Demo::Lem => {
            let frame = lem_fixture();
            let lem = parse_formula("p | ~p", Language::L, 1)?;
            let forced = Forcer::for_formula(&frame, &lem)?.force_root(&lem)?;
            let verdict = if forced { "root forces p | ~p" } else { "root does not force p | ~p" };
            let printed = print_frame(&frame);
            Ok(Outcome::ok(format!("{printed}{verdict}\n"), json!({"frame": printed, "formula": lem.to_string(), "forced": forced})))
        }
        Demo::Mp => {
            let frame = mp_fixture();
            let x = Var::num(1);
            let psi = mp_psi(&Expr::Var(x));
            let ex = Formula::exists(x, psi.clone());
            let checks = [
                ("MR1", Formula::forall(x, Formula::or(psi.clone(), Formula::not(psi))), true),
                ("MR2", Formula::not(Formula::not(ex.clone())), true),
                ("MR3", ex, false),
            ];
            let printed = print_frame(&frame);
            let mut text = printed.clone();
            let mut rows = Vec::new();
            for (name, phi, expected) in checks {
                let forced = Forcer::for_formula(&frame, &phi)?.force_root(&phi)?;
                let _ = writeln!(
                    text,
                    "{name}: root {} {phi} (expected {})",
                    if forced { "forces" } else { "does not force" },
                    if expected { "forced" } else { "not forced" }
                );
                rows.push(json!({"name": name, "formula": phi.to_string(), "forced": forced, "expected": expected}));
            }
            Ok(Outcome::ok(text, json!({"frame": printed, "numbers": frame.numbers, "verdicts": rows})))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Text => print!("{}", out.text),
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.doc).expect("documents serialise")),
            }
            ExitCode::from(out.code)
        }
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn commas_inside_braces_stay_together() {
        assert_eq!(top_level_split("x1=0, X1_1={0,1},"), vec!["x1=0", "X1_1={0,1}"]);
    }

    #[test]
    fn universe_descriptions() {
        let u = universe("s=1,N=3").unwrap();
        assert_eq!((u.s, u.n), (1, 3));
        assert!(universe("s=1,M=3").is_err());
        assert!(universe("s=9,N=2").is_err());
    }

    #[test]
    fn assignments_bind_typed_values() {
        let u = universe("s=2,N=2").unwrap();
        let e = assignment(&u, "x1=1,X1_1={0}").unwrap();
        assert!(e.get(&Var::num(1)).is_some());
        assert!(assignment(&u, "x1=7").is_err());
        assert!(assignment(&u, "0=1").is_err());
    }

    #[test]
    fn usage_errors_from_clap() {
        assert!(Cli::try_parse_from(["beth-forge", "translate"]).is_err());
        assert!(Cli::try_parse_from(["beth-forge", "--format", "xml", "demo", "lem"]).is_err());
    }
}
