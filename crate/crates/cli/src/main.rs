//! `dfml`: translate, reduce, classify and correspond DfML sequents, and
//! check correspondents against finite frames.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use dfml_core::corpus;
use dfml_core::correspondence::{correspond, CorrespondenceError, Correspondent, Options, ThreadChoice};
use dfml_core::reduction::{self, parse_system, Classification, Outcome, ReductionError, ThreadResult, Trace};
use dfml_core::semantics::enumerate::sample;
use dfml_core::semantics::frame_file::{parse_frame, write_frame};
use dfml_core::semantics::oracle::{uses_sequent, verify_enumerated, verify_frames, Verification};
use dfml_core::semantics::{Compiled, Frame};
use dfml_core::syntax::dfml::parse_sequent;
use dfml_core::syntax::{Sequent, Sort};
use dfml_core::translation::{translate, variants, Thread};

const GRAMMAR_HINT: &str = "input syntax: see docs/grammar.md";

#[derive(Parser)]
#[command(name = "dfml", version, about = "Sahlqvist correspondence for distribution-free modal logic")]
struct Cli {
    /// Replay the built-in example corpus and print a pass/fail table.
    #[arg(long)]
    corpus: bool,
    #[command(subcommand)]
    command: Option<Cmd>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ThreadArg {
    Translation,
    Cotranslation,
    Both,
}

impl ThreadArg {
    fn choice(self) -> ThreadChoice {
        match self {
            ThreadArg::Translation => ThreadChoice::Translation,
            ThreadArg::Cotranslation => ThreadChoice::CoTranslation,
            ThreadArg::Both => ThreadChoice::Both,
        }
    }

    fn threads(self) -> Vec<Thread> {
        match self {
            ThreadArg::Translation => vec![Thread::Translation],
            ThreadArg::Cotranslation => vec![Thread::CoTranslation],
            ThreadArg::Both => vec![Thread::Translation, Thread::CoTranslation],
        }
    }
}

#[derive(Args)]
struct Common {
    /// Print reduction traces and intermediate formulas.
    #[arg(long)]
    trace: bool,
    /// Emit a JSON document instead of text.
    #[arg(long)]
    json: bool,
    /// Thread(s) to reduce; with both, the translation is preferred.
    #[arg(long, value_enum, default_value = "both")]
    thread: ThreadArg,
    /// Search budget per thread, in systems.
    #[arg(long, default_value_t = reduction::DEFAULT_MAX_NODES)]
    max_nodes: usize,
}

#[derive(Subcommand)]
enum Cmd {
    /// Translation and co-translation of a sequent.
    Translate {
        sequent: String,
        /// List every translation variant.
        #[arg(long)]
        variants: bool,
        /// Emit a JSON document instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Reduce a sequent's threads, or a system `<STB, CVC | lhs <= rhs>`.
    Reduce {
        input: String,
        #[command(flatten)]
        common: Common,
    },
    /// Decide whether a sequent is Sahlqvist.
    Classify {
        sequent: String,
        #[command(flatten)]
        common: Common,
    },
    /// Compute the local first-order correspondent.
    Correspond {
        sequent: String,
        #[command(flatten)]
        common: Common,
        /// Simplify with the monotonicity axiom F3.
        #[arg(long)]
        assume_f3: bool,
    },
    /// Compare the correspondent with local validity on finite frames.
    Verify {
        sequent: String,
        #[command(flatten)]
        common: Common,
        /// Simplify with F3 and only use frames satisfying it.
        #[arg(long)]
        assume_f3: bool,
        /// Every frame with at most N1 + ND points (or exactly, with --samples).
        #[arg(long, num_args = 2, value_names = ["N1", "ND"])]
        enumerate: Option<Vec<usize>>,
        /// Draw K random frames of size N1 + ND instead of enumerating.
        #[arg(long, requires = "enumerate")]
        samples: Option<usize>,
        /// Seed for --samples.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Directory of frame files.
        #[arg(long, conflicts_with = "enumerate")]
        frames: Option<PathBuf>,
        /// Load frame files without checking F1 and F2.
        #[arg(long)]
        no_validate: bool,
    },
    /// Load a frame file and report which frame axioms it satisfies.
    CheckFrame {
        file: PathBuf,
        /// Exit 0 even when F1 or F2 fails.
        #[arg(long)]
        no_validate: bool,
        /// Emit a JSON document instead of text.
        #[arg(long)]
        json: bool,
    },
}

/// Failure with an exit code: 1 negative verdict, 2 resources, 3 usage.
struct Fail(u8, String);

type Res = Result<u8, Fail>;

fn usage(e: impl std::fmt::Display) -> Fail {
    Fail(3, format!("{e}\n{GRAMMAR_HINT}"))
}

fn from_reduction(e: ReductionError) -> Fail {
    Fail(2, e.to_string())
}

fn from_correspondence(e: CorrespondenceError) -> Fail {
    match e {
        CorrespondenceError::Reduction(r) => from_reduction(r),
        e => Fail(1, e.to_string()),
    }
}

fn sequent(src: &str) -> Result<Sequent, Fail> {
    parse_sequent(src).map_err(usage)
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("JSON values serialize"));
}

fn trace_json(t: &Trace) -> Value {
    let steps: Vec<Value> = t
        .steps
        .iter()
        .map(|s| json!({"rule": s.rule.name(), "site": s.site.to_string(), "system": s.after.to_string()}))
        .collect();
    json!({"start": t.start.to_string(), "steps": steps})
}

fn thread_json(r: &ThreadResult) -> Value {
    match &r.outcome {
        Outcome::Canonical { trace, .. } => json!({
            "thread": r.thread.name(),
            "start": r.start.to_string(),
            "reducible": true,
            "rules": trace.rules().iter().map(|r| r.name()).collect::<Vec<_>>(),
            "trace": trace_json(trace),
            "canonical": trace.last().to_string(),
        }),
        Outcome::NotReducible { explored } => json!({
            "thread": r.thread.name(),
            "start": r.start.to_string(),
            "reducible": false,
            "explored": explored,
        }),
    }
}

fn print_thread(r: &ThreadResult, trace: bool) {
    match &r.outcome {
        Outcome::Canonical { trace: t, .. } => {
            println!("{}: canonical {}", r.thread.name(), t.last());
            if trace {
                print!("{t}");
            }
        }
        Outcome::NotReducible { explored } => {
            println!("{}: not reducible ({explored} systems explored)", r.thread.name());
            if trace {
                println!("   {}", r.start);
            }
        }
    }
}

fn correspondent_json(c: &Correspondent) -> Value {
    let inst: Vec<Value> = c
        .instantiations
        .iter()
        .map(|(v, l)| json!({"variable": v.to_string(), "lambda": l.to_string()}))
        .collect();
    json!({
        "system": c.system.to_string(),
        "guarded": c.guarded.to_string(),
        "instantiations": inst,
        "correspondent": c.formula.to_string(),
        "assume_f3": c.assume_f3,
    })
}

fn print_correspondent(c: &Correspondent, trace: bool) {
    if trace {
        println!("guarded: {}", c.guarded);
        for (v, l) in &c.instantiations {
            println!("lambda {v} = {l}");
        }
    }
    println!("{}", c.formula);
}

fn translate_cmd(src: &str, all: bool, as_json: bool) -> Res {
    let s = sequent(src)?;
    let (t, c) = translate(&s);
    let list = |th| -> Vec<String> {
        if all {
            variants(&s, th).iter().map(ToString::to_string).collect()
        } else {
            vec![match th {
                Thread::Translation => t.to_string(),
                Thread::CoTranslation => c.to_string(),
            }]
        }
    };
    let (ts, cs) = (list(Thread::Translation), list(Thread::CoTranslation));
    if as_json {
        print_json(&json!({"input": s.to_string(), "translation": ts, "co-translation": cs}));
    } else {
        for v in &ts {
            println!("translation: {v}");
        }
        for v in &cs {
            println!("co-translation: {v}");
        }
    }
    Ok(0)
}

fn reduce_cmd(input: &str, c: &Common) -> Res {
    if input.trim_start().starts_with('<') {
        let sys = parse_system(input).map_err(usage)?;
        let out = reduction::reduce(&sys, c.max_nodes).map_err(from_reduction)?;
        let ok = matches!(out, Outcome::Canonical { .. });
        match &out {
            Outcome::Canonical { trace, .. } if c.json => print_json(&json!({
                "input": sys.to_string(), "reducible": true, "trace": trace_json(trace), "canonical": trace.last().to_string(),
            })),
            Outcome::Canonical { trace, .. } => {
                println!("canonical {}", trace.last());
                if c.trace {
                    print!("{trace}");
                }
            }
            Outcome::NotReducible { explored } if c.json => {
                print_json(&json!({"input": sys.to_string(), "reducible": false, "explored": explored}))
            }
            Outcome::NotReducible { explored } => println!("not reducible ({explored} systems explored)"),
        }
        return Ok(if ok { 0 } else { 1 });
    }
    let s = sequent(input)?;
    let results = c
        .thread
        .threads()
        .into_iter()
        .map(|t| reduction::reduce_thread(&s, t, c.max_nodes))
        .collect::<Result<Vec<_>, _>>()
        .map_err(from_reduction)?;
    let ok = results.iter().any(|r| r.canonical().is_some());
    if c.json {
        print_json(&json!({"input": s.to_string(), "threads": results.iter().map(thread_json).collect::<Vec<_>>()}));
    } else {
        for r in &results {
            print_thread(r, c.trace);
        }
    }
    Ok(if ok { 0 } else { 1 })
}

fn verdict(cls: &Classification) -> &'static str {
    if cls.is_sahlqvist() {
        "sahlqvist"
    } else {
        "not-sahlqvist"
    }
}

fn classify_cmd(src: &str, c: &Common) -> Res {
    let s = sequent(src)?;
    let cls = reduction::classify(&s, c.max_nodes).map_err(from_reduction)?;
    if c.json {
        print_json(&json!({
            "input": s.to_string(),
            "verdict": verdict(&cls),
            "threads": cls.threads.iter().map(thread_json).collect::<Vec<_>>(),
        }));
    } else {
        let via: Vec<&str> = cls
            .threads
            .iter()
            .filter(|t| t.canonical().is_some())
            .map(|t| t.thread.name())
            .collect();
        if via.is_empty() {
            println!("not Sahlqvist");
        } else {
            println!("Sahlqvist via {}", via.join(" and "));
        }
        if c.trace {
            for r in &cls.threads {
                print_thread(r, true);
            }
        }
    }
    Ok(if cls.is_sahlqvist() { 0 } else { 1 })
}

/// Classifies and corresponds; prints the not-Sahlqvist verdict itself.
fn correspondent_for(s: &Sequent, c: &Common, f3: bool) -> Result<Option<(Classification, Thread, Correspondent)>, Fail> {
    let out = correspond(s, c.thread.choice(), Options { assume_f3: f3 }, c.max_nodes).map_err(from_correspondence)?;
    match out.chosen {
        Some((t, corr)) => Ok(Some((out.classification, t, corr))),
        None => {
            if c.json {
                print_json(&json!({
                    "input": s.to_string(),
                    "verdict": "not-sahlqvist",
                    "threads": out.classification.threads.iter().map(thread_json).collect::<Vec<_>>(),
                }));
            } else {
                println!("not Sahlqvist");
                if c.trace {
                    for r in &out.classification.threads {
                        print_thread(r, true);
                    }
                }
            }
            Ok(None)
        }
    }
}

fn pipeline_json(s: &Sequent, cls: &Classification, t: Thread, corr: &Correspondent) -> Value {
    json!({
        "input": s.to_string(),
        "verdict": verdict(cls),
        "threads": cls.threads.iter().map(thread_json).collect::<Vec<_>>(),
        "chosen": t.name(),
        "correspondence": correspondent_json(corr),
    })
}

fn correspond_cmd(src: &str, c: &Common, f3: bool) -> Res {
    let s = sequent(src)?;
    let Some((cls, t, corr)) = correspondent_for(&s, c, f3)? else {
        return Ok(1);
    };
    if c.json {
        print_json(&pipeline_json(&s, &cls, t, &corr));
    } else {
        if c.trace {
            println!("thread: {}", t.name());
            if let Some(tr) = cls.thread(t).and_then(ThreadResult::trace) {
                print!("{tr}");
            }
        }
        print_correspondent(&corr, c.trace);
    }
    Ok(0)
}

fn load_frames(dir: &Path, validate: bool) -> Result<Vec<(String, Frame)>, Fail> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| usage(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let src = std::fs::read_to_string(&p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
            let f = parse_frame(&src, validate).map_err(|e| usage(format!("{}: {e}", p.display())))?;
            Ok((p.display().to_string(), f))
        })
        .collect()
}

fn witness_json(v: &Verification) -> Value {
    match &v.witness {
        None => Value::Null,
        Some(w) => json!({
            "frame": write_frame(&w.frame),
            "point": w.point,
            "sequent_holds": w.sequent_holds,
            "correspondent_holds": !w.sequent_holds,
        }),
    }
}

fn print_verification(v: &Verification, at: Sort) {
    match &v.witness {
        None => println!("agree on {} frames, {} points", v.frames, v.points),
        Some(w) => {
            let (s, c) = if w.sequent_holds { ("holds", "fails") } else { ("fails", "holds") };
            println!("disagree at point {} of sort {at}: the sequent {s}, the correspondent {c}", w.point);
            print!("{}", write_frame(&w.frame));
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn verify_cmd(
    src: &str,
    c: &Common,
    f3: bool,
    enumerate: Option<&[usize]>,
    samples: Option<usize>,
    seed: u64,
    frames: Option<&Path>,
    validate: bool,
) -> Res {
    let s = sequent(src)?;
    let Some((cls, t, corr)) = correspondent_for(&s, c, f3)? else {
        return Ok(1);
    };
    let at = corr.anchor.sort;
    let compiled = Compiled::new(&corr.formula, std::slice::from_ref(&corr.anchor), &[]).map_err(|e| Fail(2, e.to_string()))?;
    let (v, per_frame) = match (enumerate, frames) {
        (_, Some(dir)) => {
            let loaded = load_frames(dir, validate)?;
            let per: Vec<Value> = loaded
                .iter()
                .map(|(name, f)| {
                    let v = verify_frames(&s, at, &compiled, std::slice::from_ref(f), f3);
                    let verdict = if v.frames == 0 {
                        "skipped"
                    } else if v.agrees() {
                        "agree"
                    } else {
                        "disagree"
                    };
                    json!({"frame": name, "verdict": verdict, "witness": witness_json(&v)})
                })
                .collect();
            let fs: Vec<Frame> = loaded.into_iter().map(|(_, f)| f).collect();
            (verify_frames(&s, at, &compiled, &fs, f3), Some(per))
        }
        (Some([n1, nd]), None) => match samples {
            Some(k) => {
                let fs = sample(*n1, *nd, uses_sequent(&s), k, seed);
                (verify_frames(&s, at, &compiled, &fs, f3), None)
            }
            None => (verify_enumerated(&s, at, &compiled, *n1, *nd, f3), None),
        },
        _ => return Err(usage("verify needs --enumerate N1 ND or --frames DIR")),
    };
    if c.json {
        let mut doc = pipeline_json(&s, &cls, t, &corr);
        doc["verification"] = json!({
            "verdict": if v.agrees() { "agree" } else { "disagree" },
            "frames": v.frames,
            "points": v.points,
            "witness": witness_json(&v),
        });
        if let Some(per) = per_frame {
            doc["verification"]["per_frame"] = Value::Array(per);
        }
        print_json(&doc);
    } else {
        if c.trace {
            println!("thread: {}", t.name());
        }
        print_correspondent(&corr, c.trace);
        print_verification(&v, at);
    }
    Ok(if v.agrees() { 0 } else { 1 })
}

fn check_frame_cmd(path: &Path, validate: bool, as_json: bool) -> Res {
    let src = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let f = parse_frame(&src, false).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let f1 = f.separated().err().map(|e| e.to_string());
    let f2 = f.smooth().err().map(|e| e.to_string());
    let ok = !validate || (f1.is_none() && f2.is_none());
    let errors: Vec<String> = [f1.clone(), f2.clone()].into_iter().flatten().collect();
    if as_json {
        print_json(&json!({
            "file": path.display().to_string(),
            "z1": f.n1,
            "zd": f.nd,
            "F0": f.quasi_serial(),
            "F1": f1.is_none(),
            "F2": f2.is_none(),
            "F3": f.monotone(),
            "stable_sets": f.stable_sets(Sort::One).len(),
            "costable_sets": f.stable_sets(Sort::Dual).len(),
            "errors": errors,
        }));
    } else {
        println!("{}: |Z1| = {}, |Zd| = {}", path.display(), f.n1, f.nd);
        let yes = |b: bool| if b { "yes" } else { "no" };
        println!("F0 {}  F1 {}  F2 {}  F3 {}", yes(f.quasi_serial()), yes(f1.is_none()), yes(f2.is_none()), yes(f.monotone()));
        println!(
            "{} stable sets, {} co-stable sets",
            f.stable_sets(Sort::One).len(),
            f.stable_sets(Sort::Dual).len()
        );
        for e in &errors {
            println!("{e}");
        }
    }
    Ok(if ok { 0 } else { 1 })
}

fn corpus_cmd() -> Res {
    let mut failed = 0;
    let examples = corpus::builtin();
    for ex in &examples {
        let r = corpus::run(ex, reduction::DEFAULT_MAX_NODES).map_err(|e| Fail(2, e.to_string()))?;
        let mark = if r.passed() { "PASS" } else { "FAIL" };
        println!("{mark}  {:<32} {}", r.name, ex.sequent);
        for c in r.checks.iter().filter(|c| !c.ok) {
            failed += 1;
            println!("      {}: expected {}", c.what, c.expected);
            println!("      {}  found    {}", " ".repeat(c.what.len()), c.found);
        }
    }
    println!("{} examples, {failed} failed checks", examples.len());
    Ok(if failed == 0 { 0 } else { 1 })
}

fn run(cli: Cli) -> Res {
    if cli.corpus {
        return corpus_cmd();
    }
    match cli.command {
        None => Err(usage("no subcommand given (try --help)")),
        Some(Cmd::Translate { sequent, variants, json }) => translate_cmd(&sequent, variants, json),
        Some(Cmd::Reduce { input, common }) => reduce_cmd(&input, &common),
        Some(Cmd::Classify { sequent, common }) => classify_cmd(&sequent, &common),
        Some(Cmd::Correspond {
            sequent,
            common,
            assume_f3,
        }) => correspond_cmd(&sequent, &common, assume_f3),
        Some(Cmd::Verify {
            sequent,
            common,
            assume_f3,
            enumerate,
            samples,
            seed,
            frames,
            no_validate,
        }) => verify_cmd(
            &sequent,
            &common,
            assume_f3,
            enumerate.as_deref(),
            samples,
            seed,
            frames.as_deref(),
            !no_validate,
        ),
        Some(Cmd::CheckFrame { file, no_validate, json }) => check_frame_cmd(&file, !no_validate, json),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            if code == 3 {
                eprintln!("{GRAMMAR_HINT}");
            }
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
