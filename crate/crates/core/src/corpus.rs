//! Golden examples: sequents with their recorded classification, reduction
//! trace and correspondent.

use std::collections::BTreeSet;

use serde::Deserialize;

use crate::correspondence::{correspond_system, CorrespondenceError, Options};
use crate::reduction::{classify, parse_system, reduce, Outcome, ReductionError, System, Trace};
use crate::syntax::{dfml, fo, sorted};
use crate::translation::{variants, Thread};

/// The corpus shipped with the crate.
pub const BUILTIN: &str = include_str!("../corpus.toml");

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Example {
    pub name: String,
    pub sequent: String,
    /// Threads that reach canonical form.
    pub reducible: Vec<String>,
    /// Thread whose derivation is recorded. Absent for non-Sahlqvist input.
    pub thread: Option<String>,
    /// Translation variant the recorded derivation starts from, when it is
    /// not the one the search settles on.
    pub start: Option<String>,
    #[serde(default)]
    pub rules: Vec<String>,
    pub canonical: Option<String>,
    pub correspondent: Option<String>,
    #[serde(default)]
    pub assume_f3: bool,
}

#[derive(Deserialize)]
struct File {
    example: Vec<Example>,
}

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error(transparent)]
    Toml(#[from] toml::de::Error),
    #[error("{name}: {msg}")]
    Field { name: String, msg: String },
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Correspondence(#[from] CorrespondenceError),
}

pub fn parse(src: &str) -> Result<Vec<Example>, CorpusError> {
    Ok(toml::from_str::<File>(src)?.example)
}

pub fn builtin() -> Vec<Example> {
    parse(BUILTIN).expect("built-in corpus parses")
}

#[derive(Clone, Debug)]
pub struct Check {
    pub what: &'static str,
    pub ok: bool,
    pub expected: String,
    pub found: String,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub name: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }
}

fn field<T, E: std::fmt::Display>(name: &str, r: Result<T, E>) -> Result<T, CorpusError> {
    r.map_err(|e| CorpusError::Field {
        name: name.to_string(),
        msg: e.to_string(),
    })
}

fn rule_names(t: &Trace) -> Vec<String> {
    t.rules().iter().map(|r| r.name().to_string()).collect()
}

/// Replays one example and compares every recorded field.
pub fn run(ex: &Example, max_nodes: usize) -> Result<Report, CorpusError> {
    let name = ex.name.as_str();
    let seq = field(name, dfml::parse_sequent(&ex.sequent))?;
    let cls = classify(&seq, max_nodes)?;
    let mut checks = Vec::new();

    let found: BTreeSet<&str> = cls
        .threads
        .iter()
        .filter(|t| t.canonical().is_some())
        .map(|t| t.thread.name())
        .collect();
    let expected: BTreeSet<&str> = ex
        .reducible
        .iter()
        .map(|t| field(name, t.parse::<Thread>()).map(Thread::name))
        .collect::<Result<_, _>>()?;
    checks.push(Check {
        what: "reducible",
        ok: found == expected,
        expected: format!("{expected:?}"),
        found: format!("{found:?}"),
    });

    let Some(thread) = &ex.thread else {
        return Ok(Report {
            name: ex.name.clone(),
            checks,
        });
    };
    let thread: Thread = field(name, thread.parse())?;
    let trace = match &ex.start {
        Some(start) => {
            let start = field(name, sorted::parse_sequent(start))?;
            let listed = variants(&seq, thread).contains(&start);
            checks.push(Check {
                what: "start",
                ok: listed,
                expected: format!("{start} among the {} variants", thread.name()),
                found: if listed { "listed" } else { "not listed" }.into(),
            });
            match reduce(&System::from_sequent(start), max_nodes)? {
                Outcome::Canonical { trace, .. } => Some(trace),
                Outcome::NotReducible { .. } => None,
            }
        }
        None => cls.thread(thread).and_then(|t| t.trace()).cloned(),
    };
    let Some(trace) = trace else {
        checks.push(Check {
            what: "canonical",
            ok: false,
            expected: ex.canonical.clone().unwrap_or_default(),
            found: "not reducible".into(),
        });
        return Ok(Report {
            name: ex.name.clone(),
            checks,
        });
    };

    let rules = rule_names(&trace);
    checks.push(Check {
        what: "rules",
        ok: rules == ex.rules,
        expected: ex.rules.join(" "),
        found: rules.join(" "),
    });
    let last = trace.last();
    if let Some(c) = &ex.canonical {
        let want = field(name, parse_system(c))?;
        checks.push(Check {
            what: "canonical",
            ok: want.equivalent_modulo_renaming(last),
            expected: want.to_string(),
            found: last.to_string(),
        });
    }
    if let Some(c) = &ex.correspondent {
        let want = field(name, fo::parse_formula(c))?;
        let got = correspond_system(last, Options { assume_f3: ex.assume_f3 })?.formula;
        checks.push(Check {
            what: "correspondent",
            ok: want.alpha_eq(&got),
            expected: want.to_string(),
            found: got.to_string(),
        });
    }
    Ok(Report {
        name: ex.name.clone(),
        checks,
    })
}
