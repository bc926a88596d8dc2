//! Inequality systems, the reduction rules, and the search for a canonical
//! (simple Sahlqvist) system.

pub mod canonical;
pub mod rules;
pub mod search;
pub mod system;

pub use canonical::{boxed_atom, is_canonical, is_simple_sahlqvist};
pub use rules::{apply_rule, successors, Rule, Side, Site};
pub use search::{reduce, reduce_many, Outcome, ReductionError, Step, Trace, DEFAULT_MAX_NODES};
pub use system::{parse_system, System};

use crate::syntax::{Sequent, SortedSequent};
use crate::translation::{variants, Thread};

/// Result of reducing one thread of a sequent.
#[derive(Clone, Debug)]
pub struct ThreadResult {
    pub thread: Thread,
    /// The translation variant the successful derivation starts from.
    pub start: SortedSequent,
    pub outcome: Outcome,
}

impl ThreadResult {
    pub fn canonical(&self) -> Option<&System> {
        match &self.outcome {
            Outcome::Canonical { trace, .. } => Some(trace.last()),
            Outcome::NotReducible { .. } => None,
        }
    }

    pub fn trace(&self) -> Option<&Trace> {
        match &self.outcome {
            Outcome::Canonical { trace, .. } => Some(trace),
            Outcome::NotReducible { .. } => None,
        }
    }
}

/// Reduces one thread, searching all of its translation variants at once.
pub fn reduce_thread(s: &Sequent, t: Thread, max_nodes: usize) -> Result<ThreadResult, ReductionError> {
    let vs = variants(s, t);
    let starts: Vec<System> = vs.iter().cloned().map(System::from_sequent).collect();
    let outcome = reduce_many(&starts, max_nodes)?;
    let start = match &outcome {
        Outcome::Canonical { root, .. } => vs[*root].clone(),
        Outcome::NotReducible { .. } => vs[0].clone(),
    };
    Ok(ThreadResult { thread: t, start, outcome })
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub threads: Vec<ThreadResult>,
}

impl Classification {
    pub fn is_sahlqvist(&self) -> bool {
        self.threads.iter().any(|t| t.canonical().is_some())
    }

    pub fn thread(&self, t: Thread) -> Option<&ThreadResult> {
        self.threads.iter().find(|r| r.thread == t)
    }
}

/// Reduces both threads. A sequent is Sahlqvist when either reaches a
/// canonical system.
pub fn classify(s: &Sequent, max_nodes: usize) -> Result<Classification, ReductionError> {
    let threads = [Thread::Translation, Thread::CoTranslation]
        .into_iter()
        .map(|t| reduce_thread(s, t, max_nodes))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Classification { threads })
}
