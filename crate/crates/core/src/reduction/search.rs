use std::collections::{HashSet, VecDeque};
use std::fmt;

use super::canonical::is_canonical;
use super::rules::{apply_rule, sites, successors, Rule, Site};
use super::system::System;

pub const DEFAULT_MAX_NODES: usize = 100_000;

/// Cap on steps taken by the finishing pass.
const MAX_FINISH_STEPS: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReductionError {
    #[error("search budget exhausted after {0} systems")]
    Budget(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub rule: Rule,
    pub site: Site,
    pub after: System,
}

/// A derivation from `start`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub start: System,
    pub steps: Vec<Step>,
}

impl Trace {
    pub fn last(&self) -> &System {
        self.steps.last().map_or(&self.start, |s| &s.after)
    }

    pub fn rules(&self) -> Vec<Rule> {
        self.steps.iter().map(|s| s.rule).collect()
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "   {}", self.start)?;
        for s in &self.steps {
            writeln!(f, "{:<6} [{}] {}", s.rule.name(), s.site, s.after)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// Index of the start system the trace begins from, and the trace.
    Canonical { root: usize, trace: Trace },
    NotReducible { explored: usize },
}

struct Node {
    sys: System,
    parent: Option<usize>,
    via: Option<(Rule, Site)>,
    root: usize,
}

/// Breadth-first search from several start systems (earlier ones win ties)
/// for the first canonical system, followed by the finishing pass.
pub fn reduce_many(starts: &[System], max_nodes: usize) -> Result<Outcome, ReductionError> {
    let mut nodes: Vec<Node> = Vec::new();
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    for (root, s) in starts.iter().enumerate() {
        if seen.insert(s.key()) {
            nodes.push(Node {
                sys: s.clone(),
                parent: None,
                via: None,
                root,
            });
            queue.push_back(nodes.len() - 1);
        }
    }
    while let Some(k) = queue.pop_front() {
        if is_canonical(&nodes[k].sys) {
            let root = nodes[k].root;
            let mut steps = Vec::new();
            let mut cur = k;
            while let (Some(p), Some((rule, site))) = (nodes[cur].parent, nodes[cur].via.clone()) {
                steps.push(Step {
                    rule,
                    site,
                    after: nodes[cur].sys.clone(),
                });
                cur = p;
            }
            steps.reverse();
            let mut trace = Trace {
                start: nodes[cur].sys.clone(),
                steps,
            };
            finish(&mut trace);
            return Ok(Outcome::Canonical { root, trace });
        }
        for (rule, site, next) in successors(&nodes[k].sys) {
            if !seen.insert(next.key()) {
                continue;
            }
            if nodes.len() >= max_nodes {
                return Err(ReductionError::Budget(nodes.len()));
            }
            let root = nodes[k].root;
            nodes.push(Node {
                sys: next,
                parent: Some(k),
                via: Some((rule, site)),
                root,
            });
            queue.push_back(nodes.len() - 1);
        }
    }
    Ok(Outcome::NotReducible { explored: nodes.len() })
}

pub fn reduce(start: &System, max_nodes: usize) -> Result<Outcome, ReductionError> {
    reduce_many(std::slice::from_ref(start), max_nodes)
}

const FINISH_RULES: [Rule; 6] = [Rule::R1, Rule::R5_1a, Rule::R5_1b, Rule::R5_3a, Rule::R5_3b, Rule::R5_4];

/// Drops unused constraints and turns primed diamonds into boxes while the
/// system stays canonical.
fn finish(trace: &mut Trace) {
    for _ in 0..MAX_FINISH_STEPS {
        let cur = trace.last().clone();
        let step = FINISH_RULES.iter().find_map(|&rule| {
            sites(&cur, rule).into_iter().find_map(|site| {
                let next = apply_rule(&cur, rule, &site)?;
                is_canonical(&next).then_some(Step {
                    rule,
                    site,
                    after: next,
                })
            })
        });
        match step {
            Some(s) => trace.steps.push(s),
            None => return,
        }
    }
}
