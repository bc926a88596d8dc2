//! Finite-frame oracles: local validity of DfML sequents, agreement of a
//! first-order correspondent with it, and equivalence of inequality
//! systems in the sense used by the reduction rules.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicUsize, Ordering};

use super::enumerate::{search_up_to, Uses};
use super::fo_eval::Compiled;
use super::frame::{full, Frame, Mask};
use super::model::{all_subsets, cosat, eval_dfml, eval_sf, for_each_valuation};
use crate::reduction::System;
use crate::syntax::sorted::{Bin, Un, View};
use crate::syntax::{Dfml, SVar, Sequent, Sf, Sort};

/// Relations a DfML formula is interpreted by.
pub fn uses_dfml(phi: &Dfml) -> Uses {
    let here = match phi {
        Dfml::Box(_) => Uses {
            boxr: true,
            ..Uses::default()
        },
        Dfml::Dia(_) => Uses {
            dia: true,
            ..Uses::default()
        },
        Dfml::Neg(_) => Uses {
            neg: true,
            ..Uses::default()
        },
        Dfml::Imp(..) => Uses {
            t: true,
            ..Uses::default()
        },
        _ => Uses::default(),
    };
    match phi {
        Dfml::Var(_) | Dfml::Top | Dfml::Bot => here,
        Dfml::Box(a) | Dfml::Dia(a) | Dfml::Neg(a) => here.union(uses_dfml(a)),
        Dfml::And(a, b) | Dfml::Or(a, b) | Dfml::Imp(a, b) => here.union(uses_dfml(a)).union(uses_dfml(b)),
    }
}

pub fn uses_sequent(s: &Sequent) -> Uses {
    uses_dfml(&s.lhs).union(uses_dfml(&s.rhs))
}

/// Relations a sorted formula is interpreted by.
pub fn uses_sf(a: &Sf) -> Uses {
    let mut u = Uses::default();
    match a.view() {
        View::Un(Un::DiaV | Un::Box1 | Un::BoxV, _) => u.dia = true,
        View::Un(Un::DiaM | Un::BoxD | Un::BoxM, _) => u.boxr = true,
        View::Un(Un::TDown | Un::BTDown, _) => u.neg = true,
        View::Bin(Bin::Odot | Bin::RSpoon | Bin::TRight, _, _) => u.t = true,
        _ => {}
    }
    a.children().into_iter().fold(u, |acc, c| acc.union(uses_sf(c)))
}

pub fn uses_system(s: &System) -> Uses {
    uses_sf(&s.main.lhs).union(uses_sf(&s.main.rhs))
}

fn dfml_vars(s: &Sequent) -> Vec<u32> {
    s.vars().into_iter().collect()
}

/// Points of sort `at` where the sequent is locally valid. At sort 1 this
/// is satisfaction of the antecedent implying that of the consequent; at
/// sort ∂ it is co-satisfaction of the consequent implying that of the
/// antecedent. Variables range over Galois stable sets.
pub fn valid_points(f: &Frame, s: &Sequent, at: Sort) -> Mask {
    let vars = dfml_vars(s);
    let width = vars.last().map_or(0, |v| *v as usize + 1);
    let dom = f.stable_sets(Sort::One).to_vec();
    let doms: Vec<(u32, Vec<Mask>)> = vars.iter().map(|&v| (v, dom.clone())).collect();
    let all = full(f.size(at));
    let mut bad = 0;
    for_each_valuation(width, &doms, |val| {
        bad |= match at {
            Sort::One => eval_dfml(f, &s.lhs, val) & !eval_dfml(f, &s.rhs, val),
            Sort::Dual => cosat(f, &s.rhs, val) & !cosat(f, &s.lhs, val),
        };
        bad != all
    });
    all & !bad
}

pub fn local_validity(f: &Frame, s: &Sequent, at: Sort, w: usize) -> bool {
    valid_points(f, s, at) >> w & 1 == 1
}

/// First anchor point where the sequent's local validity and the compiled
/// correspondent (one free variable, the anchor) disagree.
pub fn disagreement(f: &Frame, s: &Sequent, at: Sort, corr: &Compiled) -> Option<usize> {
    let diff = valid_points(f, s, at) ^ corr.eval_points(f);
    (diff != 0).then(|| diff.trailing_zeros() as usize)
}

fn satisfies_constraints(f: &Frame, sys: &System, val: &[Mask]) -> bool {
    sys.stb.iter().all(|v| f.is_galois(v.sort, val[v.idx as usize]))
        && sys
            .cvc
            .iter()
            .all(|(q, p)| val[q.idx as usize] == f.polar(p.sort, val[p.idx as usize]))
}

fn main_holds(f: &Frame, sys: &System, val: &[Mask]) -> bool {
    eval_sf(f, &sys.main.lhs, val) & !eval_sf(f, &sys.main.rhs, val) == 0
}

fn system_domains(f: &Frame, systems: &[&System]) -> (usize, Vec<(u32, Vec<Mask>)>) {
    let vars: BTreeSet<SVar> = systems.iter().flat_map(|s| s.vars()).collect();
    let width = vars.iter().map(|v| v.idx as usize + 1).max().unwrap_or(0);
    let doms = vars
        .iter()
        .map(|v| {
            let stable = systems.iter().any(|s| s.stb.contains(v));
            let dom = if stable {
                f.stable_sets(v.sort).to_vec()
            } else {
                all_subsets(f, v.sort)
            };
            (v.idx, dom)
        })
        .collect();
    (width, doms)
}

/// A valuation satisfying the constraints of both systems under which
/// exactly one main inequality holds, if any.
pub fn system_counterexample(f: &Frame, a: &System, b: &System) -> Option<Vec<Mask>> {
    let (width, doms) = system_domains(f, &[a, b]);
    let mut found = None;
    for_each_valuation(width, &doms, |val| {
        if !satisfies_constraints(f, a, val) || !satisfies_constraints(f, b, val) {
            return true;
        }
        if main_holds(f, a, val) != main_holds(f, b, val) {
            found = Some(val.to_vec());
            return false;
        }
        true
    });
    found
}

/// Points of the main sort where the system is locally valid: for every
/// valuation meeting its constraints, membership in the left side implies
/// membership in the right side.
pub fn system_valid_points(f: &Frame, sys: &System) -> Mask {
    let (width, doms) = system_domains(f, &[sys]);
    let all = full(f.size(sys.main.sort()));
    let mut bad = 0;
    for_each_valuation(width, &doms, |val| {
        if satisfies_constraints(f, sys, val) {
            bad |= eval_sf(f, &sys.main.lhs, val) & !eval_sf(f, &sys.main.rhs, val);
        }
        bad != all
    });
    all & !bad
}

/// A point where a sequent and its correspondent disagree.
#[derive(Clone, Debug)]
pub struct Witness {
    pub frame: Frame,
    pub point: usize,
    /// Local validity of the sequent at `point`; the correspondent says
    /// the opposite.
    pub sequent_holds: bool,
}

#[derive(Clone, Debug)]
pub struct Verification {
    /// Frames compared (all of them when there is no witness).
    pub frames: usize,
    pub points: usize,
    pub witness: Option<Witness>,
}

impl Verification {
    pub fn agrees(&self) -> bool {
        self.witness.is_none()
    }
}

fn compare(f: &Frame, s: &Sequent, at: Sort, corr: &Compiled) -> Option<Witness> {
    let seq = valid_points(f, s, at);
    let diff = seq ^ corr.eval_points(f);
    (diff != 0).then(|| {
        let point = diff.trailing_zeros() as usize;
        Witness {
            frame: f.clone(),
            point,
            sequent_holds: seq >> point & 1 == 1,
        }
    })
}

/// Compares local validity of `s` with `corr` at every point of sort `at`
/// of every enumerated frame up to the given sizes, skipping frames that
/// violate F3 when `f3` is set. Stops at the first disagreement.
pub fn verify_enumerated(s: &Sequent, at: Sort, corr: &Compiled, max1: usize, maxd: usize, f3: bool) -> Verification {
    let frames = AtomicUsize::new(0);
    let points = AtomicUsize::new(0);
    let witness = search_up_to(max1, maxd, uses_sequent(s), |f| {
        if f3 && !f.monotone() {
            return None;
        }
        frames.fetch_add(1, Ordering::Relaxed);
        points.fetch_add(f.size(at), Ordering::Relaxed);
        compare(f, s, at, corr)
    });
    Verification {
        frames: frames.into_inner(),
        points: points.into_inner(),
        witness,
    }
}

/// [`verify_enumerated`] over a given list of frames.
pub fn verify_frames(s: &Sequent, at: Sort, corr: &Compiled, frames: &[Frame], f3: bool) -> Verification {
    let mut v = Verification {
        frames: 0,
        points: 0,
        witness: None,
    };
    for f in frames {
        if f3 && !f.monotone() {
            continue;
        }
        v.frames += 1;
        v.points += f.size(at);
        v.witness = compare(f, s, at, corr);
        if v.witness.is_some() {
            break;
        }
    }
    v
}
