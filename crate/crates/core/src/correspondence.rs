//! First-order local correspondents of systems in canonical Sahlqvist form.
//!
//! The antecedent of the main inequality is unfolded into an existential
//! prefix, relational atoms and (boxed) atomic occurrences of variables.
//! Every variable is then replaced by its minimal instantiation in the
//! standard translation of the consequent.

use std::collections::BTreeMap;

use crate::reduction::{boxed_atom, classify, is_canonical, Classification, ReductionError, System, ThreadResult};
use crate::syntax::fo::{Fo, Fresh, Ivar, Lambda, Letter, Rel};
use crate::syntax::sorted::{Bin, Un, View};
use crate::syntax::{anchor, SVar, Sequent, Sf, Sort};
use crate::translation::{standard_translation, Thread};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Options {
    /// Simplify with the monotonicity axiom F3.
    pub assume_f3: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CorrespondenceError {
    #[error("system is not in canonical Sahlqvist form: {0}")]
    NotCanonical(String),
    #[error("not Sahlqvist: no requested thread reduces to canonical form")]
    NotSahlqvist,
    #[error(transparent)]
    Reduction(#[from] ReductionError),
}

/// Which thread(s) may supply the correspondent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThreadChoice {
    Translation,
    CoTranslation,
    /// The translation if it reduces, otherwise the co-translation.
    Both,
}

impl ThreadChoice {
    fn threads(self) -> &'static [Thread] {
        match self {
            ThreadChoice::Translation => &[Thread::Translation],
            ThreadChoice::CoTranslation => &[Thread::CoTranslation],
            ThreadChoice::Both => &[Thread::Translation, Thread::CoTranslation],
        }
    }
}

#[derive(Clone, Debug)]
pub struct Correspondent {
    pub system: System,
    /// Free variable of `formula` and `guarded`.
    pub anchor: Ivar,
    /// Guarded second-order translation, local at the anchor.
    pub guarded: Fo,
    pub instantiations: Vec<(SVar, Lambda)>,
    pub formula: Fo,
    pub assume_f3: bool,
}

#[derive(Clone, Debug)]
enum Source {
    Point(Ivar),
    Boxed(Ivar, Vec<Letter>),
}

#[derive(Default)]
struct Decomp {
    prefix: Vec<Ivar>,
    rel: Vec<Fo>,
    sources: BTreeMap<SVar, Vec<Source>>,
    bottom: bool,
}

fn decompose(f: &Sf, at: &Ivar, fresh: &mut Fresh, d: &mut Decomp) {
    if let Some((word, v)) = boxed_atom(f) {
        let src = if word.is_empty() {
            Source::Point(at.clone())
        } else {
            Source::Boxed(at.clone(), word)
        };
        d.sources.entry(v).or_default().push(src);
        return;
    }
    match f.view() {
        View::Top(_) => {}
        View::Bot(_) => d.bottom = true,
        View::Bin(Bin::Cap, a, b) => {
            decompose(a, at, fresh, d);
            decompose(b, at, fresh, d);
        }
        View::Un(op @ (Un::DiaV | Un::DiaM | Un::TDown), a) => {
            let w = fresh.var(a.sort());
            let rel = match op {
                Un::DiaV => Rel::Dia,
                Un::DiaM => Rel::Box,
                _ => Rel::Neg,
            };
            d.rel.push(Fo::rel2(rel, at, &w));
            d.prefix.push(w.clone());
            decompose(a, &w, fresh, d);
        }
        View::Bin(op @ (Bin::Odot | Bin::TRight), a, b) => {
            let (l, r) = (fresh.var(a.sort()), fresh.var(b.sort()));
            let rel = if op == Bin::Odot { Rel::R111 } else { Rel::T };
            d.rel.push(Fo::atom(rel, &[at, &l, &r]));
            d.prefix.push(l.clone());
            d.prefix.push(r.clone());
            decompose(a, &l, fresh, d);
            decompose(b, &r, fresh, d);
        }
        _ => unreachable!("antecedent checked canonical"),
    }
}

fn incidence(a: &Ivar, b: &Ivar) -> Fo {
    match a.sort {
        Sort::One => Fo::rel2(Rel::I, a, b),
        Sort::Dual => Fo::rel2(Rel::I, b, a),
    }
}

/// `s ∈ U''` for the set `U = {u | member(u)}` of the sort of `s`.
fn closure_of(s: &Ivar, fresh: &mut Fresh, member: impl FnOnce(&Ivar) -> Fo) -> Fo {
    let k = fresh.var(s.sort.flip());
    let u = fresh.var(s.sort);
    let inner = Fo::exists(u.clone(), Fo::and(incidence(&u, &k), member(&u)));
    Fo::forall(k.clone(), Fo::imp(incidence(s, &k), inner))
}

fn lambda_param(s: Sort) -> Ivar {
    Ivar::new(
        match s {
            Sort::One => "s",
            Sort::Dual => "t",
        },
        s,
    )
}

fn member_of(src: &Source, s: &Ivar) -> Fo {
    match src {
        Source::Point(t) => Fo::Eq(s.clone(), t.clone()),
        Source::Boxed(t, w) => Fo::rel2(Rel::word(w), t, s),
    }
}

/// Minimal instantiation of `v` given its occurrences in the antecedent.
fn minimal(v: SVar, sources: &[Source], constrained: bool, fresh: &mut Fresh) -> Lambda {
    let s = lambda_param(v.sort);
    let body = if !constrained {
        Fo::disj(sources.iter().map(|src| member_of(src, &s)))
    } else {
        match sources {
            [Source::Point(t)] => Fo::Leq(t.clone(), s.clone()),
            [Source::Boxed(t, w)] if w.len() == 1 => Fo::rel2(Rel::word(w), t, &s),
            _ => {
                let srcs = sources.to_vec();
                closure_of(&s, fresh, |u| Fo::disj(srcs.iter().map(|src| member_of(src, u))))
            }
        }
    };
    Lambda::new(s, body)
}

/// `∀u (t(P)(u) → P(u))`: P denotes a Galois set of its sort.
fn t_invariance(p: SVar, fresh: &mut Fresh) -> Fo {
    let u = fresh.var(p.sort);
    let t = closure_of(&u, fresh, |w| Fo::Pred(p, w.clone()));
    Fo::forall(u.clone(), Fo::imp(t, Fo::Pred(p, u)))
}

/// `∀P̄ (t-INV ∧ ST(lhs) → ST(rhs))` with the anchor left free.
pub fn guarded_translation(sys: &System) -> Fo {
    let at = anchor(sys.main.sort());
    let mut fresh = Fresh::new();
    let vars = sys.main.var_set();
    let mut parts: Vec<Fo> = vars
        .iter()
        .filter(|v| sys.constrained(**v))
        .map(|v| t_invariance(*v, &mut fresh))
        .collect();
    parts.push(standard_translation(&sys.main.lhs, &at, &mut fresh));
    let body = Fo::imp(Fo::conj(parts), standard_translation(&sys.main.rhs, &at, &mut fresh));
    vars.iter().rev().fold(body, |acc, v| Fo::forall2(*v, acc))
}

pub fn correspond_system(sys: &System, opts: Options) -> Result<Correspondent, CorrespondenceError> {
    if !is_canonical(sys) {
        return Err(CorrespondenceError::NotCanonical(sys.to_string()));
    }
    let at = anchor(sys.main.sort());
    let guarded = guarded_translation(sys);
    let mut fresh = Fresh::new();
    let mut d = Decomp::default();
    decompose(&sys.main.lhs, &at, &mut fresh, &mut d);
    let done = |instantiations, formula| Correspondent {
        system: sys.clone(),
        anchor: at.clone(),
        guarded: guarded.clone(),
        instantiations,
        formula,
        assume_f3: opts.assume_f3,
    };
    if d.bottom {
        return Ok(done(Vec::new(), Fo::Eq(at.clone(), at.clone())));
    }
    let lambdas: BTreeMap<SVar, Lambda> = sys
        .main
        .var_set()
        .into_iter()
        .map(|v| {
            let srcs = d.sources.get(&v).map(Vec::as_slice).unwrap_or(&[]);
            (v, minimal(v, srcs, sys.constrained(v), &mut fresh))
        })
        .collect();
    let pos = standard_translation(&sys.main.rhs, &at, &mut fresh).subst_pred(&lambdas);
    let body = if d.rel.is_empty() {
        pos
    } else {
        Fo::imp(Fo::conj(d.rel), pos)
    };
    let mut formula = simplify(&Fo::forall_many(&d.prefix, body), opts.assume_f3);
    if formula == Fo::True {
        formula = Fo::Eq(at.clone(), at.clone());
    }
    Ok(done(lambdas.into_iter().collect(), formula))
}

/// Classification together with the correspondent of the chosen thread.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub classification: Classification,
    pub chosen: Option<(Thread, Correspondent)>,
}

impl Outcome {
    pub fn thread_result(&self) -> Option<&ThreadResult> {
        let (t, _) = self.chosen.as_ref()?;
        self.classification.thread(*t)
    }
}

/// Classifies `s` and computes the correspondent from the first thread in
/// `choice` that reaches canonical form.
pub fn correspond(
    s: &Sequent,
    choice: ThreadChoice,
    opts: Options,
    max_nodes: usize,
) -> Result<Outcome, CorrespondenceError> {
    let classification = classify(s, max_nodes)?;
    let mut chosen = None;
    for &t in choice.threads() {
        if let Some(sys) = classification.thread(t).and_then(ThreadResult::canonical) {
            chosen = Some((t, correspond_system(sys, opts)?));
            break;
        }
    }
    Ok(Outcome { classification, chosen })
}

// Simplification. Everything here is an equivalence over nonempty
// carriers; the F3 step additionally needs monotone base relations.

fn negate(a: Fo) -> Fo {
    simplify_not(a)
}

fn simplify_not(a: Fo) -> Fo {
    match a {
        Fo::True => Fo::False,
        Fo::False => Fo::True,
        Fo::Not(b) => *b,
        Fo::Forall(z, body) => match *body {
            Fo::Imp(l, r) => Fo::exists(z, and2(*l, simplify_not(*r))),
            other => Fo::not(Fo::forall(z, other)),
        },
        Fo::Exists(z, body) => match *body {
            Fo::And(l, r) => Fo::forall(z, imp2(*l, simplify_not(*r))),
            other => Fo::not(Fo::exists(z, other)),
        },
        other => Fo::not(other),
    }
}

fn and2(a: Fo, b: Fo) -> Fo {
    match (a, b) {
        (Fo::True, x) | (x, Fo::True) => x,
        (Fo::False, _) | (_, Fo::False) => Fo::False,
        (a, b) => Fo::and(a, b),
    }
}

fn or2(a: Fo, b: Fo) -> Fo {
    match (a, b) {
        (Fo::False, x) | (x, Fo::False) => x,
        (Fo::True, _) | (_, Fo::True) => Fo::True,
        (a, b) => Fo::or(a, b),
    }
}

fn imp2(a: Fo, b: Fo) -> Fo {
    match (a, b) {
        (Fo::True, x) => x,
        (Fo::False, _) | (_, Fo::True) => Fo::True,
        (a, Fo::False) => negate(a),
        (a, b) => Fo::imp(a, b),
    }
}

fn conjuncts(f: Fo, out: &mut Vec<Fo>) {
    match f {
        Fo::And(a, b) => {
            conjuncts(*a, out);
            conjuncts(*b, out);
        }
        other => out.push(other),
    }
}

fn occurs(f: &Fo, v: &Ivar) -> bool {
    f.free_vars().contains(v)
}

/// `∃u(… ∧ u = t ∧ …)` ⟶ the other conjuncts with t for u.
fn one_point(u: &Ivar, parts: &[Fo]) -> Option<Vec<Fo>> {
    let (k, t) = parts.iter().enumerate().find_map(|(k, p)| match p {
        Fo::Eq(a, b) if a == u && b != u => Some((k, b.clone())),
        Fo::Eq(a, b) if b == u && a != u => Some((k, a.clone())),
        _ => None,
    })?;
    Some(
        parts
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != k)
            .map(|(_, p)| p.subst(u, &t))
            .collect(),
    )
}

/// Under F3, `∃u(t ≤ u ∧ A(u))` ⟶ `A(t)` when u sits once in A, at an
/// argument place where A decreases, and dually for `u ≤ t` at the first
/// place.
fn monotone_point(u: &Ivar, parts: &[Fo]) -> Option<Vec<Fo>> {
    let uses: Vec<usize> = (0..parts.len()).filter(|&k| occurs(&parts[k], u)).collect();
    if uses.len() != 2 {
        return None;
    }
    for (ki, ka) in [(uses[0], uses[1]), (uses[1], uses[0])] {
        let (t, want_first) = match &parts[ki] {
            Fo::Leq(a, b) if b == u && a != u => (a.clone(), false),
            Fo::Leq(a, b) if a == u && b != u => (b.clone(), true),
            _ => continue,
        };
        let Fo::Atom(rel, args) = &parts[ka] else { continue };
        if !matches!(rel, Rel::Dia | Rel::Box | Rel::Neg | Rel::T) {
            continue;
        }
        let pos: Vec<usize> = (0..args.len()).filter(|&i| args[i] == *u).collect();
        if pos.len() != 1 || (pos[0] == 0) != want_first {
            continue;
        }
        let mut out: Vec<Fo> = Vec::new();
        for (j, p) in parts.iter().enumerate() {
            if j == ka {
                out.push(p.subst(u, &t));
            } else if j != ki {
                out.push(p.clone());
            }
        }
        return Some(out);
    }
    None
}

fn simplify_exists(u: Ivar, body: Fo, f3: bool) -> Fo {
    match body {
        Fo::False => return Fo::False,
        Fo::True => return Fo::True,
        _ => {}
    }
    let mut parts = Vec::new();
    conjuncts(body, &mut parts);
    let reduced = one_point(&u, &parts).or_else(|| if f3 { monotone_point(&u, &parts) } else { None });
    match reduced {
        Some(rest) => simplify(&Fo::conj(rest), f3),
        None => Fo::exists(u, Fo::conj(parts)),
    }
}

fn simplify_forall(u: Ivar, body: Fo, f3: bool) -> Fo {
    match body {
        Fo::True => Fo::True,
        Fo::False => Fo::False,
        Fo::Imp(l, r) => match *l {
            Fo::Eq(ref a, ref b) if (a == &u) != (b == &u) => {
                let t = if a == &u { b.clone() } else { a.clone() };
                simplify(&r.subst(&u, &t), f3)
            }
            l => Fo::forall(u, Fo::imp(l, *r)),
        },
        other => Fo::forall(u, other),
    }
}

/// Pushes negations through guarded quantifiers, folds constants and
/// eliminates one-point quantifiers.
pub fn simplify(f: &Fo, f3: bool) -> Fo {
    match f {
        Fo::Eq(a, b) if a == b => Fo::True,
        Fo::Not(a) => simplify_not(simplify(a, f3)),
        Fo::And(a, b) => and2(simplify(a, f3), simplify(b, f3)),
        Fo::Or(a, b) => or2(simplify(a, f3), simplify(b, f3)),
        Fo::Imp(a, b) => imp2(simplify(a, f3), simplify(b, f3)),
        Fo::Exists(u, a) => simplify_exists(u.clone(), simplify(a, f3), f3),
        Fo::Forall(u, a) => simplify_forall(u.clone(), simplify(a, f3), f3),
        Fo::Forall2(p, a) => Fo::forall2(*p, simplify(a, f3)),
        other => other.clone(),
    }
}
