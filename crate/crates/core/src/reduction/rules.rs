use std::fmt;

use super::system::System;
use crate::syntax::sorted::{Un, View};
use crate::syntax::{SVar, Sf, SortedSequent, Sort};

/// Reduction rules. `R5_*` are the rewrites, applied at any position of
/// either side of the main inequality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    R1,
    R2,
    R3,
    R4,
    R5_1a,
    R5_1b,
    R5_2a,
    R5_2b,
    R5_3a,
    R5_3b,
    R5_4,
    R5_5a,
    R5_5b,
    R5_6a,
    R5_6b,
    R5_7a,
    R5_7b,
    R5_8,
    R5_9,
    R6,
    R7a,
    R7b,
    R7c,
    R8,
    R9,
}

pub const REWRITES: [Rule; 15] = [
    Rule::R5_1a,
    Rule::R5_1b,
    Rule::R5_2a,
    Rule::R5_2b,
    Rule::R5_3a,
    Rule::R5_3b,
    Rule::R5_4,
    Rule::R5_5a,
    Rule::R5_5b,
    Rule::R5_6a,
    Rule::R5_6b,
    Rule::R5_7a,
    Rule::R5_7b,
    Rule::R5_8,
    Rule::R5_9,
];

pub const ALL_RULES: [Rule; 25] = [
    Rule::R1,
    Rule::R2,
    Rule::R3,
    Rule::R4,
    Rule::R5_1a,
    Rule::R5_1b,
    Rule::R5_2a,
    Rule::R5_2b,
    Rule::R5_3a,
    Rule::R5_3b,
    Rule::R5_4,
    Rule::R5_5a,
    Rule::R5_5b,
    Rule::R5_6a,
    Rule::R5_6b,
    Rule::R5_7a,
    Rule::R5_7b,
    Rule::R5_8,
    Rule::R5_9,
    Rule::R6,
    Rule::R7a,
    Rule::R7b,
    Rule::R7c,
    Rule::R8,
    Rule::R9,
];

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::R1 => "R1",
            Rule::R2 => "R2",
            Rule::R3 => "R3",
            Rule::R4 => "R4",
            Rule::R5_1a => "R5.1a",
            Rule::R5_1b => "R5.1b",
            Rule::R5_2a => "R5.2a",
            Rule::R5_2b => "R5.2b",
            Rule::R5_3a => "R5.3a",
            Rule::R5_3b => "R5.3b",
            Rule::R5_4 => "R5.4",
            Rule::R5_5a => "R5.5a",
            Rule::R5_5b => "R5.5b",
            Rule::R5_6a => "R5.6a",
            Rule::R5_6b => "R5.6b",
            Rule::R5_7a => "R5.7a",
            Rule::R5_7b => "R5.7b",
            Rule::R5_8 => "R5.8",
            Rule::R5_9 => "R5.9",
            Rule::R6 => "R6",
            Rule::R7a => "R7a",
            Rule::R7b => "R7b",
            Rule::R7c => "R7c",
            Rule::R8 => "R8",
            Rule::R9 => "R9",
        }
    }

    pub fn from_name(s: &str) -> Option<Rule> {
        ALL_RULES.iter().copied().find(|r| r.name() == s)
    }

    pub fn is_rewrite(self) -> bool {
        REWRITES.contains(&self)
    }

    /// How the rule is located: by variable, at the main inequality, or at a
    /// position inside it.
    pub fn site_kind(self) -> SiteKind {
        match self {
            Rule::R1 | Rule::R4 | Rule::R6 => SiteKind::Var,
            Rule::R2 | Rule::R3 | Rule::R7a | Rule::R7b | Rule::R7c | Rule::R8 | Rule::R9 => SiteKind::Main,
            _ => SiteKind::Path,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SiteKind {
    Var,
    Main,
    Path,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Lhs,
    Rhs,
}

/// Where a rule applies.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Site {
    Var(SVar),
    Main,
    Path(Side, Vec<usize>),
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Site::Var(v) => write!(f, "{v}"),
            Site::Main => f.write_str("main"),
            Site::Path(side, p) => {
                let s = match side {
                    Side::Lhs => "lhs",
                    Side::Rhs => "rhs",
                };
                let p: Vec<String> = p.iter().map(|i| i.to_string()).collect();
                write!(f, "{s}@{}", p.join("."))
            }
        }
    }
}

/// Numbers of primes directly above each occurrence of `v`.
fn prime_depths(f: &Sf, v: SVar, above: usize, out: &mut Vec<usize>) {
    match f {
        Sf::Var(w) if *w == v => out.push(above),
        Sf::Prime(a) => prime_depths(a, v, above + 1, out),
        _ => {
            for c in f.children() {
                prime_depths(c, v, 0, out);
            }
        }
    }
}

pub fn occurrence_depths(m: &SortedSequent, v: SVar) -> Vec<usize> {
    let mut out = Vec::new();
    prime_depths(&m.lhs, v, 0, &mut out);
    prime_depths(&m.rhs, v, 0, &mut out);
    out
}

fn is_var(f: &Sf) -> Option<SVar> {
    match f {
        Sf::Var(v) => Some(*v),
        _ => None,
    }
}

/// The rewrite `rule` applied at the root of `f`, if it matches.
pub fn rewrite(sys: &System, rule: Rule, f: &Sf) -> Option<Sf> {
    let constrained_var = |g: &Sf| is_var(g).filter(|v| sys.constrained(*v));
    let p = Sf::prime;
    match (rule, f.view()) {
        (Rule::R5_1a, View::Un(Un::Prime, Sf::DiaM(a))) => match &**a {
            Sf::Prime(alpha) => Some(Un::BoxM.apply(p(p((**alpha).clone())))),
            _ => None,
        },
        (Rule::R5_1b, View::Un(Un::Prime, Sf::DiaV(b))) => match &**b {
            Sf::Prime(beta) => Some(Un::BoxV.apply(p(p((**beta).clone())))),
            _ => None,
        },
        (Rule::R5_2a, View::Un(Un::Prime, Sf::DiaM(a))) => {
            constrained_var(a).map(|v| Un::BoxM.apply(p(Sf::Var(v))))
        }
        (Rule::R5_2b, View::Un(Un::Prime, Sf::DiaV(a))) => {
            constrained_var(a).map(|v| Un::BoxV.apply(p(Sf::Var(v))))
        }
        (Rule::R5_3a | Rule::R5_3b, View::Un(Un::Prime, Sf::Prime(a))) => match (rule, &**a) {
            (Rule::R5_3a, Sf::BoxM(b)) => constrained_var(b).map(|_| (**a).clone()),
            (Rule::R5_3b, Sf::BoxV(b)) => constrained_var(b).map(|_| (**a).clone()),
            _ => None,
        },
        (Rule::R5_4, View::Un(Un::Prime, _)) => match f.strip_primes() {
            (n, Sf::Var(v)) if n >= 3 => Some(Sf::primes(Sf::Var(*v), n - 2)),
            _ => None,
        },
        (Rule::R5_5a, View::Un(Un::BoxM, Sf::Cap(a, b))) => Some(Sf::cap(
            Un::BoxM.apply((**a).clone()),
            Un::BoxM.apply((**b).clone()),
        )),
        (Rule::R5_5b, View::Un(Un::BoxV, Sf::Cap(a, b))) => Some(Sf::cap(
            Un::BoxV.apply((**a).clone()),
            Un::BoxV.apply((**b).clone()),
        )),
        (Rule::R5_6a, View::Un(Un::Prime, Sf::Prime(a))) => match &**a {
            Sf::Cap(x, y) => Some(Sf::cap(p(p((**x).clone())), p(p((**y).clone())))),
            _ => None,
        },
        (Rule::R5_6b, View::Un(Un::Prime, Sf::Cup(x, y))) => Some(Sf::cap(p((**x).clone()), p((**y).clone()))),
        (Rule::R5_7a, View::Un(Un::Prime, Sf::TDown(a))) => match a.strip_primes() {
            (n, _) if n >= 2 => match &**a {
                Sf::Prime(inner) => match &**inner {
                    Sf::Prime(alpha) => Some(Un::BTDown.apply(p((**alpha).clone()))),
                    _ => None,
                },
                _ => None,
            },
            _ => None,
        },
        (Rule::R5_7b, View::Un(Un::Prime, Sf::TDown(a))) => {
            constrained_var(a).map(|v| Un::BTDown.apply(p(Sf::Var(v))))
        }
        (Rule::R5_8, View::Bin(crate::syntax::sorted::Bin::RSpoon, a, b)) => {
            let (pa, qb) = (constrained_var(a)?, constrained_var(b)?);
            Some(p(crate::syntax::sorted::Bin::TRight.apply(Sf::Var(pa), p(Sf::Var(qb)))))
        }
        (Rule::R5_9, View::Bin(crate::syntax::sorted::Bin::RSpoon, p2, rest)) => match rest {
            Sf::RSpoon(p1, q) => {
                let (p2, p1, q) = (is_var(p2)?, is_var(p1)?, is_var(q)?);
                Some(crate::syntax::sorted::Bin::RSpoon.apply(
                    crate::syntax::sorted::Bin::Odot.apply(Sf::Var(p1), Sf::Var(p2)),
                    Sf::Var(q),
                ))
            }
            _ => None,
        },
        _ => None,
    }
}

fn is_prime(f: &Sf) -> bool {
    matches!(f, Sf::Prime(_))
}

/// A box-topped term that a single rewrite produces from a primed term:
/// boxm α'' and boxv β'' come from (diam α')' and (diav β')', boxm P' and
/// boxv P' from (diam P)' and (diav P)', boxm P and boxv P from their
/// double primes, btdown α' from (tdown α'')' (P constrained throughout).
pub fn rewrite_image_of_primed(sys: &System, f: &Sf) -> bool {
    match f {
        Sf::BoxM(a) | Sf::BoxV(a) => match a.strip_primes() {
            (n, _) if n >= 2 => true,
            (1, Sf::Var(v)) | (0, Sf::Var(v)) => sys.constrained(*v),
            _ => false,
        },
        Sf::BTDown(a) => is_prime(a),
        _ => false,
    }
}

/// Right-hand side shape accepted by R2: an intersection of n ≥ 1 terms,
/// each primed or the rewrite image of a primed term.
fn r2_rhs(sys: &System, rhs: &Sf) -> bool {
    let cs = rhs.conjuncts();
    let single_double = cs.len() == 1 && rhs.strip_primes().0 >= 2;
    !single_double && cs.iter().all(|c| is_prime(c) || rewrite_image_of_primed(sys, c))
}

fn r2_r9_rhs_literal(rhs: &Sf) -> bool {
    rhs.conjuncts().iter().all(|c| is_prime(c))
}

fn strip2(f: &Sf) -> Option<&Sf> {
    match f {
        Sf::Prime(a) => match &**a {
            Sf::Prime(b) => Some(b),
            _ => None,
        },
        _ => None,
    }
}

fn replace_prime2(f: &Sf, v: SVar) -> Sf {
    f.replace(&Sf::prime(Sf::prime(Sf::Var(v))), &Sf::Var(v))
}

/// Applies `rule` at `site`, returning the resulting system.
pub fn apply_rule(sys: &System, rule: Rule, site: &Site) -> Option<System> {
    let m = &sys.main;
    let with_main = |lhs: Sf, rhs: Sf| {
        let mut s = sys.clone();
        s.main = SortedSequent::new(lhs, rhs);
        s
    };
    match (rule.site_kind(), site) {
        (SiteKind::Var, Site::Var(v)) => {
            let v = *v;
            match rule {
                Rule::R1 => {
                    if m.lhs.contains_var(v) || m.rhs.contains_var(v) {
                        return None;
                    }
                    let mut s = sys.clone();
                    if let Some(k) = s.stb.iter().position(|w| *w == v) {
                        s.stb.remove(k);
                        return Some(s);
                    }
                    let k = s.cvc.iter().position(|(q, _)| *q == v)?;
                    s.cvc.remove(k);
                    Some(s)
                }
                Rule::R4 => {
                    let d = occurrence_depths(m, v);
                    if d.is_empty() || d.iter().any(|&n| n < 2) {
                        return None;
                    }
                    let mut s = with_main(replace_prime2(&m.lhs, v), replace_prime2(&m.rhs, v));
                    if !s.constrained(v) {
                        s.stb.push(v);
                    }
                    Some(s)
                }
                Rule::R6 => {
                    let d = occurrence_depths(m, v);
                    if d.is_empty() || d.iter().any(|&n| n != 1) {
                        return None;
                    }
                    let q = SVar::new(sys.next, v.sort.flip());
                    let from = Sf::prime(Sf::Var(v));
                    let to = Sf::Var(q);
                    let mut s = with_main(m.lhs.replace(&from, &to), m.rhs.replace(&from, &to));
                    s.cvc.push((q, v));
                    s.next += 1;
                    Some(s)
                }
                _ => None,
            }
        }
        (SiteKind::Main, Site::Main) => match rule {
            Rule::R2 => {
                let zeta = strip2(&m.lhs)?;
                r2_rhs(sys, &m.rhs).then(|| with_main(zeta.clone(), m.rhs.clone()))
            }
            Rule::R3 => {
                let zeta = strip2(&m.lhs)?;
                strip2(&m.rhs)?;
                Some(with_main(zeta.clone(), m.rhs.clone()))
            }
            Rule::R7a => match &m.rhs {
                Sf::RSpoon(eta, zeta) if m.sort() == Sort::One => Some(with_main(
                    crate::syntax::sorted::Bin::Odot.apply((**eta).clone(), m.lhs.clone()),
                    (**zeta).clone(),
                )),
                _ => None,
            },
            Rule::R7b => match &m.lhs {
                Sf::DiaV(a) if strip2(a).is_some() => {
                    Some(with_main((**a).clone(), Un::Box1.apply(m.rhs.clone())))
                }
                _ => None,
            },
            Rule::R7c => match &m.lhs {
                Sf::DiaM(a) if strip2(a).is_some() => {
                    Some(with_main((**a).clone(), Un::BoxD.apply(m.rhs.clone())))
                }
                _ => None,
            },
            Rule::R8 => match (&m.lhs, &m.rhs) {
                (Sf::RSpoon(zeta, p1), Sf::RSpoon(xi, p2)) if is_var(p1).is_some() && p1 == p2 => {
                    Some(with_main((**xi).clone(), (**zeta).clone()))
                }
                _ => None,
            },
            Rule::R9 => {
                let (a, b) = match &m.lhs {
                    Sf::Cap(a, b) => (a, b),
                    _ => return None,
                };
                if !r2_r9_rhs_literal(&m.rhs) {
                    return None;
                }
                let boxed_constrained = |g: &Sf| match g {
                    Sf::BoxM(x) | Sf::BoxV(x) => is_var(x).is_some_and(|v| sys.constrained(v)),
                    _ => false,
                };
                if let (Some(z), true) = (strip2(a), boxed_constrained(b)) {
                    return Some(with_main(Sf::cap(z.clone(), (**b).clone()), m.rhs.clone()));
                }
                if let (true, Some(z)) = (boxed_constrained(a), strip2(b)) {
                    return Some(with_main(Sf::cap((**a).clone(), z.clone()), m.rhs.clone()));
                }
                None
            }
            _ => None,
        },
        (SiteKind::Path, Site::Path(side, path)) => {
            let (lhs, rhs) = (&m.lhs, &m.rhs);
            let target = match side {
                Side::Lhs => lhs,
                Side::Rhs => rhs,
            };
            let node = target.at(path)?;
            let new = rewrite(sys, rule, node)?;
            let mut t = target.clone();
            *t.at_mut(path)? = new;
            Some(match side {
                Side::Lhs => with_main(t, rhs.clone()),
                Side::Rhs => with_main(lhs.clone(), t),
            })
        }
        _ => None,
    }
}

/// Candidate sites for a rule in a system, in deterministic order.
pub fn sites(sys: &System, rule: Rule) -> Vec<Site> {
    match rule.site_kind() {
        SiteKind::Main => vec![Site::Main],
        SiteKind::Var => sys.vars().into_iter().map(Site::Var).collect(),
        SiteKind::Path => {
            let mut out: Vec<Site> = sys.main.lhs.paths().into_iter().map(|p| Site::Path(Side::Lhs, p)).collect();
            out.extend(sys.main.rhs.paths().into_iter().map(|p| Site::Path(Side::Rhs, p)));
            out
        }
    }
}

/// Search order: rewrites, then R4 and R6, then R1 to R3, then R7 to R9.
pub const SEARCH_ORDER: [Rule; 25] = [
    Rule::R5_1a,
    Rule::R5_1b,
    Rule::R5_2a,
    Rule::R5_2b,
    Rule::R5_3a,
    Rule::R5_3b,
    Rule::R5_4,
    Rule::R5_5a,
    Rule::R5_5b,
    Rule::R5_6a,
    Rule::R5_6b,
    Rule::R5_7a,
    Rule::R5_7b,
    Rule::R5_8,
    Rule::R5_9,
    Rule::R4,
    Rule::R6,
    Rule::R1,
    Rule::R2,
    Rule::R3,
    Rule::R7a,
    Rule::R7b,
    Rule::R7c,
    Rule::R8,
    Rule::R9,
];

/// Every one-step successor of a system.
pub fn successors(sys: &System) -> Vec<(Rule, Site, System)> {
    let mut out = Vec::new();
    for rule in SEARCH_ORDER {
        for site in sites(sys, rule) {
            if let Some(next) = apply_rule(sys, rule, &site) {
                out.push((rule, site, next));
            }
        }
    }
    out
}
