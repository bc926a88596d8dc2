//! Translation of DfML into the sorted modal language, and standard
//! translation of sorted formulas into the two-sorted first-order language.
//!
//! DfML variable `p_i` becomes the sort-1 variable `P_i`; a sequent φ ⊢ ψ
//! becomes the pair φ• ⊢₁ ψ• and ψ∘ ⊢∂ φ∘.
//!
//! Four clauses have two equivalent forms. The primary form is listed
//! first; [`variants`] enumerates all combinations of forms.
//!
//! | φ | φ• | φ∘ |
//! |---|---|---|
//! | □ψ | boxm ψ• / (diam ψ∘)' | (diam ψ∘)'' |
//! | ◇ψ | (diav ψ•)'' | (diav ψ•)' / boxv ψ∘ |
//! | ∼ψ | (tdown ψ•)' / btdown ψ∘ | (tdown ψ•)'' |
//! | ψ⊃χ | (ψ• tright χ∘)' / ψ• rspoon χ• | (ψ• tright χ∘)'' |

use crate::syntax::fo::{Fo, Fresh, Ivar, Rel};
use crate::syntax::sorted::{Un, View};
use crate::syntax::{Dfml, Sequent, Sf, SortedSequent, Sort};

/// Upper bound on the number of translation variants per thread.
pub const MAX_VARIANTS: usize = 64;

/// Which sorted sequent of the pair: the translation φ• ⊢₁ ψ• or the
/// co-translation ψ∘ ⊢∂ φ∘.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Thread {
    Translation,
    CoTranslation,
}

impl Thread {
    pub fn sort(self) -> Sort {
        match self {
            Thread::Translation => Sort::One,
            Thread::CoTranslation => Sort::Dual,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Thread::Translation => "translation",
            Thread::CoTranslation => "co-translation",
        }
    }
}

impl std::str::FromStr for Thread {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "translation" => Ok(Thread::Translation),
            "co-translation" | "cotranslation" => Ok(Thread::CoTranslation),
            _ => Err(format!("unknown thread `{s}`")),
        }
    }
}

fn p(a: Sf) -> Sf {
    Sf::prime(a)
}

fn un(op: Un, a: Sf) -> Sf {
    op.apply(a)
}

/// φ• in primary form.
pub fn bullet(phi: &Dfml) -> Sf {
    all_bullet(phi, 1).swap_remove(0)
}

/// φ∘ in primary form.
pub fn circle(phi: &Dfml) -> Sf {
    all_circle(phi, 1).swap_remove(0)
}

/// Combines variant lists of two subformulas, primary combination first.
fn product(a: &[Sf], b: &[Sf], cap: usize, mk: impl Fn(Sf, Sf) -> Sf) -> Vec<Sf> {
    let mut out = Vec::new();
    for x in a {
        for y in b {
            if out.len() == cap {
                return out;
            }
            out.push(mk(x.clone(), y.clone()));
        }
    }
    out
}

fn truncate(mut v: Vec<Sf>, cap: usize) -> Vec<Sf> {
    v.truncate(cap);
    v
}

fn all_bullet(phi: &Dfml, cap: usize) -> Vec<Sf> {
    match phi {
        Dfml::Var(i) => vec![p(p(Sf::var(*i, Sort::One)))],
        Dfml::Top => vec![Sf::Top(Sort::One)],
        Dfml::Bot => vec![Sf::Bot(Sort::One)],
        Dfml::And(a, b) => product(&all_bullet(a, cap), &all_bullet(b, cap), cap, Sf::cap),
        Dfml::Or(a, b) => product(&all_bullet(a, cap), &all_bullet(b, cap), cap, |x, y| p(p(Sf::cup(x, y)))),
        Dfml::Box(a) => {
            let mut v: Vec<Sf> = all_bullet(a, cap).into_iter().map(|x| un(Un::BoxM, x)).collect();
            v.extend(all_circle(a, cap).into_iter().map(|x| p(un(Un::DiaM, x))));
            truncate(v, cap)
        }
        Dfml::Dia(a) => all_bullet(a, cap).into_iter().map(|x| p(p(un(Un::DiaV, x)))).collect(),
        Dfml::Neg(a) => {
            let mut v: Vec<Sf> = all_bullet(a, cap).into_iter().map(|x| p(un(Un::TDown, x))).collect();
            v.extend(all_circle(a, cap).into_iter().map(|x| un(Un::BTDown, x)));
            truncate(v, cap)
        }
        Dfml::Imp(a, b) => {
            let mut v = product(&all_bullet(a, cap), &all_circle(b, cap), cap, |x, y| {
                p(crate::syntax::sorted::Bin::TRight.apply(x, y))
            });
            v.extend(product(&all_bullet(a, cap), &all_bullet(b, cap), cap, |x, y| {
                crate::syntax::sorted::Bin::RSpoon.apply(x, y)
            }));
            truncate(v, cap)
        }
    }
}

fn all_circle(phi: &Dfml, cap: usize) -> Vec<Sf> {
    match phi {
        Dfml::Var(i) => vec![p(Sf::var(*i, Sort::One))],
        Dfml::Top => vec![Sf::Bot(Sort::Dual)],
        Dfml::Bot => vec![Sf::Top(Sort::Dual)],
        Dfml::And(a, b) => product(&all_circle(a, cap), &all_circle(b, cap), cap, |x, y| p(p(Sf::cup(x, y)))),
        Dfml::Or(a, b) => product(&all_circle(a, cap), &all_circle(b, cap), cap, Sf::cap),
        Dfml::Box(a) => all_circle(a, cap).into_iter().map(|x| p(p(un(Un::DiaM, x)))).collect(),
        Dfml::Dia(a) => {
            let mut v: Vec<Sf> = all_bullet(a, cap).into_iter().map(|x| p(un(Un::DiaV, x))).collect();
            v.extend(all_circle(a, cap).into_iter().map(|x| un(Un::BoxV, x)));
            truncate(v, cap)
        }
        Dfml::Neg(a) => all_bullet(a, cap).into_iter().map(|x| p(p(un(Un::TDown, x)))).collect(),
        Dfml::Imp(a, b) => product(&all_bullet(a, cap), &all_circle(b, cap), cap, |x, y| {
            p(p(crate::syntax::sorted::Bin::TRight.apply(x, y)))
        }),
    }
}

/// The primary translation pair.
pub fn translate(s: &Sequent) -> (SortedSequent, SortedSequent) {
    (
        SortedSequent::new(bullet(&s.lhs), bullet(&s.rhs)),
        SortedSequent::new(circle(&s.rhs), circle(&s.lhs)),
    )
}

pub fn translate_thread(s: &Sequent, t: Thread) -> SortedSequent {
    let (a, b) = translate(s);
    match t {
        Thread::Translation => a,
        Thread::CoTranslation => b,
    }
}

/// All translation variants of one thread, primary first, at most
/// [`MAX_VARIANTS`].
pub fn variants(s: &Sequent, t: Thread) -> Vec<SortedSequent> {
    let cap = MAX_VARIANTS;
    let (l, r) = match t {
        Thread::Translation => (all_bullet(&s.lhs, cap), all_bullet(&s.rhs, cap)),
        Thread::CoTranslation => (all_circle(&s.rhs, cap), all_circle(&s.lhs, cap)),
    };
    let mut out = Vec::new();
    for a in &l {
        for b in &r {
            if out.len() == cap {
                return out;
            }
            out.push(SortedSequent::new(a.clone(), b.clone()));
        }
    }
    out
}

/// Standard translation of a sorted formula at the point `at`.
pub fn standard_translation(a: &Sf, at: &Ivar, fresh: &mut Fresh) -> Fo {
    use crate::syntax::sorted::Bin;
    let at2 = |r: Rel, x: &Ivar, y: &Ivar| Fo::rel2(r, x, y);
    match a.view() {
        View::Var(v) => Fo::Pred(v, at.clone()),
        View::Top(_) => Fo::Eq(at.clone(), at.clone()),
        View::Bot(_) => Fo::not(Fo::Eq(at.clone(), at.clone())),
        View::Un(op, b) => {
            let w = fresh.var(match op {
                Un::Prime => at.sort.flip(),
                _ => b.sort(),
            });
            let inner = standard_translation(b, &w, fresh);
            match op {
                Un::Prime => {
                    let guard = match at.sort {
                        Sort::One => at2(Rel::I, at, &w),
                        Sort::Dual => at2(Rel::I, &w, at),
                    };
                    Fo::forall(w, Fo::imp(guard, Fo::not(inner)))
                }
                Un::DiaV => Fo::exists(w.clone(), Fo::and(at2(Rel::Dia, at, &w), inner)),
                Un::DiaM => Fo::exists(w.clone(), Fo::and(at2(Rel::Box, at, &w), inner)),
                Un::TDown => Fo::exists(w.clone(), Fo::and(at2(Rel::Neg, at, &w), inner)),
                Un::Box1 => Fo::forall(w.clone(), Fo::imp(at2(Rel::Dia, &w, at), inner)),
                Un::BoxD => Fo::forall(w.clone(), Fo::imp(at2(Rel::Box, &w, at), inner)),
                Un::BoxM => Fo::forall(w.clone(), Fo::imp(at2(Rel::BoxDD, at, &w), inner)),
                Un::BoxV => Fo::forall(w.clone(), Fo::imp(at2(Rel::DiaDD, at, &w), inner)),
                Un::BTDown => Fo::forall(w.clone(), Fo::imp(at2(Rel::NegDD, at, &w), inner)),
            }
        }
        View::Bin(op, l, r) => match op {
            Bin::Cap => Fo::and(standard_translation(l, at, fresh), standard_translation(r, at, fresh)),
            Bin::Cup => Fo::or(standard_translation(l, at, fresh), standard_translation(r, at, fresh)),
            Bin::Odot => {
                let (x, z) = (fresh.var(Sort::One), fresh.var(Sort::One));
                let body = Fo::conj([
                    Fo::atom(Rel::R111, &[at, &x, &z]),
                    standard_translation(l, &x, fresh),
                    standard_translation(r, &z, fresh),
                ]);
                Fo::exists(x, Fo::exists(z, body))
            }
            Bin::RSpoon => {
                let (x, z) = (fresh.var(Sort::One), fresh.var(Sort::One));
                let body = Fo::imp(
                    Fo::and(Fo::atom(Rel::R111, &[&z, &x, at]), standard_translation(l, &x, fresh)),
                    standard_translation(r, &z, fresh),
                );
                Fo::forall(x, Fo::forall(z, body))
            }
            Bin::TRight => {
                let (x, y) = (fresh.var(Sort::One), fresh.var(Sort::Dual));
                let body = Fo::conj([
                    Fo::atom(Rel::T, &[at, &x, &y]),
                    standard_translation(l, &x, fresh),
                    standard_translation(r, &y, fresh),
                ]);
                Fo::exists(x, Fo::exists(y, body))
            }
        },
    }
}

/// Second-order local translation of a sorted sequent at the anchor of its
/// sort: ∀P̄ (ST(lhs) → ST(rhs)), predicates ranging over all subsets.
pub fn so_translation(s: &SortedSequent) -> Fo {
    let at = crate::syntax::anchor(s.sort());
    let mut fresh = Fresh::new();
    let body = Fo::imp(
        standard_translation(&s.lhs, &at, &mut fresh),
        standard_translation(&s.rhs, &at, &mut fresh),
    );
    s.var_set().into_iter().rev().fold(body, |acc, v| Fo::forall2(v, acc))
}
