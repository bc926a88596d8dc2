use super::system::System;
use crate::syntax::fo::Letter;
use crate::syntax::sorted::{Bin, Un, View};
use crate::syntax::{SVar, Sf, SortedSequent, Sort};

/// Decomposes a boxed atom: a string of boxes over {boxm, btdown} at sort 1
/// or over {boxv} at sort ∂, applied to a variable.
pub fn boxed_atom(f: &Sf) -> Option<(Vec<Letter>, SVar)> {
    let mut word = Vec::new();
    let mut cur = f;
    let sort = f.sort();
    loop {
        match cur {
            Sf::Var(v) => return Some((word, *v)),
            Sf::BoxM(_) if sort == Sort::One => word.push(Letter::M),
            Sf::BTDown(_) if sort == Sort::One => word.push(Letter::Neg),
            Sf::BoxV(_) if sort == Sort::Dual => word.push(Letter::V),
            _ => return None,
        }
        cur = match cur {
            Sf::BoxM(a) | Sf::BTDown(a) | Sf::BoxV(a) => a,
            _ => unreachable!(),
        };
    }
}

/// Sahlqvist antecedent: ⊤, ⊥ and boxed atoms closed under ∩, diav and
/// fusion at sort 1, and under ∩, diam, tdown and tright at sort ∂.
pub fn is_antecedent(f: &Sf) -> bool {
    if boxed_atom(f).is_some() {
        return true;
    }
    match f.view() {
        View::Top(_) | View::Bot(_) => true,
        View::Bin(Bin::Cap | Bin::Odot | Bin::TRight, a, b) => is_antecedent(a) && is_antecedent(b),
        View::Un(Un::DiaV | Un::DiaM | Un::TDown, a) => is_antecedent(a),
        _ => false,
    }
}

fn positive_at(f: &Sf, primes: usize) -> bool {
    match f.view() {
        View::Var(_) => primes.is_multiple_of(2),
        View::Top(_) | View::Bot(_) => true,
        View::Un(Un::Prime, a) => positive_at(a, primes + 1),
        View::Un(_, a) => positive_at(a, primes),
        View::Bin(Bin::RSpoon, _, _) => false,
        View::Bin(_, a, b) => positive_at(a, primes) && positive_at(b, primes),
    }
}

/// Positive: free of rspoon, every variable under an even number of primes.
pub fn is_positive(f: &Sf) -> bool {
    positive_at(f, 0)
}

pub fn is_simple_sahlqvist(m: &SortedSequent) -> bool {
    is_antecedent(&m.lhs) && is_positive(&m.rhs)
}

fn primed_var(f: &Sf, out: &mut Vec<SVar>) {
    if let Sf::Prime(a) = f {
        if let Sf::Var(v) = &**a {
            out.push(*v);
        }
    }
    for c in f.children() {
        primed_var(c, out);
    }
}

/// Main inequality simple Sahlqvist, and no constrained variable directly
/// under a prime.
pub fn is_canonical(sys: &System) -> bool {
    if !is_simple_sahlqvist(&sys.main) {
        return false;
    }
    let mut primed = Vec::new();
    primed_var(&sys.main.lhs, &mut primed);
    primed_var(&sys.main.rhs, &mut primed);
    primed.iter().all(|v| !sys.constrained(*v))
}
