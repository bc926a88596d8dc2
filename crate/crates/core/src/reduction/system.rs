use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::syntax::lexer::{Cursor, Tok};
use crate::syntax::sorted::{check_var_sorts, parse_sf, sequent_body};
use crate::syntax::{ParseError, SVar, Sf, SortError, SortedSequent};

/// An inequality system ⟨STB, CVC | main⟩.
///
/// `stb` lists variables constrained to be Galois (P'' ≤ P); each `cvc`
/// entry `(q, p)` constrains q = p'. `next` is the next free index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct System {
    pub stb: Vec<SVar>,
    pub cvc: Vec<(SVar, SVar)>,
    pub main: SortedSequent,
    pub next: u32,
}

/// Order-insensitive identity of a system, used by the search.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Key {
    stb: BTreeSet<SVar>,
    cvc: BTreeSet<(SVar, SVar)>,
    main: SortedSequent,
}

impl System {
    /// The unconstrained system for a sorted sequent.
    pub fn from_sequent(main: SortedSequent) -> System {
        let next = main.var_set().iter().map(|v| v.idx + 1).max().unwrap_or(0);
        System {
            stb: Vec::new(),
            cvc: Vec::new(),
            main,
            next,
        }
    }

    pub fn key(&self) -> Key {
        Key {
            stb: self.stb.iter().copied().collect(),
            cvc: self.cvc.iter().copied().collect(),
            main: self.main.clone(),
        }
    }

    /// In STB, or the new variable of a CVC.
    pub fn constrained(&self, v: SVar) -> bool {
        self.stb.contains(&v) || self.cvc.iter().any(|(q, _)| *q == v)
    }

    pub fn constrained_vars(&self) -> BTreeSet<SVar> {
        self.stb.iter().copied().chain(self.cvc.iter().map(|(q, _)| *q)).collect()
    }

    pub fn vars(&self) -> BTreeSet<SVar> {
        let mut out = self.main.var_set();
        out.extend(self.stb.iter().copied());
        for (q, p) in &self.cvc {
            out.insert(*q);
            out.insert(*p);
        }
        out
    }

    /// Systems equal up to a sort-preserving bijection of variables, order
    /// of constraints, and commutativity of ∩.
    pub fn equivalent_modulo_renaming(&self, other: &System) -> bool {
        let (a, b) = (self.vars(), other.vars());
        if a.len() != b.len() {
            return false;
        }
        let a: Vec<SVar> = a.into_iter().collect();
        let b: Vec<SVar> = b.into_iter().collect();
        let target = other.normalized();
        permutations(&b).into_iter().any(|perm| {
            if a.iter().zip(&perm).any(|(x, y)| x.sort != y.sort) {
                return false;
            }
            let map: BTreeMap<SVar, SVar> = a.iter().copied().zip(perm).collect();
            self.rename(&map).normalized() == target
        })
    }

    pub fn rename(&self, map: &BTreeMap<SVar, SVar>) -> System {
        let r = |v: &SVar| *map.get(v).unwrap_or(v);
        System {
            stb: self.stb.iter().map(r).collect(),
            cvc: self.cvc.iter().map(|(q, p)| (r(q), r(p))).collect(),
            main: SortedSequent::new(self.main.lhs.rename(map), self.main.rhs.rename(map)),
            next: self.next,
        }
    }

    fn normalized(&self) -> Key {
        Key {
            stb: self.stb.iter().copied().collect(),
            cvc: self.cvc.iter().copied().collect(),
            main: SortedSequent::new(sort_caps(&self.main.lhs), sort_caps(&self.main.rhs)),
        }
    }
}

/// Orders the conjuncts of every ∩-tree, flattening it to the right.
pub fn sort_caps(f: &Sf) -> Sf {
    match f {
        Sf::Cap(..) => {
            let mut parts: Vec<Sf> = f.conjuncts().into_iter().map(sort_caps).collect();
            parts.sort();
            parts.into_iter().rev().reduce(|acc, x| Sf::cap(x, acc)).unwrap()
        }
        _ => {
            let mut out = f.clone();
            for c in out.children_mut() {
                *c = sort_caps(c);
            }
            out
        }
    }
}

fn permutations(v: &[SVar]) -> Vec<Vec<SVar>> {
    if v.len() <= 1 {
        return vec![v.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..v.len() {
        let mut rest = v.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut cons: Vec<String> = self
            .stb
            .iter()
            .map(|v| format!("{v}'' <={} {v}", v.sort.suffix()))
            .collect();
        cons.extend(self.cvc.iter().map(|(q, p)| format!("{q} ={} {p}'", q.sort.suffix())));
        let m = &self.main;
        let sep = if cons.is_empty() { "" } else { " " };
        write!(
            f,
            "<{}{sep}| {} <={} {}>",
            cons.join(", "),
            m.lhs,
            m.sort().suffix(),
            m.rhs
        )
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SystemParseError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("constraint `{0}` is neither P'' <= P nor Q = P'")]
    Constraint(String),
}

impl From<SortError> for SystemParseError {
    fn from(e: SortError) -> Self {
        SystemParseError::Parse(e.into())
    }
}

/// Parses `<P0'' <=1 P0, P2 =d P0' | lhs <=1 rhs>`.
pub fn parse_system(src: &str) -> Result<System, SystemParseError> {
    let mut c = Cursor::new(src)?;
    c.expect(&Tok::LAngle)?;
    let mut stb = Vec::new();
    let mut cvc = Vec::new();
    let mut raw_cvc = Vec::new();
    while !c.eat(&Tok::Bar) {
        let lhs = parse_sf(&mut c)?;
        let op = c.bump();
        let rhs = parse_sf(&mut c)?;
        let text = format!("{lhs} .. {rhs}");
        match op {
            Some(Tok::Le1) | Some(Tok::LeD) => {
                let sort = if op == Some(Tok::Le1) {
                    crate::syntax::Sort::One
                } else {
                    crate::syntax::Sort::Dual
                };
                match (&lhs.strip_primes(), &rhs) {
                    ((2, Sf::Var(a)), Sf::Var(b)) if a.idx == b.idx => stb.push(SVar::new(a.idx, sort)),
                    _ => return Err(SystemParseError::Constraint(text)),
                }
            }
            Some(Tok::Eq1) | Some(Tok::EqD) => {
                let sort = if op == Some(Tok::Eq1) {
                    crate::syntax::Sort::One
                } else {
                    crate::syntax::Sort::Dual
                };
                match (&lhs, &rhs.strip_primes()) {
                    (Sf::Var(q), (1, Sf::Var(p))) => raw_cvc.push((SVar::new(q.idx, sort), p.idx)),
                    _ => return Err(SystemParseError::Constraint(text)),
                }
            }
            _ => return Err(c.unexpected().into()),
        }
        if !c.eat(&Tok::Comma) && c.peek() != Some(&Tok::Bar) {
            return Err(c.unexpected().into());
        }
    }
    let main = sequent_body(&mut c, &[Tok::Le1, Tok::LeD])?;
    c.expect(&Tok::RAngle)?;
    c.finish()?;
    for (q, p) in raw_cvc {
        cvc.push((q, SVar::new(p, q.sort.flip())));
    }
    let mut sys = System::from_sequent(main);
    sys.stb = stb;
    sys.cvc = cvc;
    let extra: Vec<Sf> = sys.vars().into_iter().map(Sf::Var).collect();
    check_var_sorts(extra.iter().chain([&sys.main.lhs, &sys.main.rhs]))?;
    sys.next = sys.vars().iter().map(|v| v.idx + 1).max().unwrap_or(0);
    Ok(sys)
}

impl std::str::FromStr for System {
    type Err = SystemParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_system(s)
    }
}
