use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::lexer::{Cursor, Tok};
use super::{ParseError, Sort, SortError};

/// A sorted propositional variable. Printed `P<idx>`; the sort is recovered
/// from the position when parsing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SVar {
    pub idx: u32,
    pub sort: Sort,
}

impl SVar {
    pub fn new(idx: u32, sort: Sort) -> Self {
        SVar { idx, sort }
    }
}

impl fmt::Display for SVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}", self.idx)
    }
}

/// Formulas of the sorted modal language.
///
/// | node | argument sorts | result |
/// |---|---|---|
/// | `DiaV`, `Box1`, `BoxM` | 1 | 1 |
/// | `DiaM`, `BoxD`, `BoxV` | ∂ | ∂ |
/// | `TDown` | 1 | ∂ |
/// | `BTDown` | ∂ | 1 |
/// | `Odot`, `RSpoon` | 1, 1 | 1 |
/// | `TRight` | 1, ∂ | ∂ |
/// | `Prime` | s | flip s |
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sf {
    Var(SVar),
    Top(Sort),
    Bot(Sort),
    Cap(Box<Sf>, Box<Sf>),
    Cup(Box<Sf>, Box<Sf>),
    Prime(Box<Sf>),
    DiaV(Box<Sf>),
    DiaM(Box<Sf>),
    Box1(Box<Sf>),
    BoxD(Box<Sf>),
    BoxM(Box<Sf>),
    BoxV(Box<Sf>),
    TDown(Box<Sf>),
    BTDown(Box<Sf>),
    Odot(Box<Sf>, Box<Sf>),
    RSpoon(Box<Sf>, Box<Sf>),
    TRight(Box<Sf>, Box<Sf>),
}

/// Unary operator tags, used by generic code that inspects or rebuilds nodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Un {
    Prime,
    DiaV,
    DiaM,
    Box1,
    BoxD,
    BoxM,
    BoxV,
    TDown,
    BTDown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Bin {
    Cap,
    Cup,
    Odot,
    RSpoon,
    TRight,
}

impl Un {
    pub fn name(self) -> &'static str {
        match self {
            Un::Prime => "'",
            Un::DiaV => "diav",
            Un::DiaM => "diam",
            Un::Box1 => "box1",
            Un::BoxD => "boxd",
            Un::BoxM => "boxm",
            Un::BoxV => "boxv",
            Un::TDown => "tdown",
            Un::BTDown => "btdown",
        }
    }

    /// Argument and result sort; `None` for the sort-polymorphic prime.
    pub fn signature(self) -> Option<(Sort, Sort)> {
        use Sort::*;
        match self {
            Un::Prime => None,
            Un::DiaV | Un::Box1 | Un::BoxM => Some((One, One)),
            Un::DiaM | Un::BoxD | Un::BoxV => Some((Dual, Dual)),
            Un::TDown => Some((One, Dual)),
            Un::BTDown => Some((Dual, One)),
        }
    }

    pub fn apply(self, a: Sf) -> Sf {
        let a = Box::new(a);
        match self {
            Un::Prime => Sf::Prime(a),
            Un::DiaV => Sf::DiaV(a),
            Un::DiaM => Sf::DiaM(a),
            Un::Box1 => Sf::Box1(a),
            Un::BoxD => Sf::BoxD(a),
            Un::BoxM => Sf::BoxM(a),
            Un::BoxV => Sf::BoxV(a),
            Un::TDown => Sf::TDown(a),
            Un::BTDown => Sf::BTDown(a),
        }
    }
}

impl Bin {
    pub fn name(self) -> &'static str {
        match self {
            Bin::Cap => "cap",
            Bin::Cup => "cup",
            Bin::Odot => "odot",
            Bin::RSpoon => "rspoon",
            Bin::TRight => "tright",
        }
    }

    /// Argument sorts and result sort; `None` for the lattice operations.
    pub fn signature(self) -> Option<(Sort, Sort, Sort)> {
        use Sort::*;
        match self {
            Bin::Cap | Bin::Cup => None,
            Bin::Odot | Bin::RSpoon => Some((One, One, One)),
            Bin::TRight => Some((One, Dual, Dual)),
        }
    }

    fn prec(self) -> u8 {
        match self {
            Bin::RSpoon => 1,
            Bin::Cup => 2,
            Bin::Cap => 3,
            Bin::Odot | Bin::TRight => 4,
        }
    }

    pub fn apply(self, a: Sf, b: Sf) -> Sf {
        let (a, b) = (Box::new(a), Box::new(b));
        match self {
            Bin::Cap => Sf::Cap(a, b),
            Bin::Cup => Sf::Cup(a, b),
            Bin::Odot => Sf::Odot(a, b),
            Bin::RSpoon => Sf::RSpoon(a, b),
            Bin::TRight => Sf::TRight(a, b),
        }
    }
}

/// Borrowed view of a node.
pub enum View<'a> {
    Var(SVar),
    Top(Sort),
    Bot(Sort),
    Un(Un, &'a Sf),
    Bin(Bin, &'a Sf, &'a Sf),
}

impl Sf {
    pub fn var(idx: u32, sort: Sort) -> Sf {
        Sf::Var(SVar::new(idx, sort))
    }
    pub fn prime(a: Sf) -> Sf {
        Sf::Prime(Box::new(a))
    }
    pub fn primes(a: Sf, n: usize) -> Sf {
        (0..n).fold(a, |acc, _| Sf::prime(acc))
    }
    pub fn cap(a: Sf, b: Sf) -> Sf {
        Sf::Cap(Box::new(a), Box::new(b))
    }
    pub fn cup(a: Sf, b: Sf) -> Sf {
        Sf::Cup(Box::new(a), Box::new(b))
    }

    pub fn view(&self) -> View<'_> {
        match self {
            Sf::Var(v) => View::Var(*v),
            Sf::Top(s) => View::Top(*s),
            Sf::Bot(s) => View::Bot(*s),
            Sf::Prime(a) => View::Un(Un::Prime, a),
            Sf::DiaV(a) => View::Un(Un::DiaV, a),
            Sf::DiaM(a) => View::Un(Un::DiaM, a),
            Sf::Box1(a) => View::Un(Un::Box1, a),
            Sf::BoxD(a) => View::Un(Un::BoxD, a),
            Sf::BoxM(a) => View::Un(Un::BoxM, a),
            Sf::BoxV(a) => View::Un(Un::BoxV, a),
            Sf::TDown(a) => View::Un(Un::TDown, a),
            Sf::BTDown(a) => View::Un(Un::BTDown, a),
            Sf::Cap(a, b) => View::Bin(Bin::Cap, a, b),
            Sf::Cup(a, b) => View::Bin(Bin::Cup, a, b),
            Sf::Odot(a, b) => View::Bin(Bin::Odot, a, b),
            Sf::RSpoon(a, b) => View::Bin(Bin::RSpoon, a, b),
            Sf::TRight(a, b) => View::Bin(Bin::TRight, a, b),
        }
    }

    pub fn children_mut(&mut self) -> Vec<&mut Sf> {
        match self {
            Sf::Var(_) | Sf::Top(_) | Sf::Bot(_) => vec![],
            Sf::Prime(a)
            | Sf::DiaV(a)
            | Sf::DiaM(a)
            | Sf::Box1(a)
            | Sf::BoxD(a)
            | Sf::BoxM(a)
            | Sf::BoxV(a)
            | Sf::TDown(a)
            | Sf::BTDown(a) => vec![&mut **a],
            Sf::Cap(a, b) | Sf::Cup(a, b) | Sf::Odot(a, b) | Sf::RSpoon(a, b) | Sf::TRight(a, b) => {
                vec![&mut **a, &mut **b]
            }
        }
    }

    pub fn children(&self) -> Vec<&Sf> {
        match self.view() {
            View::Var(_) | View::Top(_) | View::Bot(_) => vec![],
            View::Un(_, a) => vec![a],
            View::Bin(_, a, b) => vec![a, b],
        }
    }

    /// Sort of the formula, assuming it is well-sorted.
    pub fn sort(&self) -> Sort {
        match self.view() {
            View::Var(v) => v.sort,
            View::Top(s) | View::Bot(s) => s,
            View::Un(Un::Prime, a) => a.sort().flip(),
            View::Un(op, _) => op.signature().unwrap().1,
            View::Bin(Bin::Cap | Bin::Cup, a, _) => a.sort(),
            View::Bin(op, _, _) => op.signature().unwrap().2,
        }
    }

    /// Checks every node against its signature and returns the sort.
    pub fn check(&self) -> Result<Sort, SortError> {
        match self.view() {
            View::Var(v) => Ok(v.sort),
            View::Top(s) | View::Bot(s) => Ok(s),
            View::Un(Un::Prime, a) => Ok(a.check()?.flip()),
            View::Un(op, a) => {
                let (arg, res) = op.signature().unwrap();
                let found = a.check()?;
                if found != arg {
                    return Err(SortError::Argument {
                        op: op.name(),
                        expected: arg,
                        found,
                    });
                }
                Ok(res)
            }
            View::Bin(op, a, b) => {
                let (sa, sb) = (a.check()?, b.check()?);
                match op.signature() {
                    None if sa == sb => Ok(sa),
                    None => Err(SortError::Mismatch {
                        op: op.name(),
                        left: sa,
                        right: sb,
                    }),
                    Some((ea, eb, res)) => {
                        if sa != ea {
                            Err(SortError::Argument {
                                op: op.name(),
                                expected: ea,
                                found: sa,
                            })
                        } else if sb != eb {
                            Err(SortError::Argument {
                                op: op.name(),
                                expected: eb,
                                found: sb,
                            })
                        } else {
                            Ok(res)
                        }
                    }
                }
            }
        }
    }

    pub fn vars(&self, out: &mut BTreeSet<SVar>) {
        if let Sf::Var(v) = self {
            out.insert(*v);
        }
        for c in self.children() {
            c.vars(out);
        }
    }

    pub fn var_set(&self) -> BTreeSet<SVar> {
        let mut out = BTreeSet::new();
        self.vars(&mut out);
        out
    }

    pub fn contains_var(&self, v: SVar) -> bool {
        match self {
            Sf::Var(w) => *w == v,
            _ => self.children().into_iter().any(|c| c.contains_var(v)),
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Sf::size).sum::<usize>()
    }

    /// Replaces every subterm equal to `from` by `to`, outermost first.
    pub fn replace(&self, from: &Sf, to: &Sf) -> Sf {
        if self == from {
            return to.clone();
        }
        let mut out = self.clone();
        for c in out.children_mut() {
            *c = c.replace(from, to);
        }
        out
    }

    pub fn subst_var(&self, v: SVar, to: &Sf) -> Sf {
        self.replace(&Sf::Var(v), to)
    }

    pub fn at(&self, path: &[usize]) -> Option<&Sf> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.children().get(i).and_then(|c| c.at(rest)),
        }
    }

    pub fn at_mut(&mut self, path: &[usize]) -> Option<&mut Sf> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.children_mut().into_iter().nth(i).and_then(|c| c.at_mut(rest)),
        }
    }

    /// All node paths in pre-order.
    pub fn paths(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        fn go(f: &Sf, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            out.push(cur.clone());
            for (i, c) in f.children().into_iter().enumerate() {
                cur.push(i);
                go(c, cur, out);
                cur.pop();
            }
        }
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Number of consecutive primes at the root and the formula below them.
    pub fn strip_primes(&self) -> (usize, &Sf) {
        let mut n = 0;
        let mut cur = self;
        while let Sf::Prime(a) = cur {
            n += 1;
            cur = a;
        }
        (n, cur)
    }

    /// Flattens a tree of `Cap` nodes into its conjuncts.
    pub fn conjuncts(&self) -> Vec<&Sf> {
        match self {
            Sf::Cap(a, b) => {
                let mut v = a.conjuncts();
                v.extend(b.conjuncts());
                v
            }
            _ => vec![self],
        }
    }

    /// Renames variables through `map`; unmapped variables are kept.
    pub fn rename(&self, map: &BTreeMap<SVar, SVar>) -> Sf {
        match self {
            Sf::Var(v) => Sf::Var(*map.get(v).unwrap_or(v)),
            _ => {
                let mut out = self.clone();
                for c in out.children_mut() {
                    *c = c.rename(map);
                }
                out
            }
        }
    }

    fn prec(&self) -> u8 {
        match self.view() {
            View::Bin(op, _, _) => op.prec(),
            View::Un(Un::Prime, _) | View::Var(_) | View::Top(_) | View::Bot(_) => 6,
            View::Un(..) => 5,
        }
    }

    /// Rebuilds the tree with sorts of variables and constants assigned
    /// top-down from the expected sort of the root.
    pub fn retype(&mut self, expected: Sort) -> Result<(), SortError> {
        match self {
            Sf::Var(v) => {
                v.sort = expected;
                return Ok(());
            }
            Sf::Top(s) | Sf::Bot(s) => {
                *s = expected;
                return Ok(());
            }
            _ => {}
        }
        let kind = match self.view() {
            View::Un(op, _) => Ok(op),
            View::Bin(op, _, _) => Err(op),
            _ => unreachable!(),
        };
        match kind {
            Ok(Un::Prime) => self.children_mut()[0].retype(expected.flip()),
            Ok(op) => {
                let (arg, res) = op.signature().unwrap();
                if res != expected {
                    return Err(SortError::Argument {
                        op: op.name(),
                        expected,
                        found: res,
                    });
                }
                self.children_mut()[0].retype(arg)
            }
            Err(op) => {
                let (ea, eb) = match op.signature() {
                    None => (expected, expected),
                    Some((ea, eb, res)) => {
                        if res != expected {
                            return Err(SortError::Argument {
                                op: op.name(),
                                expected,
                                found: res,
                            });
                        }
                        (ea, eb)
                    }
                };
                let mut ch = self.children_mut();
                ch[0].retype(ea)?;
                ch[1].retype(eb)
            }
        }
    }

    /// Sort forced by the operators of the formula, if any.
    fn forced_sort(&self) -> Option<Sort> {
        match self.view() {
            View::Var(_) | View::Top(_) | View::Bot(_) => None,
            View::Un(Un::Prime, a) => a.forced_sort().map(Sort::flip),
            View::Un(op, _) => Some(op.signature().unwrap().1),
            View::Bin(Bin::Cap | Bin::Cup, a, b) => a.forced_sort().or_else(|| b.forced_sort()),
            View::Bin(op, _, _) => Some(op.signature().unwrap().2),
        }
    }
}

impl fmt::Display for Sf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn at(f: &mut fmt::Formatter<'_>, a: &Sf, min: u8) -> fmt::Result {
            if a.prec() < min {
                write!(f, "({a})")
            } else {
                write!(f, "{a}")
            }
        }
        match self.view() {
            View::Var(v) => write!(f, "{v}"),
            View::Top(_) => f.write_str("top"),
            View::Bot(_) => f.write_str("bot"),
            View::Un(Un::Prime, a) => {
                at(f, a, 6)?;
                f.write_str("'")
            }
            View::Un(op, a) => {
                write!(f, "{} ", op.name())?;
                at(f, a, 5)
            }
            View::Bin(op, a, b) => {
                let p = op.prec();
                // rspoon associates to the right, the others to the left.
                let (pl, pr) = if op == Bin::RSpoon { (p + 1, p) } else { (p, p + 1) };
                at(f, a, pl)?;
                write!(f, " {} ", op.name())?;
                at(f, b, pr)
            }
        }
    }
}

/// A sorted sequent `lhs ⊢_s rhs`; both sides have sort `sort`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SortedSequent {
    pub lhs: Sf,
    pub rhs: Sf,
}

impl SortedSequent {
    pub fn new(lhs: Sf, rhs: Sf) -> Self {
        SortedSequent { lhs, rhs }
    }

    pub fn sort(&self) -> Sort {
        self.lhs.sort()
    }

    pub fn check(&self) -> Result<Sort, SortError> {
        let (a, b) = (self.lhs.check()?, self.rhs.check()?);
        if a != b {
            return Err(SortError::Mismatch {
                op: "|-",
                left: a,
                right: b,
            });
        }
        Ok(a)
    }

    pub fn var_set(&self) -> BTreeSet<SVar> {
        let mut out = BTreeSet::new();
        self.lhs.vars(&mut out);
        self.rhs.vars(&mut out);
        out
    }
}

impl fmt::Display for SortedSequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} |-{} {}", self.lhs, self.sort().suffix(), self.rhs)
    }
}

const UNARY_OPS: [Un; 8] = [
    Un::DiaV,
    Un::DiaM,
    Un::Box1,
    Un::BoxD,
    Un::BoxM,
    Un::BoxV,
    Un::TDown,
    Un::BTDown,
];

pub(crate) fn parse_sf(c: &mut Cursor) -> Result<Sf, ParseError> {
    let lhs = sf_bin(c, 2)?;
    if c.eat_ident("rspoon") {
        Ok(Bin::RSpoon.apply(lhs, parse_sf(c)?))
    } else {
        Ok(lhs)
    }
}

/// Left-associative levels: 2 = cup, 3 = cap, 4 = odot / tright.
fn sf_bin(c: &mut Cursor, level: u8) -> Result<Sf, ParseError> {
    if level > 4 {
        return sf_unary(c);
    }
    let mut acc = sf_bin(c, level + 1)?;
    loop {
        let op = match (level, c.peek_ident()) {
            (2, Some("cup")) => Bin::Cup,
            (3, Some("cap")) => Bin::Cap,
            (4, Some("odot")) => Bin::Odot,
            (4, Some("tright")) => Bin::TRight,
            _ => return Ok(acc),
        };
        c.bump();
        acc = op.apply(acc, sf_bin(c, level + 1)?);
    }
}

fn sf_unary(c: &mut Cursor) -> Result<Sf, ParseError> {
    if let Some(name) = c.peek_ident() {
        if let Some(op) = UNARY_OPS.iter().find(|op| op.name() == name) {
            let op = *op;
            c.bump();
            return Ok(op.apply(sf_unary(c)?));
        }
    }
    let mut a = sf_atom(c)?;
    while c.eat(&Tok::Prime) {
        a = Sf::prime(a);
    }
    Ok(a)
}

fn sf_atom(c: &mut Cursor) -> Result<Sf, ParseError> {
    match c.bump() {
        Some(Tok::LParen) => {
            let a = parse_sf(c)?;
            c.expect(&Tok::RParen)?;
            Ok(a)
        }
        Some(Tok::Ident(s)) => match s.as_str() {
            "top" => Ok(Sf::Top(Sort::One)),
            "bot" => Ok(Sf::Bot(Sort::One)),
            _ => parse_svar_name(&s)
                .map(|i| Sf::var(i, Sort::One))
                .ok_or(ParseError::UnknownIdent(s)),
        },
        Some(_) => {
            c.i_back();
            Err(c.unexpected())
        }
        None => Err(ParseError::Eof),
    }
}

pub(crate) fn parse_svar_name(s: &str) -> Option<u32> {
    s.strip_prefix('P')?.parse().ok()
}

/// Rejects a formula in which one index is used at two sorts.
pub fn check_var_sorts<'a>(fs: impl IntoIterator<Item = &'a Sf>) -> Result<(), SortError> {
    let mut seen: BTreeMap<u32, Sort> = BTreeMap::new();
    for f in fs {
        for v in f.var_set() {
            if let Some(s) = seen.insert(v.idx, v.sort) {
                if s != v.sort {
                    return Err(SortError::Conflict(v.to_string()));
                }
            }
        }
    }
    Ok(())
}

/// Parses a sorted formula. Without an expected sort the root sort is taken
/// from the outermost sort-fixing operator, defaulting to sort 1.
pub fn parse_formula(src: &str, expected: Option<Sort>) -> Result<Sf, ParseError> {
    let mut c = Cursor::new(src)?;
    let mut a = parse_sf(&mut c)?;
    c.finish()?;
    let s = expected.or_else(|| a.forced_sort()).unwrap_or(Sort::One);
    a.retype(s)?;
    check_var_sorts([&a])?;
    Ok(a)
}

pub fn parse_sequent(src: &str) -> Result<SortedSequent, ParseError> {
    let mut c = Cursor::new(src)?;
    let seq = sequent_body(&mut c, &[Tok::Turnstile1, Tok::TurnstileD])?;
    c.finish()?;
    Ok(seq)
}

/// `lhs OP rhs` where OP is one of the two sort-indexed tokens in `ops`
/// (sort 1 first).
pub(crate) fn sequent_body(c: &mut Cursor, ops: &[Tok; 2]) -> Result<SortedSequent, ParseError> {
    let mut lhs = parse_sf(c)?;
    let sort = if c.eat(&ops[0]) {
        Sort::One
    } else if c.eat(&ops[1]) {
        Sort::Dual
    } else {
        return Err(c.unexpected());
    };
    let mut rhs = parse_sf(c)?;
    lhs.retype(sort)?;
    rhs.retype(sort)?;
    check_var_sorts([&lhs, &rhs])?;
    Ok(SortedSequent { lhs, rhs })
}

impl std::str::FromStr for SortedSequent {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_sequent(s)
    }
}
