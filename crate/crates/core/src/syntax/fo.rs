use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::lexer::{Cursor, Tok};
use super::sorted::{parse_svar_name, SVar};
use super::{ParseError, Sort, SortError};

/// An individual variable of the two-sorted first-order language.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ivar {
    pub name: String,
    pub sort: Sort,
}

impl Ivar {
    pub fn new(name: impl Into<String>, sort: Sort) -> Self {
        Ivar {
            name: name.into(),
            sort,
        }
    }
}

impl fmt::Display for Ivar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Letters of a boxed atom. Each names the double-dual relation read by the
/// corresponding box: `M` is R''□ (1 to 1), `Neg` is R''∼ (1 to ∂), `V` is
/// R''◇ (∂ to ∂).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    M,
    Neg,
    V,
}

impl Letter {
    pub fn source(self) -> Sort {
        match self {
            Letter::M | Letter::Neg => Sort::One,
            Letter::V => Sort::Dual,
        }
    }

    pub fn target(self) -> Sort {
        match self {
            Letter::M => Sort::One,
            Letter::Neg | Letter::V => Sort::Dual,
        }
    }

    fn tag(self) -> &'static str {
        match self {
            Letter::M => "box",
            Letter::Neg => "neg",
            Letter::V => "dia",
        }
    }
}

/// Relation symbols. Frame relations, their Galois duals (`*P`) and double
/// duals (`*DD`), the ternary R¹¹¹ read by fusion and its residual, and
/// compositions of double-dual relations along a word of box letters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rel {
    I,
    Dia,
    Box,
    Neg,
    T,
    DiaP,
    BoxP,
    NegP,
    TP,
    DiaDD,
    BoxDD,
    NegDD,
    R111,
    Word(Vec<Letter>),
}

impl Rel {
    /// Canonical relation for a word; single letters become plain double duals.
    pub fn word(w: &[Letter]) -> Rel {
        match w {
            [Letter::M] => Rel::BoxDD,
            [Letter::Neg] => Rel::NegDD,
            [Letter::V] => Rel::DiaDD,
            _ => Rel::Word(w.to_vec()),
        }
    }

    pub fn signature(&self) -> Vec<Sort> {
        use Sort::*;
        match self {
            Rel::I => vec![One, Dual],
            Rel::Dia => vec![One, One],
            Rel::Box => vec![Dual, Dual],
            Rel::Neg => vec![Dual, One],
            Rel::T => vec![Dual, One, Dual],
            Rel::DiaP => vec![Dual, One],
            Rel::BoxP => vec![One, Dual],
            Rel::NegP => vec![One, One],
            Rel::TP => vec![One, One, Dual],
            Rel::DiaDD => vec![Dual, Dual],
            Rel::BoxDD => vec![One, One],
            Rel::NegDD => vec![One, Dual],
            Rel::R111 => vec![One, One, One],
            Rel::Word(w) => vec![w[0].source(), w[w.len() - 1].target()],
        }
    }

    pub fn name(&self) -> String {
        match self {
            Rel::I => "I".into(),
            Rel::Dia => "R_dia".into(),
            Rel::Box => "R_box".into(),
            Rel::Neg => "R_neg".into(),
            Rel::T => "T".into(),
            Rel::DiaP => "R'_dia".into(),
            Rel::BoxP => "R'_box".into(),
            Rel::NegP => "R'_neg".into(),
            Rel::TP => "T'".into(),
            Rel::DiaDD => "R''_dia".into(),
            Rel::BoxDD => "R''_box".into(),
            Rel::NegDD => "R''_neg".into(),
            Rel::R111 => "R111".into(),
            Rel::Word(w) => {
                let tags: Vec<&str> = w.iter().map(|l| l.tag()).collect();
                format!("R''_{}", tags.join("."))
            }
        }
    }

    fn from_name(s: &str) -> Option<Rel> {
        Some(match s {
            "I" => Rel::I,
            "R_dia" => Rel::Dia,
            "R_box" => Rel::Box,
            "R_neg" => Rel::Neg,
            "T" => Rel::T,
            "R'_dia" => Rel::DiaP,
            "R'_box" => Rel::BoxP,
            "R'_neg" => Rel::NegP,
            "T'" => Rel::TP,
            "R''_dia" => Rel::DiaDD,
            "R''_box" => Rel::BoxDD,
            "R''_neg" => Rel::NegDD,
            "R111" => Rel::R111,
            _ => {
                let tags = s.strip_prefix("R''_")?;
                let w = tags
                    .split('.')
                    .map(|t| match t {
                        "box" => Some(Letter::M),
                        "neg" => Some(Letter::Neg),
                        "dia" => Some(Letter::V),
                        _ => None,
                    })
                    .collect::<Option<Vec<_>>>()?;
                if w.windows(2).any(|p| p[0].target() != p[1].source()) {
                    return None;
                }
                Rel::word(&w)
            }
        })
    }

    /// Binary relations print infix; `I` and the ternary ones print prefix.
    fn infix(&self) -> bool {
        self.signature().len() == 2 && *self != Rel::I
    }
}

/// Formulas of the two-sorted first-order language, with monadic
/// second-order predicate variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Fo {
    True,
    False,
    Atom(Rel, Vec<Ivar>),
    Eq(Ivar, Ivar),
    Leq(Ivar, Ivar),
    Pred(SVar, Ivar),
    Not(Box<Fo>),
    And(Box<Fo>, Box<Fo>),
    Or(Box<Fo>, Box<Fo>),
    Imp(Box<Fo>, Box<Fo>),
    Forall(Ivar, Box<Fo>),
    Exists(Ivar, Box<Fo>),
    Forall2(SVar, Box<Fo>),
}

impl Fo {
    pub fn not(a: Fo) -> Fo {
        Fo::Not(Box::new(a))
    }
    pub fn and(a: Fo, b: Fo) -> Fo {
        Fo::And(Box::new(a), Box::new(b))
    }
    pub fn or(a: Fo, b: Fo) -> Fo {
        Fo::Or(Box::new(a), Box::new(b))
    }
    pub fn imp(a: Fo, b: Fo) -> Fo {
        Fo::Imp(Box::new(a), Box::new(b))
    }
    pub fn forall(v: Ivar, a: Fo) -> Fo {
        Fo::Forall(v, Box::new(a))
    }
    pub fn exists(v: Ivar, a: Fo) -> Fo {
        Fo::Exists(v, Box::new(a))
    }
    pub fn forall2(p: SVar, a: Fo) -> Fo {
        Fo::Forall2(p, Box::new(a))
    }
    pub fn atom(r: Rel, args: &[&Ivar]) -> Fo {
        Fo::Atom(r, args.iter().map(|v| (*v).clone()).collect())
    }
    pub fn rel2(r: Rel, a: &Ivar, b: &Ivar) -> Fo {
        Fo::Atom(r, vec![a.clone(), b.clone()])
    }

    /// Right-nested conjunction; `True` when empty.
    pub fn conj(parts: impl IntoIterator<Item = Fo>) -> Fo {
        let v: Vec<Fo> = parts.into_iter().collect();
        v.into_iter().rev().reduce(|acc, a| Fo::and(a, acc)).unwrap_or(Fo::True)
    }

    /// Right-nested disjunction; `False` when empty.
    pub fn disj(parts: impl IntoIterator<Item = Fo>) -> Fo {
        let v: Vec<Fo> = parts.into_iter().collect();
        v.into_iter().rev().reduce(|acc, a| Fo::or(a, acc)).unwrap_or(Fo::False)
    }

    pub fn forall_many(vs: &[Ivar], body: Fo) -> Fo {
        vs.iter().rev().fold(body, |acc, v| Fo::forall(v.clone(), acc))
    }

    pub fn free_vars(&self) -> BTreeSet<Ivar> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Ivar>, out: &mut BTreeSet<Ivar>) {
        let mut add = |v: &Ivar, bound: &Vec<Ivar>| {
            if !bound.contains(v) {
                out.insert(v.clone());
            }
        };
        match self {
            Fo::True | Fo::False => {}
            Fo::Atom(_, args) => args.iter().for_each(|v| add(v, bound)),
            Fo::Eq(a, b) | Fo::Leq(a, b) => {
                add(a, bound);
                add(b, bound);
            }
            Fo::Pred(_, a) => add(a, bound),
            Fo::Not(a) | Fo::Forall2(_, a) => a.collect_free(bound, out),
            Fo::And(a, b) | Fo::Or(a, b) | Fo::Imp(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Fo::Forall(v, a) | Fo::Exists(v, a) => {
                bound.push(v.clone());
                a.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Every variable name appearing anywhere, bound or free.
    pub fn all_names(&self, out: &mut BTreeSet<String>) {
        match self {
            Fo::True | Fo::False => {}
            Fo::Atom(_, args) => out.extend(args.iter().map(|v| v.name.clone())),
            Fo::Eq(a, b) | Fo::Leq(a, b) => {
                out.insert(a.name.clone());
                out.insert(b.name.clone());
            }
            Fo::Pred(_, a) => {
                out.insert(a.name.clone());
            }
            Fo::Not(a) | Fo::Forall2(_, a) => a.all_names(out),
            Fo::And(a, b) | Fo::Or(a, b) | Fo::Imp(a, b) => {
                a.all_names(out);
                b.all_names(out);
            }
            Fo::Forall(v, a) | Fo::Exists(v, a) => {
                out.insert(v.name.clone());
                a.all_names(out);
            }
        }
    }

    pub fn pred_vars(&self, out: &mut BTreeSet<SVar>) {
        match self {
            Fo::Pred(p, _) => {
                out.insert(*p);
            }
            Fo::Not(a) | Fo::Forall(_, a) | Fo::Exists(_, a) => a.pred_vars(out),
            Fo::Forall2(p, a) => {
                out.insert(*p);
                a.pred_vars(out);
            }
            Fo::And(a, b) | Fo::Or(a, b) | Fo::Imp(a, b) => {
                a.pred_vars(out);
                b.pred_vars(out);
            }
            _ => {}
        }
    }

    /// Capture-avoiding substitution of `to` for the free variable `from`.
    pub fn subst(&self, from: &Ivar, to: &Ivar) -> Fo {
        let r = |v: &Ivar| if v == from { to.clone() } else { v.clone() };
        match self {
            Fo::True | Fo::False => self.clone(),
            Fo::Atom(rel, args) => Fo::Atom(rel.clone(), args.iter().map(r).collect()),
            Fo::Eq(a, b) => Fo::Eq(r(a), r(b)),
            Fo::Leq(a, b) => Fo::Leq(r(a), r(b)),
            Fo::Pred(p, a) => Fo::Pred(*p, r(a)),
            Fo::Not(a) => Fo::not(a.subst(from, to)),
            Fo::And(a, b) => Fo::and(a.subst(from, to), b.subst(from, to)),
            Fo::Or(a, b) => Fo::or(a.subst(from, to), b.subst(from, to)),
            Fo::Imp(a, b) => Fo::imp(a.subst(from, to), b.subst(from, to)),
            Fo::Forall2(p, a) => Fo::forall2(*p, a.subst(from, to)),
            Fo::Forall(v, a) | Fo::Exists(v, a) => {
                let is_all = matches!(self, Fo::Forall(..));
                let wrap = |v: Ivar, body: Fo| if is_all { Fo::forall(v, body) } else { Fo::exists(v, body) };
                if v == from {
                    return self.clone();
                }
                if v == to {
                    let mut names = BTreeSet::new();
                    a.all_names(&mut names);
                    names.insert(from.name.clone());
                    names.insert(to.name.clone());
                    let fresh = Ivar::new(fresh_name(&v.name, &names), v.sort);
                    let body = a.subst(v, &fresh).subst(from, to);
                    return wrap(fresh, body);
                }
                wrap(v.clone(), a.subst(from, to))
            }
        }
    }

    /// Replaces each `P(t)` by `λ(P)(t)` for the predicates in `map`.
    pub fn subst_pred(&self, map: &BTreeMap<SVar, Lambda>) -> Fo {
        match self {
            Fo::Pred(p, t) => match map.get(p) {
                Some(l) => l.apply(t),
                None => self.clone(),
            },
            Fo::Not(a) => Fo::not(a.subst_pred(map)),
            Fo::And(a, b) => Fo::and(a.subst_pred(map), b.subst_pred(map)),
            Fo::Or(a, b) => Fo::or(a.subst_pred(map), b.subst_pred(map)),
            Fo::Imp(a, b) => Fo::imp(a.subst_pred(map), b.subst_pred(map)),
            Fo::Forall(v, a) => Fo::forall(v.clone(), a.subst_pred(map)),
            Fo::Exists(v, a) => Fo::exists(v.clone(), a.subst_pred(map)),
            Fo::Forall2(p, a) => {
                if map.contains_key(p) {
                    let mut m = map.clone();
                    m.remove(p);
                    Fo::forall2(*p, a.subst_pred(&m))
                } else {
                    Fo::forall2(*p, a.subst_pred(map))
                }
            }
            _ => self.clone(),
        }
    }

    /// Equality up to renaming of bound variables.
    pub fn alpha_eq(&self, other: &Fo) -> bool {
        fn go(a: &Fo, b: &Fo, env: &mut Vec<(Ivar, Ivar)>) -> bool {
            let same = |x: &Ivar, y: &Ivar, env: &Vec<(Ivar, Ivar)>| {
                for (l, r) in env.iter().rev() {
                    if l == x || r == y {
                        return l == x && r == y;
                    }
                }
                x == y
            };
            match (a, b) {
                (Fo::True, Fo::True) | (Fo::False, Fo::False) => true,
                (Fo::Atom(r1, a1), Fo::Atom(r2, a2)) => {
                    r1 == r2 && a1.len() == a2.len() && a1.iter().zip(a2).all(|(x, y)| same(x, y, env))
                }
                (Fo::Eq(a1, b1), Fo::Eq(a2, b2)) | (Fo::Leq(a1, b1), Fo::Leq(a2, b2)) => {
                    same(a1, a2, env) && same(b1, b2, env)
                }
                (Fo::Pred(p1, a1), Fo::Pred(p2, a2)) => p1 == p2 && same(a1, a2, env),
                (Fo::Not(x), Fo::Not(y)) => go(x, y, env),
                (Fo::And(a1, b1), Fo::And(a2, b2))
                | (Fo::Or(a1, b1), Fo::Or(a2, b2))
                | (Fo::Imp(a1, b1), Fo::Imp(a2, b2)) => go(a1, a2, env) && go(b1, b2, env),
                (Fo::Forall(v1, x), Fo::Forall(v2, y)) | (Fo::Exists(v1, x), Fo::Exists(v2, y)) => {
                    if v1.sort != v2.sort {
                        return false;
                    }
                    env.push((v1.clone(), v2.clone()));
                    let r = go(x, y, env);
                    env.pop();
                    r
                }
                (Fo::Forall2(p1, x), Fo::Forall2(p2, y)) => p1 == p2 && go(x, y, env),
                _ => false,
            }
        }
        go(self, other, &mut Vec::new())
    }

    pub fn size(&self) -> usize {
        match self {
            Fo::Not(a) | Fo::Forall(_, a) | Fo::Exists(_, a) | Fo::Forall2(_, a) => 1 + a.size(),
            Fo::And(a, b) | Fo::Or(a, b) | Fo::Imp(a, b) => 1 + a.size() + b.size(),
            _ => 1,
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Fo::Imp(..) => 1,
            Fo::Or(..) => 2,
            Fo::And(..) => 3,
            Fo::Forall(..) | Fo::Exists(..) | Fo::Forall2(..) => 0,
            _ => 5,
        }
    }
}

/// Fresh name derived from `base` that is not in `used`.
pub fn fresh_name(base: &str, used: &BTreeSet<String>) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    (1..).map(|i| format!("{stem}{i}")).find(|n| !used.contains(n)).unwrap()
}

/// A one-place predicate `λparam. body`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lambda {
    pub param: Ivar,
    pub body: Fo,
}

impl Lambda {
    pub fn new(param: Ivar, body: Fo) -> Self {
        Lambda { param, body }
    }

    pub fn apply(&self, arg: &Ivar) -> Fo {
        self.body.subst(&self.param, arg)
    }
}

impl fmt::Display for Lambda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\\{}. {}", self.param, self.body)
    }
}

fn quant_name(q: &str, s: Sort) -> String {
    format!("{q}_{}", s.suffix())
}

impl fmt::Display for Fo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Quantifiers extend as far right as possible, so a quantified
        // operand of a binary connective is always parenthesised.
        fn operand(f: &mut fmt::Formatter<'_>, a: &Fo, min: u8) -> fmt::Result {
            if a.prec() < min {
                write!(f, "({a})")
            } else {
                write!(f, "{a}")
            }
        }
        fn body(f: &mut fmt::Formatter<'_>, a: &Fo) -> fmt::Result {
            if (1..=3).contains(&a.prec()) {
                write!(f, "({a})")
            } else {
                write!(f, "{a}")
            }
        }
        match self {
            Fo::True => f.write_str("true"),
            Fo::False => f.write_str("false"),
            Fo::Atom(r, args) if r.infix() => write!(f, "{} {} {}", args[0], r.name(), args[1]),
            Fo::Atom(r, args) => {
                let a: Vec<&str> = args.iter().map(|v| v.name.as_str()).collect();
                write!(f, "{}({})", r.name(), a.join(","))
            }
            Fo::Eq(a, b) => write!(f, "{a} = {b}"),
            Fo::Leq(a, b) => write!(f, "{a} <= {b}"),
            Fo::Pred(p, a) => write!(f, "{p}({a})"),
            Fo::Not(a) => match &**a {
                Fo::Eq(x, y) => write!(f, "{x} != {y}"),
                _ => {
                    f.write_str("~")?;
                    operand(f, a, 5)
                }
            },
            Fo::And(a, b) => {
                operand(f, a, 4)?;
                f.write_str(" & ")?;
                operand(f, b, 3)
            }
            Fo::Or(a, b) => {
                operand(f, a, 3)?;
                f.write_str(" | ")?;
                operand(f, b, 2)
            }
            Fo::Imp(a, b) => {
                operand(f, a, 2)?;
                f.write_str(" -> ")?;
                operand(f, b, 1)
            }
            Fo::Forall(v, a) => {
                write!(f, "{} {v}. ", quant_name("forall", v.sort))?;
                body(f, a)
            }
            Fo::Exists(v, a) => {
                write!(f, "{} {v}. ", quant_name("exists", v.sort))?;
                body(f, a)
            }
            Fo::Forall2(p, a) => {
                write!(f, "{} {p}. ", quant_name("forall2", p.sort))?;
                body(f, a)
            }
        }
    }
}

// Parsing goes through an untyped tree so sorts of free variables can be
// inferred from the relation symbols they occur under.

enum Q {
    All,
    Ex,
    All2,
}

struct Parser {
    c: Cursor,
    scopes: Vec<(String, Sort)>,
    pred_scopes: Vec<(u32, Sort)>,
    free: BTreeMap<String, Sort>,
    pending_eq: Vec<(String, String)>,
}

impl Parser {
    fn lookup(&self, name: &str) -> Option<Sort> {
        self.scopes
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, s)| *s)
            .or_else(|| self.free.get(name).copied())
    }

    fn note(&mut self, name: &str, sort: Sort) -> Result<Ivar, ParseError> {
        match self.lookup(name) {
            Some(s) if s != sort => Err(SortError::Conflict(name.to_string()).into()),
            Some(_) => Ok(Ivar::new(name, sort)),
            None => {
                self.free.insert(name.to_string(), sort);
                Ok(Ivar::new(name, sort))
            }
        }
    }

    fn formula(&mut self) -> Result<Fo, ParseError> {
        let lhs = self.disj()?;
        if self.c.eat(&Tok::Arrow) {
            Ok(Fo::imp(lhs, self.formula()?))
        } else {
            Ok(lhs)
        }
    }

    fn disj(&mut self) -> Result<Fo, ParseError> {
        let mut parts = vec![self.conj()?];
        while self.c.eat(&Tok::Bar) {
            parts.push(self.conj()?);
        }
        Ok(Fo::disj(parts))
    }

    fn conj(&mut self) -> Result<Fo, ParseError> {
        let mut parts = vec![self.unary()?];
        while self.c.eat(&Tok::Amp) {
            parts.push(self.unary()?);
        }
        Ok(Fo::conj(parts))
    }

    fn quantifier(name: &str) -> Option<(Q, Sort)> {
        let (q, s) = name.rsplit_once('_')?;
        let sort = match s {
            "1" => Sort::One,
            "d" => Sort::Dual,
            _ => return None,
        };
        let q = match q {
            "forall" => Q::All,
            "exists" => Q::Ex,
            "forall2" => Q::All2,
            _ => return None,
        };
        Some((q, sort))
    }

    fn unary(&mut self) -> Result<Fo, ParseError> {
        if self.c.eat(&Tok::Tilde) {
            return Ok(Fo::not(self.unary()?));
        }
        if let Some((q, sort)) = self.c.peek_ident().and_then(Self::quantifier) {
            self.c.bump();
            let name = match self.c.bump() {
                Some(Tok::Ident(n)) => n,
                _ => return Err(self.c.unexpected()),
            };
            self.c.expect(&Tok::Dot)?;
            return match q {
                Q::All2 => {
                    let idx = parse_svar_name(&name).ok_or(ParseError::UnknownIdent(name))?;
                    self.pred_scopes.push((idx, sort));
                    let body = self.formula()?;
                    self.pred_scopes.pop();
                    Ok(Fo::forall2(SVar::new(idx, sort), body))
                }
                _ => {
                    self.scopes.push((name.clone(), sort));
                    let body = self.formula()?;
                    self.scopes.pop();
                    let v = Ivar::new(name, sort);
                    Ok(match q {
                        Q::All => Fo::forall(v, body),
                        _ => Fo::exists(v, body),
                    })
                }
            };
        }
        self.atom()
    }

    fn args(&mut self) -> Result<Vec<String>, ParseError> {
        self.c.expect(&Tok::LParen)?;
        let mut out = Vec::new();
        loop {
            match self.c.bump() {
                Some(Tok::Ident(n)) => out.push(n),
                _ => return Err(self.c.unexpected()),
            }
            if self.c.eat(&Tok::RParen) {
                return Ok(out);
            }
            self.c.expect(&Tok::Comma)?;
        }
    }

    fn atom(&mut self) -> Result<Fo, ParseError> {
        let first = match self.c.bump() {
            Some(Tok::LParen) => {
                let a = self.formula()?;
                self.c.expect(&Tok::RParen)?;
                return Ok(a);
            }
            Some(Tok::Ident(n)) => n,
            Some(_) => {
                self.c.i_back();
                return Err(self.c.unexpected());
            }
            None => return Err(ParseError::Eof),
        };
        match first.as_str() {
            "true" => return Ok(Fo::True),
            "false" => return Ok(Fo::False),
            _ => {}
        }
        if self.c.peek() == Some(&Tok::LParen) {
            let args = self.args()?;
            if let Some(rel) = Rel::from_name(&first) {
                let sig = rel.signature();
                if sig.len() != args.len() {
                    return Err(ParseError::UnknownIdent(first));
                }
                let vs = args
                    .iter()
                    .zip(&sig)
                    .map(|(a, s)| self.note(a, *s))
                    .collect::<Result<Vec<_>, _>>()?;
                return Ok(Fo::Atom(rel, vs));
            }
            let idx = parse_svar_name(&first).ok_or_else(|| ParseError::UnknownIdent(first.clone()))?;
            if args.len() != 1 {
                return Err(ParseError::UnknownIdent(first));
            }
            let bound = self.pred_scopes.iter().rev().find(|(i, _)| *i == idx).map(|(_, s)| *s);
            let sort = match (bound, self.lookup(&args[0])) {
                (Some(s), _) | (None, Some(s)) => s,
                (None, None) => return Err(SortError::Undetermined(args[0].clone()).into()),
            };
            let v = self.note(&args[0], sort)?;
            return Ok(Fo::Pred(SVar::new(idx, sort), v));
        }
        let op = self.c.bump();
        let second = match self.c.bump() {
            Some(Tok::Ident(n)) => n,
            _ => return Err(self.c.unexpected()),
        };
        match op {
            Some(Tok::Eq) | Some(Tok::Neq) | Some(Tok::Le) => {
                let sort = self.lookup(&first).or_else(|| self.lookup(&second));
                let (a, b) = match sort {
                    Some(s) => (self.note(&first, s)?, self.note(&second, s)?),
                    None => {
                        // Resolved after the whole formula is read.
                        self.pending_eq.push((first.clone(), second.clone()));
                        (Ivar::new(first, Sort::One), Ivar::new(second, Sort::One))
                    }
                };
                Ok(match op {
                    Some(Tok::Eq) => Fo::Eq(a, b),
                    Some(Tok::Neq) => Fo::not(Fo::Eq(a, b)),
                    _ => Fo::Leq(a, b),
                })
            }
            Some(Tok::Ident(r)) => {
                let rel = Rel::from_name(&r).ok_or(ParseError::UnknownIdent(r))?;
                let sig = rel.signature();
                if sig.len() != 2 {
                    return Err(ParseError::UnknownIdent(rel.name()));
                }
                let a = self.note(&first, sig[0])?;
                let b = self.note(&second, sig[1])?;
                Ok(Fo::Atom(rel, vec![a, b]))
            }
            _ => Err(self.c.unexpected()),
        }
    }
}

/// Re-sorts free variables that first appeared only under `=` or `<=`.
fn fix_free(f: &Fo, free: &BTreeMap<String, Sort>, bound: &mut Vec<String>) -> Fo {
    let fix = |v: &Ivar, bound: &Vec<String>| {
        if bound.contains(&v.name) {
            v.clone()
        } else {
            Ivar::new(v.name.clone(), *free.get(&v.name).unwrap_or(&v.sort))
        }
    };
    match f {
        Fo::Eq(a, b) => Fo::Eq(fix(a, bound), fix(b, bound)),
        Fo::Leq(a, b) => Fo::Leq(fix(a, bound), fix(b, bound)),
        Fo::Not(a) => Fo::not(fix_free(a, free, bound)),
        Fo::And(a, b) => Fo::and(fix_free(a, free, bound), fix_free(b, free, bound)),
        Fo::Or(a, b) => Fo::or(fix_free(a, free, bound), fix_free(b, free, bound)),
        Fo::Imp(a, b) => Fo::imp(fix_free(a, free, bound), fix_free(b, free, bound)),
        Fo::Forall(v, a) | Fo::Exists(v, a) => {
            bound.push(v.name.clone());
            let body = fix_free(a, free, bound);
            bound.pop();
            if matches!(f, Fo::Forall(..)) {
                Fo::forall(v.clone(), body)
            } else {
                Fo::exists(v.clone(), body)
            }
        }
        Fo::Forall2(p, a) => Fo::forall2(*p, fix_free(a, free, bound)),
        _ => f.clone(),
    }
}

/// Parses a first-order formula. Free variables take their sort from the
/// relation positions they occur in, or from `env`.
pub fn parse_formula_in(src: &str, env: &[Ivar]) -> Result<Fo, ParseError> {
    let mut p = Parser {
        c: Cursor::new(src)?,
        scopes: Vec::new(),
        pred_scopes: Vec::new(),
        free: env.iter().map(|v| (v.name.clone(), v.sort)).collect(),
        pending_eq: Vec::new(),
    };
    let f = p.formula()?;
    p.c.finish()?;
    for (a, b) in &p.pending_eq {
        let s = p.free.get(a).or_else(|| p.free.get(b)).copied();
        match s {
            Some(s) => {
                p.free.entry(a.clone()).or_insert(s);
                p.free.entry(b.clone()).or_insert(s);
            }
            None => return Err(SortError::Undetermined(a.clone()).into()),
        }
    }
    Ok(fix_free(&f, &p.free, &mut Vec::new()))
}

/// Parses with the anchors `x` (sort 1) and `y` (sort ∂) pre-declared.
pub fn parse_formula(src: &str) -> Result<Fo, ParseError> {
    parse_formula_in(src, &[Ivar::new("x", Sort::One), Ivar::new("y", Sort::Dual)])
}

impl std::str::FromStr for Fo {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}

/// Generator of fresh bound-variable names: `u1, u2, ..` at sort 1 and
/// `v1, v2, ..` at sort ∂.
#[derive(Clone, Debug, Default)]
pub struct Fresh {
    one: u32,
    dual: u32,
}

impl Fresh {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn var(&mut self, s: Sort) -> Ivar {
        match s {
            Sort::One => {
                self.one += 1;
                Ivar::new(format!("u{}", self.one), s)
            }
            Sort::Dual => {
                self.dual += 1;
                Ivar::new(format!("v{}", self.dual), s)
            }
        }
    }
}

/// The anchor variable of a sort: `x` at sort 1, `y` at sort ∂.
pub fn anchor(s: Sort) -> Ivar {
    match s {
        Sort::One => Ivar::new("x", s),
        Sort::Dual => Ivar::new("y", s),
    }
}
