use std::collections::BTreeSet;
use std::fmt;

use super::lexer::{Cursor, Tok};
use super::ParseError;

/// Formulas of the distribution-free modal language. Variables are indices;
/// `p`, `q`, `r`, `s`, `t` abbreviate `p0` .. `p4`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dfml {
    Var(u32),
    Top,
    Bot,
    And(Box<Dfml>, Box<Dfml>),
    Or(Box<Dfml>, Box<Dfml>),
    Box(Box<Dfml>),
    Dia(Box<Dfml>),
    Neg(Box<Dfml>),
    Imp(Box<Dfml>, Box<Dfml>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sequent {
    pub lhs: Dfml,
    pub rhs: Dfml,
}

impl Dfml {
    pub fn var(i: u32) -> Dfml {
        Dfml::Var(i)
    }
    pub fn and(a: Dfml, b: Dfml) -> Dfml {
        Dfml::And(Box::new(a), Box::new(b))
    }
    pub fn or(a: Dfml, b: Dfml) -> Dfml {
        Dfml::Or(Box::new(a), Box::new(b))
    }
    pub fn imp(a: Dfml, b: Dfml) -> Dfml {
        Dfml::Imp(Box::new(a), Box::new(b))
    }
    pub fn boxed(a: Dfml) -> Dfml {
        Dfml::Box(Box::new(a))
    }
    pub fn dia(a: Dfml) -> Dfml {
        Dfml::Dia(Box::new(a))
    }
    pub fn neg(a: Dfml) -> Dfml {
        Dfml::Neg(Box::new(a))
    }

    pub fn vars(&self, out: &mut BTreeSet<u32>) {
        match self {
            Dfml::Var(i) => {
                out.insert(*i);
            }
            Dfml::Top | Dfml::Bot => {}
            Dfml::Box(a) | Dfml::Dia(a) | Dfml::Neg(a) => a.vars(out),
            Dfml::And(a, b) | Dfml::Or(a, b) | Dfml::Imp(a, b) => {
                a.vars(out);
                b.vars(out);
            }
        }
    }

    /// Variables occurring with positive polarity (`true`) or negative
    /// polarity (`false`). `∼` and the antecedent of `→` flip polarity.
    pub fn occurrences(&self, positive: bool, out: &mut BTreeSet<(u32, bool)>) {
        match self {
            Dfml::Var(i) => {
                out.insert((*i, positive));
            }
            Dfml::Top | Dfml::Bot => {}
            Dfml::Box(a) | Dfml::Dia(a) => a.occurrences(positive, out),
            Dfml::Neg(a) => a.occurrences(!positive, out),
            Dfml::And(a, b) | Dfml::Or(a, b) => {
                a.occurrences(positive, out);
                b.occurrences(positive, out);
            }
            Dfml::Imp(a, b) => {
                a.occurrences(!positive, out);
                b.occurrences(positive, out);
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Dfml::Var(_) | Dfml::Top | Dfml::Bot => 1,
            Dfml::Box(a) | Dfml::Dia(a) | Dfml::Neg(a) => 1 + a.size(),
            Dfml::And(a, b) | Dfml::Or(a, b) | Dfml::Imp(a, b) => 1 + a.size() + b.size(),
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Dfml::Imp(..) => 1,
            Dfml::Or(..) => 2,
            Dfml::And(..) => 3,
            _ => 4,
        }
    }
}

impl Sequent {
    pub fn new(lhs: Dfml, rhs: Dfml) -> Self {
        Sequent { lhs, rhs }
    }

    pub fn vars(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        self.lhs.vars(&mut out);
        self.rhs.vars(&mut out);
        out
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, a: &Dfml, min: u8) -> fmt::Result {
    if a.prec() < min {
        write!(f, "({a})")
    } else {
        write!(f, "{a}")
    }
}

impl fmt::Display for Dfml {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dfml::Var(i) => write!(f, "p{i}"),
            Dfml::Top => f.write_str("top"),
            Dfml::Bot => f.write_str("bot"),
            Dfml::Box(a) | Dfml::Dia(a) | Dfml::Neg(a) => {
                let op = match self {
                    Dfml::Box(_) => "box",
                    Dfml::Dia(_) => "dia",
                    _ => "neg",
                };
                write!(f, "{op} ")?;
                write_at(f, a, 4)
            }
            Dfml::And(a, b) => {
                write_at(f, a, 3)?;
                f.write_str(" /\\ ")?;
                write_at(f, b, 4)
            }
            Dfml::Or(a, b) => {
                write_at(f, a, 2)?;
                f.write_str(" \\/ ")?;
                write_at(f, b, 3)
            }
            Dfml::Imp(a, b) => {
                write_at(f, a, 2)?;
                f.write_str(" -> ")?;
                write_at(f, b, 1)
            }
        }
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} |- {}", self.lhs, self.rhs)
    }
}

fn var_index(name: &str) -> Option<u32> {
    match name {
        "p" => Some(0),
        "q" => Some(1),
        "r" => Some(2),
        "s" => Some(3),
        "t" => Some(4),
        _ => name.strip_prefix('p')?.parse().ok(),
    }
}

fn formula(c: &mut Cursor) -> Result<Dfml, ParseError> {
    let lhs = disjunction(c)?;
    if c.eat(&Tok::Arrow) {
        Ok(Dfml::imp(lhs, formula(c)?))
    } else {
        Ok(lhs)
    }
}

fn disjunction(c: &mut Cursor) -> Result<Dfml, ParseError> {
    let mut acc = conjunction(c)?;
    while c.eat(&Tok::Vee) {
        acc = Dfml::or(acc, conjunction(c)?);
    }
    Ok(acc)
}

fn conjunction(c: &mut Cursor) -> Result<Dfml, ParseError> {
    let mut acc = unary(c)?;
    while c.eat(&Tok::Wedge) {
        acc = Dfml::and(acc, unary(c)?);
    }
    Ok(acc)
}

fn unary(c: &mut Cursor) -> Result<Dfml, ParseError> {
    match c.bump() {
        Some(Tok::LParen) => {
            let a = formula(c)?;
            c.expect(&Tok::RParen)?;
            Ok(a)
        }
        Some(Tok::Tilde) => Ok(Dfml::neg(unary(c)?)),
        Some(Tok::Ident(s)) => match s.as_str() {
            "box" => Ok(Dfml::boxed(unary(c)?)),
            "dia" => Ok(Dfml::dia(unary(c)?)),
            "neg" => Ok(Dfml::neg(unary(c)?)),
            "top" => Ok(Dfml::Top),
            "bot" => Ok(Dfml::Bot),
            other => var_index(other)
                .map(Dfml::Var)
                .ok_or_else(|| ParseError::UnknownIdent(other.to_string())),
        },
        Some(_) => {
            c.i_back();
            Err(c.unexpected())
        }
        None => Err(ParseError::Eof),
    }
}

pub fn parse_formula(src: &str) -> Result<Dfml, ParseError> {
    let mut c = Cursor::new(src)?;
    let a = formula(&mut c)?;
    c.finish()?;
    Ok(a)
}

pub fn parse_sequent(src: &str) -> Result<Sequent, ParseError> {
    let mut c = Cursor::new(src)?;
    let lhs = formula(&mut c)?;
    c.expect(&Tok::Turnstile)?;
    let rhs = formula(&mut c)?;
    c.finish()?;
    Ok(Sequent { lhs, rhs })
}

impl std::str::FromStr for Sequent {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_sequent(s)
    }
}

impl std::str::FromStr for Dfml {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}
