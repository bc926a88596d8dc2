//! Abstract syntax, parsers and printers for the three languages: the
//! distribution-free modal language, the sorted modal language, and the
//! two-sorted first-order language (with second-order predicate variables).

pub mod dfml;
pub mod fo;
pub mod lexer;
pub mod sorted;

use std::fmt;

pub use dfml::{Dfml, Sequent};
pub use fo::{anchor, Fo, Fresh, Ivar, Lambda, Letter, Rel};
pub use sorted::{Sf, SortedSequent, SVar};

/// The two sorts: `One` is the sort of the carrier Z1, `Dual` that of Z∂.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    One,
    Dual,
}

impl Sort {
    pub fn flip(self) -> Sort {
        match self {
            Sort::One => Sort::Dual,
            Sort::Dual => Sort::One,
        }
    }

    pub fn suffix(self) -> &'static str {
        match self {
            Sort::One => "1",
            Sort::Dual => "d",
        }
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sort::One => "1",
            Sort::Dual => "∂",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("unexpected {found} at byte {pos}")]
    Unexpected { pos: usize, found: String },
    #[error("unexpected end of input")]
    Eof,
    #[error("unknown identifier `{0}`")]
    UnknownIdent(String),
    #[error("sort error: {0}")]
    Sort(#[from] SortError),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SortError {
    #[error("{op} expects an argument of sort {expected}, got {found}")]
    Argument {
        op: &'static str,
        expected: Sort,
        found: Sort,
    },
    #[error("{op} joins formulas of sorts {left} and {right}")]
    Mismatch {
        op: &'static str,
        left: Sort,
        right: Sort,
    },
    #[error("cannot determine the sort of `{0}`")]
    Undetermined(String),
    #[error("variable `{0}` used at both sorts")]
    Conflict(String),
}
