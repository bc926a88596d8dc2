//! Plain-text frame files.
//!
//! ```text
//! version: 1
//! z1: [a, b]
//! zd: [y0, y1]
//! I: [[a, y0], [b, y1]]
//! Rdia: [[a, b]]
//! Rbox: []
//! Rneg: []
//! T: [[y0, a, y1]]
//! ```
//! Missing relation lines mean empty relations. `#` starts a comment.

use std::fmt::Write as _;

use super::frame::{has, Frame, FrameError, Mask};

#[derive(Debug, thiserror::Error)]
pub enum FrameFileError {
    #[error("line {0}: {1}")]
    Syntax(usize, String),
    #[error("missing `{0}` line")]
    Missing(&'static str),
    #[error("unknown element `{0}`")]
    Element(String),
    #[error("unsupported frame file version {0}")]
    Version(String),
    #[error(transparent)]
    Frame(#[from] FrameError),
}

#[derive(Debug, Clone, PartialEq)]
enum Item {
    Atom(String),
    List(Vec<Item>),
}

fn parse_list(src: &str, line: usize) -> Result<Item, FrameFileError> {
    let err = |m: &str| FrameFileError::Syntax(line, m.to_string());
    let mut stack: Vec<Vec<Item>> = Vec::new();
    let mut done: Option<Item> = None;
    let mut atom = String::new();
    let flush = |atom: &mut String, stack: &mut Vec<Vec<Item>>| {
        if !atom.is_empty() {
            if let Some(top) = stack.last_mut() {
                top.push(Item::Atom(std::mem::take(atom)));
            }
        }
    };
    for c in src.chars() {
        if done.is_some() && !c.is_whitespace() {
            return Err(err("trailing input"));
        }
        match c {
            '[' => stack.push(Vec::new()),
            ']' => {
                flush(&mut atom, &mut stack);
                let items = stack.pop().ok_or_else(|| err("unbalanced `]`"))?;
                match stack.last_mut() {
                    Some(top) => top.push(Item::List(items)),
                    None => done = Some(Item::List(items)),
                }
            }
            ',' => flush(&mut atom, &mut stack),
            c if c.is_whitespace() => flush(&mut atom, &mut stack),
            c if c.is_alphanumeric() || c == '_' || c == '-' => {
                if stack.is_empty() {
                    return Err(err("expected `[`"));
                }
                atom.push(c);
            }
            c => return Err(err(&format!("unexpected `{c}`"))),
        }
    }
    done.ok_or_else(|| err("unterminated list"))
}

fn atoms(item: &Item, line: usize) -> Result<Vec<String>, FrameFileError> {
    match item {
        Item::List(v) => v
            .iter()
            .map(|i| match i {
                Item::Atom(a) => Ok(a.clone()),
                Item::List(_) => Err(FrameFileError::Syntax(line, "expected element names".into())),
            })
            .collect(),
        Item::Atom(_) => Err(FrameFileError::Syntax(line, "expected a list".into())),
    }
}

fn tuples(item: &Item, arity: usize, line: usize) -> Result<Vec<Vec<String>>, FrameFileError> {
    match item {
        Item::List(v) => v
            .iter()
            .map(|t| {
                let a = atoms(t, line)?;
                if a.len() != arity {
                    return Err(FrameFileError::Syntax(line, format!("expected {arity}-tuples")));
                }
                Ok(a)
            })
            .collect(),
        Item::Atom(_) => Err(FrameFileError::Syntax(line, "expected a list".into())),
    }
}

/// Parses a frame file. With `validate` the frame must satisfy F1 and F2.
pub fn parse_frame(src: &str, validate: bool) -> Result<Frame, FrameFileError> {
    let mut z1: Option<Vec<String>> = None;
    let mut zd: Option<Vec<String>> = None;
    let mut rels: Vec<(String, Item, usize)> = Vec::new();
    for (n, raw) in src.lines().enumerate() {
        let line = n + 1;
        let text = raw.split('#').next().unwrap().trim();
        if text.is_empty() {
            continue;
        }
        let (key, val) = text
            .split_once(':')
            .ok_or_else(|| FrameFileError::Syntax(line, "expected `key: value`".into()))?;
        let (key, val) = (key.trim(), val.trim());
        match key {
            "version" => {
                if val != "1" {
                    return Err(FrameFileError::Version(val.to_string()));
                }
            }
            "z1" => z1 = Some(atoms(&parse_list(val, line)?, line)?),
            "zd" => zd = Some(atoms(&parse_list(val, line)?, line)?),
            "I" | "Rdia" | "Rbox" | "Rneg" | "T" => rels.push((key.to_string(), parse_list(val, line)?, line)),
            other => return Err(FrameFileError::Syntax(line, format!("unknown key `{other}`"))),
        }
    }
    let z1 = z1.ok_or(FrameFileError::Missing("z1"))?;
    let zd = zd.ok_or(FrameFileError::Missing("zd"))?;
    let (n1, nd) = (z1.len(), zd.len());
    let idx = |names: &[String], a: &str| {
        names
            .iter()
            .position(|n| n == a)
            .ok_or_else(|| FrameFileError::Element(a.to_string()))
    };
    let mut i = vec![0; n1];
    let mut r_dia = vec![0; n1];
    let mut r_box = vec![0; nd];
    let mut r_neg = vec![0; nd];
    let mut t = vec![vec![0; n1]; nd];
    for (key, item, line) in &rels {
        let arity = if key == "T" { 3 } else { 2 };
        for tup in tuples(item, arity, *line)? {
            match key.as_str() {
                "I" => i[idx(&z1, &tup[0])?] |= 1 << idx(&zd, &tup[1])?,
                "Rdia" => r_dia[idx(&z1, &tup[0])?] |= 1 << idx(&z1, &tup[1])?,
                "Rbox" => r_box[idx(&zd, &tup[0])?] |= 1 << idx(&zd, &tup[1])?,
                "Rneg" => r_neg[idx(&zd, &tup[0])?] |= 1 << idx(&z1, &tup[1])?,
                _ => t[idx(&zd, &tup[0])?][idx(&z1, &tup[1])?] |= 1 << idx(&zd, &tup[2])?,
            }
        }
    }
    let f = Frame::new_unchecked(n1, nd, i, r_dia, r_box, r_neg, t)?;
    if validate {
        f.validate()?;
    }
    Ok(f)
}

/// Writes a frame with elements named `a0..` (sort 1) and `b0..` (sort ∂).
pub fn write_frame(f: &Frame) -> String {
    let a = |k: usize| format!("a{k}");
    let b = |k: usize| format!("b{k}");
    let pairs = |rows: &[Mask], l: &dyn Fn(usize) -> String, r: &dyn Fn(usize) -> String, n: usize| {
        let mut out = Vec::new();
        for (p, row) in rows.iter().enumerate() {
            for q in 0..n {
                if has(*row, q) {
                    out.push(format!("[{}, {}]", l(p), r(q)));
                }
            }
        }
        format!("[{}]", out.join(", "))
    };
    let mut s = String::from("version: 1\n");
    let names = |n: usize, g: &dyn Fn(usize) -> String| (0..n).map(g).collect::<Vec<_>>().join(", ");
    let _ = writeln!(s, "z1: [{}]", names(f.n1, &a));
    let _ = writeln!(s, "zd: [{}]", names(f.nd, &b));
    let _ = writeln!(s, "I: {}", pairs(&f.i, &a, &b, f.nd));
    let _ = writeln!(s, "Rdia: {}", pairs(&f.r_dia, &a, &a, f.n1));
    let _ = writeln!(s, "Rbox: {}", pairs(&f.r_box, &b, &b, f.nd));
    let _ = writeln!(s, "Rneg: {}", pairs(&f.r_neg, &b, &a, f.n1));
    let mut ts = Vec::new();
    for y in 0..f.nd {
        for x in 0..f.n1 {
            for v in 0..f.nd {
                if has(f.t[y][x], v) {
                    ts.push(format!("[{}, {}, {}]", b(y), a(x), b(v)));
                }
            }
        }
    }
    let _ = writeln!(s, "T: [{}]", ts.join(", "));
    s
}
