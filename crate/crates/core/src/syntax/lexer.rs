use super::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    LParen,
    RParen,
    LAngle,
    RAngle,
    Comma,
    Dot,
    Prime,
    Bar,
    Amp,
    Tilde,
    Arrow,
    Wedge,
    Vee,
    Turnstile,
    Turnstile1,
    TurnstileD,
    Eq,
    Neq,
    Le,
    Le1,
    LeD,
    Eq1,
    EqD,
}

#[derive(Clone, Debug)]
pub struct Spanned {
    pub tok: Tok,
    pub pos: usize,
}

fn ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Character after position `i` is not part of an identifier.
fn boundary(chars: &[(usize, char)], i: usize) -> bool {
    chars.get(i).is_none_or(|&(_, c)| !ident_char(c))
}

pub fn lex(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        let next = chars.get(i + 1).map(|&(_, c)| c);
        let push = |out: &mut Vec<Spanned>, tok| out.push(Spanned { tok, pos });
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if ident_start(c) || c.is_ascii_digit() {
            let start = i;
            // Relation symbols such as R''_box and T' carry apostrophes.
            let quoted = matches!(c, 'R' | 'T');
            while i < chars.len() && (ident_char(chars[i].1) || (quoted && chars[i].1 == '\'')) {
                i += 1;
            }
            // R''_box.neg: dotted composite words.
            if quoted {
                while i + 1 < chars.len()
                    && chars[i].1 == '.'
                    && chars[i + 1].1.is_ascii_alphabetic()
                    && chars[start..i].iter().any(|&(_, c)| c == '\'')
                {
                    i += 1;
                    while i < chars.len() && ident_char(chars[i].1) {
                        i += 1;
                    }
                }
            }
            let s: String = chars[start..i].iter().map(|&(_, c)| c).collect();
            push(&mut out, Tok::Ident(s));
            continue;
        }
        let (tok, len) = match (c, next) {
            ('|', Some('-')) => {
                let third = chars.get(i + 2).map(|&(_, c)| c);
                match third {
                    Some('1') if boundary(&chars, i + 3) => (Tok::Turnstile1, 3),
                    Some('d') if boundary(&chars, i + 3) => (Tok::TurnstileD, 3),
                    _ => (Tok::Turnstile, 2),
                }
            }
            ('<', Some('=')) => {
                let third = chars.get(i + 2).map(|&(_, c)| c);
                match third {
                    Some('1') if boundary(&chars, i + 3) => (Tok::Le1, 3),
                    Some('d') if boundary(&chars, i + 3) => (Tok::LeD, 3),
                    _ => (Tok::Le, 2),
                }
            }
            ('=', Some('1')) if boundary(&chars, i + 2) => (Tok::Eq1, 2),
            ('=', Some('d')) if boundary(&chars, i + 2) => (Tok::EqD, 2),
            ('=', _) => (Tok::Eq, 1),
            ('!', Some('=')) => (Tok::Neq, 2),
            ('-', Some('>')) => (Tok::Arrow, 2),
            ('/', Some('\\')) => (Tok::Wedge, 2),
            ('\\', Some('/')) => (Tok::Vee, 2),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            ('<', _) => (Tok::LAngle, 1),
            ('>', _) => (Tok::RAngle, 1),
            (',', _) => (Tok::Comma, 1),
            ('.', _) => (Tok::Dot, 1),
            ('\'' | '′', _) => (Tok::Prime, 1),
            ('|', _) => (Tok::Bar, 1),
            ('&', _) => (Tok::Amp, 1),
            ('~' | '¬', _) => (Tok::Tilde, 1),
            ('⊢', _) => (Tok::Turnstile, 1),
            ('→' | '⊃', _) => (Tok::Arrow, 1),
            ('∧', _) => (Tok::Wedge, 1),
            ('∨', _) => (Tok::Vee, 1),
            ('≤', _) => (Tok::Le, 1),
            ('□', _) => (Tok::Ident("box".into()), 1),
            ('◇', _) => (Tok::Ident("dia".into()), 1),
            ('∼', _) => (Tok::Ident("neg".into()), 1),
            ('⊤', _) => (Tok::Ident("top".into()), 1),
            ('⊥', _) => (Tok::Ident("bot".into()), 1),
            _ => {
                return Err(ParseError::Unexpected {
                    pos,
                    found: c.to_string(),
                })
            }
        };
        push(&mut out, tok);
        i += len;
    }
    Ok(out)
}

/// Cursor over a token stream shared by the three parsers.
pub struct Cursor {
    toks: Vec<Spanned>,
    i: usize,
    len: usize,
}

impl Cursor {
    pub fn new(src: &str) -> Result<Self, ParseError> {
        let toks = lex(src)?;
        Ok(Cursor {
            toks,
            i: 0,
            len: src.len(),
        })
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|s| &s.tok)
    }

    pub fn peek_ident(&self) -> Option<&str> {
        match self.peek() {
            Some(Tok::Ident(s)) => Some(s),
            _ => None,
        }
    }

    pub fn pos(&self) -> usize {
        self.toks.get(self.i).map_or(self.len, |s| s.pos)
    }

    pub fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.i).map(|s| s.tok.clone());
        self.i += 1;
        t
    }

    pub fn i_back(&mut self) {
        self.i -= 1;
    }

    pub fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    pub fn eat_ident(&mut self, name: &str) -> bool {
        if self.peek_ident() == Some(name) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, t: &Tok) -> Result<(), ParseError> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.unexpected())
        }
    }

    pub fn unexpected(&self) -> ParseError {
        match self.toks.get(self.i) {
            Some(s) => ParseError::Unexpected {
                pos: s.pos,
                found: format!("{:?}", s.tok),
            },
            None => ParseError::Eof,
        }
    }

    pub fn finish(&self) -> Result<(), ParseError> {
        if self.i < self.toks.len() {
            Err(self.unexpected())
        } else {
            Ok(())
        }
    }
}
