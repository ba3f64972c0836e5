//! Minimal s-expression reader shared by the half-equation and term syntaxes.

use std::fmt;

use thiserror::Error;

/// Line/column of a token, both 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sexp {
    Atom(String, Pos),
    List(Vec<Sexp>, Pos),
}

impl Sexp {
    pub fn pos(&self) -> Pos {
        match self {
            Sexp::Atom(_, p) | Sexp::List(_, p) => *p,
        }
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Sexp::Atom(a, _) => Some(a),
            Sexp::List(..) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{pos}: {msg}")]
pub struct SexpError {
    pub pos: Pos,
    pub msg: String,
}

impl SexpError {
    pub fn new(pos: Pos, msg: impl Into<String>) -> Self {
        SexpError { pos, msg: msg.into() }
    }
}

/// Nesting limit; keeps hostile inputs from exhausting the stack in later recursive passes.
pub const MAX_DEPTH: usize = 512;

/// Parses exactly one s-expression; trailing non-whitespace is an error.
pub fn parse(src: &str) -> Result<Sexp, SexpError> {
    let mut reader = Reader::new(src);
    reader.skip_ws();
    let e = reader.read(0)?;
    reader.skip_ws();
    if let Some((pos, c)) = reader.peek() {
        return Err(SexpError::new(pos, format!("unexpected trailing `{c}`")));
    }
    Ok(e)
}

struct Reader<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Reader<'a> {
    fn new(src: &'a str) -> Self {
        Reader {
            chars: src.chars().peekable(),
            line: 1,
            col: 1,
        }
    }

    fn pos(&self) -> Pos {
        Pos {
            line: self.line,
            col: self.col,
        }
    }

    fn peek(&mut self) -> Option<(Pos, char)> {
        let pos = self.pos();
        self.chars.peek().map(|&c| (pos, c))
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c == ';' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn read(&mut self, depth: usize) -> Result<Sexp, SexpError> {
        let Some((pos, c)) = self.peek() else {
            return Err(SexpError::new(self.pos(), "unexpected end of input"));
        };
        match c {
            '(' => {
                if depth >= MAX_DEPTH {
                    return Err(SexpError::new(pos, "nesting too deep"));
                }
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_ws();
                    match self.peek() {
                        None => return Err(SexpError::new(pos, "unclosed `(`")),
                        Some((_, ')')) => {
                            self.bump();
                            return Ok(Sexp::List(items, pos));
                        }
                        Some(_) => items.push(self.read(depth + 1)?),
                    }
                }
            }
            ')' => Err(SexpError::new(pos, "unexpected `)`")),
            _ => {
                let mut atom = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    atom.push(c);
                    self.bump();
                }
                Ok(Sexp::Atom(atom, pos))
            }
        }
    }
}

/// Identifier lexicon shared by operator names, variable names and inequation names.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}
