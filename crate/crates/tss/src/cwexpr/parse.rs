//! Concrete `.cwe` syntax: whitespace-insensitive s-expressions with `;`
//! line comments.
//!
//! ```text
//! expr  := "(v" id label ")" | "(u" expr expr ")"
//!        | "(eta" label label expr ")" | "(rho" label label expr ")"
//! id    := positive decimal integer
//! label := [A-Za-z][A-Za-z0-9_]*
//! ```

use std::fmt;

use thiserror::Error;

use super::{CwExpr, ExprBuilder, ExprError, NodeId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("{line}:{col}: {message}")]
    Syntax {
        line: u32,
        col: u32,
        message: String,
    },
    #[error(transparent)]
    Invalid(#[from] ExprError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Open,
    Close,
    Atom(String),
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Open => write!(f, "'('"),
            Token::Close => write!(f, "')'"),
            Token::Atom(s) => write!(f, "'{s}'"),
        }
    }
}

struct Lexer<'a> {
    src: &'a str,
    line: u32,
    col: u32,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src,
            line: 1,
            col: 1,
        }
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            line: self.line,
            col: self.col,
            message: message.into(),
        }
    }

    fn bump(&mut self, c: char) {
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        self.src = &self.src[c.len_utf8()..];
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.src.chars().next() {
            if c == ';' {
                while let Some(c) = self.src.chars().next() {
                    self.bump(c);
                    if c == '\n' {
                        break;
                    }
                }
            } else if c.is_whitespace() {
                self.bump(c);
            } else {
                break;
            }
        }
    }

    /// Next token with its start position, or `None` at end of input.
    fn next(&mut self) -> Result<Option<(Token, u32, u32)>, ParseError> {
        self.skip_trivia();
        let (line, col) = (self.line, self.col);
        let Some(c) = self.src.chars().next() else {
            return Ok(None);
        };
        let token = match c {
            '(' => {
                self.bump(c);
                Token::Open
            }
            ')' => {
                self.bump(c);
                Token::Close
            }
            _ if c.is_ascii_alphanumeric() || c == '_' => {
                let mut atom = String::new();
                while let Some(c) = self.src.chars().next() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        atom.push(c);
                        self.bump(c);
                    } else {
                        break;
                    }
                }
                Token::Atom(atom)
            }
            _ => return Err(self.err(format!("unexpected character '{c}'"))),
        };
        Ok(Some((token, line, col)))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    builder: ExprBuilder,
}

impl<'a> Parser<'a> {
    fn expect(&mut self, what: &str) -> Result<(Token, u32, u32), ParseError> {
        match self.lexer.next()? {
            Some(t) => Ok(t),
            None => Err(self
                .lexer
                .err(format!("expected {what}, found end of input"))),
        }
    }

    fn expect_open(&mut self) -> Result<(), ParseError> {
        match self.expect("'('")? {
            (Token::Open, ..) => Ok(()),
            (t, line, col) => Err(ParseError::Syntax {
                line,
                col,
                message: format!("expected '(', found {t}"),
            }),
        }
    }

    fn expect_close(&mut self) -> Result<(), ParseError> {
        match self.expect("')'")? {
            (Token::Close, ..) => Ok(()),
            (t, line, col) => Err(ParseError::Syntax {
                line,
                col,
                message: format!("expected ')', found {t}"),
            }),
        }
    }

    fn expect_atom(&mut self, what: &str) -> Result<(String, u32, u32), ParseError> {
        match self.expect(what)? {
            (Token::Atom(s), line, col) => Ok((s, line, col)),
            (t, line, col) => Err(ParseError::Syntax {
                line,
                col,
                message: format!("expected {what}, found {t}"),
            }),
        }
    }

    fn parse_label(&mut self) -> Result<super::LabelId, ParseError> {
        let (s, line, col) = self.expect_atom("a label")?;
        let mut chars = s.chars();
        let head_ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic());
        if !head_ok {
            return Err(ParseError::Syntax {
                line,
                col,
                message: format!("label must start with a letter, got '{s}'"),
            });
        }
        Ok(self.builder.label(&s))
    }

    fn parse_vertex_id(&mut self) -> Result<u32, ParseError> {
        let (s, line, col) = self.expect_atom("a vertex id")?;
        match s.parse::<u32>() {
            Ok(id) if id > 0 => Ok(id),
            _ => Err(ParseError::Syntax {
                line,
                col,
                message: format!("vertex id must be a positive integer, got '{s}'"),
            }),
        }
    }

    fn parse_expr(&mut self) -> Result<NodeId, ParseError> {
        self.expect_open()?;
        let (op, line, col) = self.expect_atom("an operator (v, u, eta, rho)")?;
        let node = match op.as_str() {
            "v" => {
                let id = self.parse_vertex_id()?;
                let label = self.parse_label()?;
                self.builder.vertex(id, label)?
            }
            "u" => {
                let left = self.parse_expr()?;
                let right = self.parse_expr()?;
                self.builder.union(left, right)?
            }
            "eta" => {
                let a = self.parse_label()?;
                let b = self.parse_label()?;
                let child = self.parse_expr()?;
                self.builder.eta(a, b, child)?
            }
            "rho" => {
                let from = self.parse_label()?;
                let to = self.parse_label()?;
                let child = self.parse_expr()?;
                self.builder.rho(from, to, child)?
            }
            other => {
                return Err(ParseError::Syntax {
                    line,
                    col,
                    message: format!("unknown operator '{other}' (expected v, u, eta or rho)"),
                })
            }
        };
        self.expect_close()?;
        Ok(node)
    }
}

/// Parses `.cwe` text into a validated expression.
pub fn parse(text: &str) -> Result<CwExpr, ParseError> {
    let mut parser = Parser {
        lexer: Lexer::new(text),
        builder: ExprBuilder::new(),
    };
    let root = parser.parse_expr()?;
    if let Some((t, line, col)) = parser.lexer.next()? {
        return Err(ParseError::Syntax {
            line,
            col,
            message: format!("trailing input after expression: {t}"),
        });
    }
    Ok(parser.builder.finish(root)?)
}
