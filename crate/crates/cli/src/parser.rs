//! Recursive descent parser for the expression grammar:
//!
//! ```text
//! expr   := ['-'] term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := atom ('^' int)?
//! atom   := integer | tN | xN | dN('^'int)? '(' expr ')'
//!         | s('^'int)? '(' expr ')' | '(' expr ')'
//! ```
//!
//! Errors carry the 1-based column of the offending token.

use std::fmt;

use num_bigint::BigInt;

use crate::ast::Ast;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at column {}: {}", self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    /// `t3`, `x1`, `d2` keep their numeric suffix; `s` stands alone
    TVar(usize),
    XVar(usize),
    Delta(usize),
    Sigma,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokenize(src: &'a str) -> Result<Vec<(Tok, usize)>, ParseError> {
        let mut lx = Lexer {
            src: src.as_bytes(),
            pos: 0,
        };
        let mut out = Vec::new();
        while let Some(t) = lx.next_token()? {
            out.push(t);
        }
        Ok(out)
    }

    fn error(&self, at: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            column: at + 1,
            message: message.into(),
        }
    }

    fn next_token(&mut self) -> Result<Option<(Tok, usize)>, ParseError> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if self.pos >= self.src.len() {
            return Ok(None);
        }
        let start = self.pos;
        let c = self.src[self.pos];
        let tok = match c {
            b'+' => {
                self.pos += 1;
                Tok::Plus
            }
            b'-' => {
                self.pos += 1;
                Tok::Minus
            }
            b'*' => {
                self.pos += 1;
                Tok::Star
            }
            b'/' => {
                self.pos += 1;
                Tok::Slash
            }
            b'^' => {
                self.pos += 1;
                Tok::Caret
            }
            b'(' => {
                self.pos += 1;
                Tok::LParen
            }
            b')' => {
                self.pos += 1;
                Tok::RParen
            }
            b'0'..=b'9' => {
                let mut end = self.pos;
                while end < self.src.len() && self.src[end].is_ascii_digit() {
                    end += 1;
                }
                let text = std::str::from_utf8(&self.src[self.pos..end]).unwrap();
                self.pos = end;
                Tok::Num(text.parse().unwrap())
            }
            b't' | b'x' | b'd' => {
                let kind = c;
                let mut end = self.pos + 1;
                while end < self.src.len() && self.src[end].is_ascii_digit() {
                    end += 1;
                }
                if end == self.pos + 1 {
                    return Err(self.error(start, format!("'{}' needs a numeric index", c as char)));
                }
                let idx: usize = std::str::from_utf8(&self.src[self.pos + 1..end])
                    .unwrap()
                    .parse()
                    .map_err(|_| self.error(start, "index too large"))?;
                if idx == 0 {
                    return Err(self.error(start, "indices are 1-based"));
                }
                self.pos = end;
                match kind {
                    b't' => Tok::TVar(idx),
                    b'x' => Tok::XVar(idx),
                    _ => Tok::Delta(idx),
                }
            }
            b's' => {
                self.pos += 1;
                Tok::Sigma
            }
            other => {
                return Err(self.error(start, format!("unexpected character '{}'", other as char)))
            }
        };
        Ok(Some((tok, start)))
    }
}

pub struct Parser {
    tokens: Vec<(Tok, usize)>,
    pos: usize,
    end_column: usize,
}

/// Parse a complete expression; trailing input is an error.
pub fn parse(src: &str) -> Result<Ast, ParseError> {
    let tokens = Lexer::tokenize(src)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        end_column: src.len() + 1,
    };
    let ast = p.expr()?;
    if let Some((_, at)) = p.tokens.get(p.pos) {
        return Err(ParseError {
            column: at + 1,
            message: "unexpected trailing input".into(),
        });
    }
    Ok(ast)
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|(_, at)| at + 1)
            .unwrap_or(self.end_column)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(ParseError {
                column: self.here(),
                message: format!("expected {what}"),
            })
        }
    }

    fn expr(&mut self) -> Result<Ast, ParseError> {
        let mut acc = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            Ast::Neg(Box::new(self.term()?))
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = Ast::Add(Box::new(acc), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = Ast::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Ast, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = Ast::Mul(Box::new(acc), Box::new(self.factor()?));
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    acc = Ast::Div(Box::new(acc), Box::new(self.factor()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Ast, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let e = self.signed_int()?;
            return Ok(Ast::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn signed_int(&mut self) -> Result<i64, ParseError> {
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        let at = self.here();
        match self.bump() {
            Some(Tok::Num(n)) => {
                let v: i64 = n.to_string().parse().map_err(|_| ParseError {
                    column: at,
                    message: "exponent too large".into(),
                })?;
                Ok(if neg { -v } else { v })
            }
            _ => Err(ParseError {
                column: at,
                message: "expected an integer exponent".into(),
            }),
        }
    }

    fn atom(&mut self) -> Result<Ast, ParseError> {
        let at = self.here();
        match self.bump() {
            Some(Tok::Num(n)) => Ok(Ast::Num(n)),
            Some(Tok::TVar(i)) => Ok(Ast::TVar(i)),
            Some(Tok::XVar(i)) => Ok(Ast::XVar(i)),
            Some(Tok::Delta(index)) => {
                let power = if self.peek() == Some(&Tok::Caret) {
                    self.pos += 1;
                    let e = self.signed_int()?;
                    if e < 1 {
                        return Err(ParseError {
                            column: at,
                            message: "derivation powers must be positive".into(),
                        });
                    }
                    e as u32
                } else {
                    1
                };
                self.expect(Tok::LParen, "'(' after a derivation operator")?;
                let arg = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(Ast::Delta {
                    index,
                    power,
                    arg: Box::new(arg),
                })
            }
            Some(Tok::Sigma) => {
                let power = if self.peek() == Some(&Tok::Caret) {
                    self.pos += 1;
                    self.signed_int()?
                } else {
                    1
                };
                self.expect(Tok::LParen, "'(' after s")?;
                let arg = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(Ast::Sigma {
                    power,
                    arg: Box::new(arg),
                })
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            _ => Err(ParseError {
                column: at,
                message: "expected a value".into(),
            }),
        }
    }
}
