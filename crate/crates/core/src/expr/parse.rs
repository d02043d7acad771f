//! Recursive-descent parser.
//!
//! ```text
//! expr   := term ('+' term)*
//! term   := factor ('*' factor)*
//! factor := IDENT | '(' expr ')'
//!         | 'choose' '(' INT ',' list ')'
//!         | 'majority' '(' list ')'
//! list   := '[' expr (',' expr)* ']'
//! ```

use crate::error::{Error, Result};
use crate::expr::Expr;

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    Int(usize),
    Plus,
    Star,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
}

fn describe(token: Option<&Token>) -> String {
    match token {
        None => "end of input".into(),
        Some(Token::Ident(name)) => format!("`{name}`"),
        Some(Token::Int(n)) => format!("`{n}`"),
        Some(Token::Plus) => "`+`".into(),
        Some(Token::Star) => "`*`".into(),
        Some(Token::LParen) => "`(`".into(),
        Some(Token::RParen) => "`)`".into(),
        Some(Token::LBracket) => "`[`".into(),
        Some(Token::RBracket) => "`]`".into(),
        Some(Token::Comma) => "`,`".into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let single = match c {
            b'+' => Some(Token::Plus),
            b'*' => Some(Token::Star),
            b'(' => Some(Token::LParen),
            b')' => Some(Token::RParen),
            b'[' => Some(Token::LBracket),
            b']' => Some(Token::RBracket),
            b',' => Some(Token::Comma),
            _ => None,
        };
        if let Some(token) = single {
            tokens.push((start, token));
            i += 1;
        } else if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            tokens.push((start, Token::Ident(text[start..i].to_string())));
        } else if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let value = text[start..i].parse().map_err(|_| Error::Parse {
                position: start,
                message: "integer out of range".into(),
            })?;
            tokens.push((start, Token::Int(value)));
        } else {
            let ch = text[start..].chars().next().unwrap_or('?');
            return Err(Error::Parse {
                position: start,
                message: format!("unexpected character `{ch}`"),
            });
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn peek_at(&self, offset: usize) -> Option<&Token> {
        self.tokens.get(self.pos + offset).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn error<T>(&self, expected: &str) -> Result<T> {
        Err(Error::Parse {
            position: self.offset(),
            message: format!("expected {expected}, found {}", describe(self.peek())),
        })
    }

    fn expect(&mut self, token: Token) -> Result<()> {
        if self.peek() == Some(&token) {
            self.pos += 1;
            Ok(())
        } else {
            self.error(&describe(Some(&token)))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut terms = vec![self.term()?];
        while self.peek() == Some(&Token::Plus) {
            self.pos += 1;
            terms.push(self.term()?);
        }
        Expr::or(terms)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut factors = vec![self.factor()?];
        while self.peek() == Some(&Token::Star) {
            self.pos += 1;
            factors.push(self.factor()?);
        }
        Expr::and(factors)
    }

    fn factor(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Token::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(Token::RParen)?;
                Ok(inner)
            }
            Some(Token::Ident(name)) if self.peek_at(1) == Some(&Token::LParen) => match name.as_str() {
                "choose" => {
                    self.pos += 2;
                    let k = match self.peek() {
                        Some(Token::Int(k)) => *k,
                        _ => return self.error("an integer threshold"),
                    };
                    self.pos += 1;
                    self.expect(Token::Comma)?;
                    let children = self.list()?;
                    self.expect(Token::RParen)?;
                    Expr::choose(k, children)
                }
                "majority" => {
                    self.pos += 2;
                    let children = self.list()?;
                    self.expect(Token::RParen)?;
                    Expr::majority(children)
                }
                _ => {
                    self.pos += 1;
                    self.error("`+`, `*`, `)` or end of input")
                }
            },
            Some(Token::Ident(name)) => {
                self.pos += 1;
                Ok(Expr::Var(name))
            }
            _ => self.error("a node name, `(`, `choose` or `majority`"),
        }
    }

    fn list(&mut self) -> Result<Vec<Expr>> {
        self.expect(Token::LBracket)?;
        let mut items = vec![self.expr()?];
        while self.peek() == Some(&Token::Comma) {
            self.pos += 1;
            items.push(self.expr()?);
        }
        self.expect(Token::RBracket)?;
        Ok(items)
    }
}

pub fn parse(text: &str) -> Result<Expr> {
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err(Error::Parse {
            position: 0,
            message: "empty expression".into(),
        });
    }
    let mut parser = Parser {
        tokens,
        pos: 0,
        end: text.len(),
    };
    let expr = parser.expr()?;
    if parser.peek().is_some() {
        return parser.error("`+`, `*` or end of input");
    }
    Ok(expr)
}
