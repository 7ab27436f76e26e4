//! Hamiltonian expression language.
//!
//! Text such as `p^2 + x^2 + 10*exp(-i*x)` goes through three stages:
//! [`tokenize`] splits it, [`parse`] builds an unbound [`Ast`], and [`bind`]
//! substitutes parameters and flattens the result into an [`OperatorExpr`]
//! (a sum of complex-weighted operator words). [`canonicalize`] then drops
//! zero terms and folds scalar exponentials. Operator order is never changed:
//! `x*p` and `p*x` are different words.
//!
//! Grammar (no implicit multiplication):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := ['-'] factor ('*' factor)*
//! factor := base ('^' uint)?
//! base   := 'x' | 'p' | 'i' | number | ident | 'exp' '(' expr ')' | '(' expr ')'
//! ```

mod expr;
mod lexer;

pub use expr::{bind, canonicalize, Factor, OperatorExpr, ParamBindings, Term};
pub use lexer::{tokenize, Token, TokenKind};

use thiserror::Error;

/// Largest accepted literal exponent.
pub const MAX_EXPONENT: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty expression")]
    EmptyInput,
    #[error("invalid character '{ch}' at offset {position}")]
    InvalidCharacter { ch: char, position: usize },
    #[error("malformed number '{lexeme}' at offset {position}")]
    MalformedNumber { lexeme: String, position: usize },
    #[error("unexpected {found} at offset {position}")]
    UnexpectedToken { found: String, position: usize },
    #[error("unbalanced parenthesis at offset {position}")]
    UnbalancedParen { position: usize },
    #[error("BadExponent at offset {position}: expected an integer literal in 0..={max} after '^', found {found}", max = MAX_EXPONENT)]
    BadExponent { found: String, position: usize },
    #[error("unbound identifier '{0}'")]
    UnboundIdentifier(String),
    #[error("'{0}' cannot be used as a parameter name")]
    InvalidParamName(String),
    #[error("expansion produces more than {limit} terms")]
    TooManyTerms { limit: usize },
}

/// Unbound syntax tree as written, before parameter substitution.
#[derive(Debug, Clone, PartialEq)]
pub enum Ast {
    Number(f64),
    Imag,
    Ident(String),
    X,
    P,
    Exp(Box<Ast>),
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, u32),
}

pub fn parse(tokens: &[Token]) -> Result<Ast, ParseError> {
    if tokens.is_empty() {
        return Err(ParseError::EmptyInput);
    }
    let end = tokens.last().map_or(0, |t| t.position + t.lexeme.len());
    let mut parser = Parser {
        tokens,
        pos: 0,
        end,
    };
    let ast = parser.expr()?;
    match parser.peek() {
        None => Ok(ast),
        Some(t) if t.kind == TokenKind::RParen => Err(ParseError::UnbalancedParen {
            position: t.position,
        }),
        Some(t) => Err(unexpected(Some(t), end)),
    }
}

/// Tokenize, parse, bind and canonicalize in one step.
pub fn parse_hamiltonian(source: &str, params: &ParamBindings) -> Result<OperatorExpr, ParseError> {
    let tokens = tokenize(source)?;
    let ast = parse(&tokens)?;
    Ok(canonicalize(bind(&ast, params)?))
}

fn unexpected(tok: Option<&Token>, end: usize) -> ParseError {
    match tok {
        Some(t) => ParseError::UnexpectedToken {
            found: format!("'{}'", t.lexeme),
            position: t.position,
        },
        None => ParseError::UnexpectedToken {
            found: "end of input".to_string(),
            position: end,
        },
    }
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn peek_kind(&self) -> Option<TokenKind> {
        self.peek().map(|t| t.kind)
    }

    fn next(&mut self) -> Option<&'a Token> {
        let tok = self.tokens.get(self.pos);
        if tok.is_some() {
            self.pos += 1;
        }
        tok
    }

    fn expr(&mut self) -> Result<Ast, ParseError> {
        let mut lhs = self.term()?;
        while let Some(kind @ (TokenKind::Plus | TokenKind::Minus)) = self.peek_kind() {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = match kind {
                TokenKind::Plus => Ast::Add(Box::new(lhs), Box::new(rhs)),
                _ => Ast::Sub(Box::new(lhs), Box::new(rhs)),
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Ast, ParseError> {
        let negate = self.peek_kind() == Some(TokenKind::Minus);
        if negate {
            self.pos += 1;
        }
        let mut lhs = self.factor()?;
        if negate {
            lhs = Ast::Neg(Box::new(lhs));
        }
        while self.peek_kind() == Some(TokenKind::Star) {
            self.pos += 1;
            let rhs = self.factor()?;
            lhs = Ast::Mul(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Ast, ParseError> {
        let base = self.base()?;
        if self.peek_kind() != Some(TokenKind::Caret) {
            return Ok(base);
        }
        let caret = self.next().expect("peeked");
        let exponent = match self.next() {
            Some(t) if t.kind == TokenKind::Number => match t.lexeme.parse::<u32>() {
                Ok(n) if n <= MAX_EXPONENT => n,
                _ => return Err(bad_exponent(Some(t), caret)),
            },
            other => return Err(bad_exponent(other, caret)),
        };
        Ok(Ast::Pow(Box::new(base), exponent))
    }

    fn base(&mut self) -> Result<Ast, ParseError> {
        let Some(tok) = self.next() else {
            return Err(unexpected(None, self.end));
        };
        match tok.kind {
            TokenKind::Number => tok
                .lexeme
                .parse::<f64>()
                .map(Ast::Number)
                .map_err(|_| ParseError::MalformedNumber {
                    lexeme: tok.lexeme.clone(),
                    position: tok.position,
                }),
            TokenKind::Ident => Ok(match tok.lexeme.as_str() {
                "x" => Ast::X,
                "p" => Ast::P,
                "i" => Ast::Imag,
                name => Ast::Ident(name.to_string()),
            }),
            TokenKind::ExpKw => {
                match self.next() {
                    Some(t) if t.kind == TokenKind::LParen => {}
                    other => return Err(unexpected(other, self.end)),
                }
                let body = self.group(tok)?;
                Ok(Ast::Exp(Box::new(body)))
            }
            TokenKind::LParen => self.group(tok),
            _ => Err(unexpected(Some(tok), self.end)),
        }
    }

    /// Parses `expr ')'` after an opening parenthesis.
    fn group(&mut self, open: &Token) -> Result<Ast, ParseError> {
        let inner = self.expr()?;
        match self.next() {
            Some(t) if t.kind == TokenKind::RParen => Ok(inner),
            None => Err(ParseError::UnbalancedParen {
                position: open.position,
            }),
            other => Err(unexpected(other, self.end)),
        }
    }
}

fn bad_exponent(tok: Option<&Token>, caret: &Token) -> ParseError {
    match tok {
        Some(t) => ParseError::BadExponent {
            found: format!("'{}'", t.lexeme),
            position: t.position,
        },
        None => ParseError::BadExponent {
            found: "end of input".to_string(),
            position: caret.position + 1,
        },
    }
}
