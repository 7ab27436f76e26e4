use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use super::{Ast, ParseError};

const MAX_TERMS: usize = 100_000;

/// One operator in an ordered product.
#[derive(Debug, Clone, PartialEq)]
pub enum Factor {
    X,
    P,
    Exp(OperatorExpr),
}

/// `coeff * word[0] * word[1] * ...`; an empty word is a multiple of the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coeff: Complex64,
    pub word: Vec<Factor>,
}

/// A Hamiltonian as a sum of complex-weighted operator words.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct OperatorExpr {
    pub terms: Vec<Term>,
}

impl OperatorExpr {
    pub fn scalar(c: Complex64) -> Self {
        Self {
            terms: vec![Term { coeff: c, word: Vec::new() }],
        }
    }

    /// True when no term contains an operator factor.
    pub fn is_scalar(&self) -> bool {
        self.terms.iter().all(|t| t.word.is_empty())
    }

    fn scaled(mut self, c: Complex64) -> Self {
        for t in &mut self.terms {
            t.coeff *= c;
        }
        self
    }

    fn product(&self, rhs: &Self) -> Result<Self, ParseError> {
        if self.terms.len().saturating_mul(rhs.terms.len()) > MAX_TERMS {
            return Err(ParseError::TooManyTerms { limit: MAX_TERMS });
        }
        let terms = self
            .terms
            .iter()
            .flat_map(|a| {
                rhs.terms.iter().map(move |b| Term {
                    coeff: a.coeff * b.coeff,
                    word: a.word.iter().chain(&b.word).cloned().collect(),
                })
            })
            .collect();
        Ok(Self { terms })
    }
}

/// Parameter values substituted by [`bind`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParamBindings {
    values: BTreeMap<String, Complex64>,
}

impl ParamBindings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: &str, value: Complex64) -> Result<(), ParseError> {
        let valid = name
            .chars()
            .next()
            .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !valid || matches!(name, "x" | "p" | "i" | "exp") {
            return Err(ParseError::InvalidParamName(name.to_string()));
        }
        self.values.insert(name.to_string(), value);
        Ok(())
    }

    pub fn with(mut self, name: &str, value: impl Into<Complex64>) -> Result<Self, ParseError> {
        self.insert(name, value.into())?;
        Ok(self)
    }

    pub fn get(&self, name: &str) -> Option<Complex64> {
        self.values.get(name).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Complex64)> {
        self.values.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

enum Value {
    Scalar(Complex64),
    Op(OperatorExpr),
}

impl Value {
    fn into_expr(self) -> OperatorExpr {
        match self {
            Value::Scalar(c) => OperatorExpr::scalar(c),
            Value::Op(e) => e,
        }
    }
}

/// Substitutes parameters, folds scalar subexpressions and expands products
/// and powers into a flat sum of terms.
pub fn bind(ast: &Ast, params: &ParamBindings) -> Result<OperatorExpr, ParseError> {
    Ok(lower(ast, params)?.into_expr())
}

fn lower(ast: &Ast, params: &ParamBindings) -> Result<Value, ParseError> {
    let one = Complex64::new(1.0, 0.0);
    Ok(match ast {
        Ast::Number(v) => Value::Scalar(Complex64::new(*v, 0.0)),
        Ast::Imag => Value::Scalar(Complex64::i()),
        Ast::Ident(name) => Value::Scalar(
            params
                .get(name)
                .ok_or_else(|| ParseError::UnboundIdentifier(name.clone()))?,
        ),
        Ast::X => Value::Op(word(Factor::X)),
        Ast::P => Value::Op(word(Factor::P)),
        Ast::Exp(body) => match lower(body, params)? {
            Value::Scalar(s) => Value::Scalar(s.exp()),
            Value::Op(e) => Value::Op(word(Factor::Exp(e))),
        },
        Ast::Neg(a) => match lower(a, params)? {
            Value::Scalar(s) => Value::Scalar(-s),
            Value::Op(e) => Value::Op(e.scaled(-one)),
        },
        Ast::Add(a, b) | Ast::Sub(a, b) => {
            let sign = if matches!(ast, Ast::Sub(..)) { -one } else { one };
            match (lower(a, params)?, lower(b, params)?) {
                (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(x + sign * y),
                (x, y) => {
                    let mut sum = x.into_expr();
                    sum.terms.extend(y.into_expr().scaled(sign).terms);
                    if sum.terms.len() > MAX_TERMS {
                        return Err(ParseError::TooManyTerms { limit: MAX_TERMS });
                    }
                    Value::Op(sum)
                }
            }
        }
        Ast::Mul(a, b) => match (lower(a, params)?, lower(b, params)?) {
            (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(x * y),
            (Value::Scalar(c), Value::Op(e)) | (Value::Op(e), Value::Scalar(c)) => {
                Value::Op(e.scaled(c))
            }
            (Value::Op(x), Value::Op(y)) => Value::Op(x.product(&y)?),
        },
        Ast::Pow(base, n) => match lower(base, params)? {
            Value::Scalar(s) => Value::Scalar(s.powu(*n)),
            Value::Op(_) if *n == 0 => Value::Scalar(one),
            Value::Op(e) => {
                let mut acc = e.clone();
                for _ in 1..*n {
                    acc = acc.product(&e)?;
                }
                Value::Op(acc)
            }
        },
    })
}

fn word(f: Factor) -> OperatorExpr {
    OperatorExpr {
        terms: vec![Term {
            coeff: Complex64::new(1.0, 0.0),
            word: vec![f],
        }],
    }
}

/// Drops exactly-zero terms and folds exponentials whose body reduces to a
/// scalar, recursively. Factor order and term order are kept; terms are never
/// merged.
pub fn canonicalize(expr: OperatorExpr) -> OperatorExpr {
    let mut terms = Vec::with_capacity(expr.terms.len());
    for term in expr.terms {
        let mut coeff = term.coeff;
        let mut word = Vec::with_capacity(term.word.len());
        for f in term.word {
            match f {
                Factor::Exp(body) => {
                    let body = canonicalize(body);
                    if body.is_scalar() {
                        let s: Complex64 = body.terms.iter().map(|t| t.coeff).sum();
                        coeff *= s.exp();
                    } else {
                        word.push(Factor::Exp(body));
                    }
                }
                other => word.push(other),
            }
        }
        if coeff != Complex64::new(0.0, 0.0) {
            terms.push(Term { coeff, word });
        }
    }
    OperatorExpr { terms }
}

fn fmt_coeff(c: Complex64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let sign = if c.im.is_sign_negative() { '-' } else { '+' };
    write!(f, "({}{}{}*i)", c.re, sign, c.im.abs())
}

/// Prints in the input grammar; re-parsing gives back the same expression.
impl fmt::Display for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, term) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            let unit = term.coeff == Complex64::new(1.0, 0.0) && !term.word.is_empty();
            if !unit {
                fmt_coeff(term.coeff, f)?;
            }
            for (j, factor) in term.word.iter().enumerate() {
                if j > 0 || !unit {
                    f.write_str("*")?;
                }
                match factor {
                    Factor::X => f.write_str("x")?,
                    Factor::P => f.write_str("p")?,
                    Factor::Exp(body) => write!(f, "exp({body})")?,
                }
            }
        }
        Ok(())
    }
}
