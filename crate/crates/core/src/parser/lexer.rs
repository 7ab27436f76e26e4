use super::ParseError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Ident,
    Number,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    ExpKw,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    /// Byte offset of the first character in the source.
    pub position: usize,
}

impl Token {
    fn new(kind: TokenKind, lexeme: &str, position: usize) -> Self {
        Self {
            kind,
            lexeme: lexeme.to_string(),
            position,
        }
    }
}

/// Splits an expression into tokens. Whitespace is skipped; everything else
/// must belong to a token.
pub fn tokenize(source: &str) -> Result<Vec<Token>, ParseError> {
    if source.trim().is_empty() {
        return Err(ParseError::EmptyInput);
    }
    let bytes = source.as_bytes();
    let mut tokens = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let c = bytes[pos];
        let single = match c {
            b'+' => Some(TokenKind::Plus),
            b'-' => Some(TokenKind::Minus),
            b'*' => Some(TokenKind::Star),
            b'^' => Some(TokenKind::Caret),
            b'(' => Some(TokenKind::LParen),
            b')' => Some(TokenKind::RParen),
            _ => None,
        };
        if let Some(kind) = single {
            tokens.push(Token::new(kind, &source[pos..pos + 1], pos));
            pos += 1;
        } else if c.is_ascii_whitespace() {
            pos += 1;
        } else if c.is_ascii_digit() || c == b'.' {
            let start = pos;
            while pos < bytes.len() && (bytes[pos].is_ascii_digit() || bytes[pos] == b'.') {
                pos += 1;
            }
            let lexeme = &source[start..pos];
            if !is_decimal(lexeme) {
                return Err(ParseError::MalformedNumber {
                    lexeme: lexeme.to_string(),
                    position: start,
                });
            }
            tokens.push(Token::new(TokenKind::Number, lexeme, start));
        } else if c.is_ascii_alphabetic() || c == b'_' {
            let start = pos;
            while pos < bytes.len() && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'_') {
                pos += 1;
            }
            let lexeme = &source[start..pos];
            let kind = if lexeme == "exp" {
                TokenKind::ExpKw
            } else {
                TokenKind::Ident
            };
            tokens.push(Token::new(kind, lexeme, start));
        } else {
            let ch = source[pos..].chars().next().unwrap_or('?');
            return Err(ParseError::InvalidCharacter { ch, position: pos });
        }
    }
    Ok(tokens)
}

// digits[.digits]
fn is_decimal(s: &str) -> bool {
    let mut parts = s.splitn(2, '.');
    let int = parts.next().unwrap_or("");
    let frac = parts.next();
    let all_digits = |p: &str| !p.is_empty() && p.bytes().all(|b| b.is_ascii_digit());
    all_digits(int) && frac.is_none_or(all_digits)
}
