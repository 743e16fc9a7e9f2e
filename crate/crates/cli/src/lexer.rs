//! Tokens of one script line.

use crate::parser::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(u64),
    Sym(char),
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Sym(c) => write!(f, "`{c}`"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    /// 1-based column of the first character.
    pub col: usize,
}

const SYMBOLS: &[char] = &['=', '*', '+', '-', '(', ')', ',', '{', '}', '^', '.'];

/// Splits a line into tokens; everything after `#` is a comment.
pub fn lex_line(line: &str, line_no: usize) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), col });
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let n = text
                .parse::<u64>()
                .map_err(|_| ParseError::new(line_no, col, format!("integer literal {text} is too large")))?;
            out.push(Token { tok: Tok::Int(n), col });
        } else if SYMBOLS.contains(&c) {
            out.push(Token { tok: Tok::Sym(c), col });
            i += 1;
        } else {
            return Err(ParseError::new(line_no, col, format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_and_columns() {
        let toks = lex_line("base P2 * P2  # comment", 1).unwrap();
        let kinds: Vec<Tok> = toks.iter().map(|t| t.tok.clone()).collect();
        assert_eq!(kinds, vec![Tok::Ident("base".into()), Tok::Ident("P2".into()), Tok::Sym('*'), Tok::Ident("P2".into())]);
        assert_eq!(toks.iter().map(|t| t.col).collect::<Vec<_>>(), vec![1, 6, 9, 11]);
        let err = lex_line("bundle F = O(1;0)", 3).unwrap_err();
        assert_eq!((err.line, err.col), (3, 15));
    }
}
