//! Line-oriented lexer. Emits a flat token stream with explicit `Newline`
//! and `Continuation` markers so the parser can join continued statements.

use super::FrontendError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    /// Identifier or keyword, folded to uppercase.
    Ident(String),
    Int(i64),
    /// `'...'` string literal, with `''` unescaped to `'`.
    Str(String),
    RelOp(RelOp),
    Plus,
    Minus,
    Star,
    Slash,
    Assign,
    LParen,
    RParen,
    Comma,
    /// End of a source line.
    Newline,
    /// Leading `$`: this line continues the previous statement.
    Continuation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl RelOp {
    pub fn as_str(&self) -> &'static str {
        match self {
            RelOp::Eq => ".EQ.",
            RelOp::Ne => ".NE.",
            RelOp::Lt => ".LT.",
            RelOp::Le => ".LE.",
            RelOp::Gt => ".GT.",
            RelOp::Ge => ".GE.",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    /// 1-based source line.
    pub line: usize,
    /// 1-based column of the first character.
    pub col: usize,
}

fn is_comment_line(line: &str) -> bool {
    let mut chars = line.chars();
    match chars.next() {
        // Column-1 'C' is a comment only when it cannot start an identifier,
        // so "call ..." at column 1 still lexes as a statement.
        Some('C') | Some('c') => matches!(chars.next(), None | Some(' ') | Some('\t')),
        Some('!') => true,
        _ => line.trim_start().starts_with('!'),
    }
}

/// Tokenizes full source text. Lines may end with `\n` or `\r\n`; comment
/// and blank lines produce no tokens.
pub fn tokenize(source: &str) -> Result<Vec<Token>, FrontendError> {
    let mut tokens = Vec::new();
    for (i, raw) in source.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() || is_comment_line(line) {
            continue;
        }
        tokenize_line(line, line_no, &mut tokens)?;
        tokens.push(Token {
            tok: Tok::Newline,
            line: line_no,
            col: line.chars().count() + 1,
        });
    }
    Ok(tokens)
}

fn tokenize_line(line: &str, line_no: usize, out: &mut Vec<Token>) -> Result<(), FrontendError> {
    let chars: Vec<char> = line.chars().collect();
    let mut i = 0;
    let mut first = true;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            ' ' | '\t' => {
                i += 1;
                continue;
            }
            '$' if first => {
                out.push(Token {
                    tok: Tok::Continuation,
                    line: line_no,
                    col,
                });
                i += 1;
            }
            'A'..='Z' | 'a'..='z' | '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let ident: String = chars[start..i].iter().collect::<String>().to_uppercase();
                out.push(Token {
                    tok: Tok::Ident(ident),
                    line: line_no,
                    col,
                });
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let value = text
                    .parse::<i64>()
                    .map_err(|_| FrontendError::SyntaxError {
                        line: line_no,
                        expected: "integer literal".into(),
                        found: text.clone(),
                    })?;
                out.push(Token {
                    tok: Tok::Int(value),
                    line: line_no,
                    col,
                });
            }
            '\'' => {
                i += 1;
                let mut text = String::new();
                loop {
                    if i >= chars.len() {
                        return Err(FrontendError::SyntaxError {
                            line: line_no,
                            expected: "closing quote".into(),
                            found: "end of line".into(),
                        });
                    }
                    if chars[i] == '\'' {
                        if i + 1 < chars.len() && chars[i + 1] == '\'' {
                            text.push('\'');
                            i += 2;
                            continue;
                        }
                        i += 1;
                        break;
                    }
                    text.push(chars[i]);
                    i += 1;
                }
                out.push(Token {
                    tok: Tok::Str(text),
                    line: line_no,
                    col,
                });
            }
            '.' => {
                let start = i + 1;
                let mut j = start;
                while j < chars.len() && chars[j].is_ascii_alphabetic() {
                    j += 1;
                }
                if j >= chars.len() || chars[j] != '.' {
                    return Err(FrontendError::IllegalCharacter {
                        line: line_no,
                        col,
                        ch: '.',
                    });
                }
                let name: String = chars[start..j].iter().collect::<String>().to_uppercase();
                let op = match name.as_str() {
                    "EQ" => RelOp::Eq,
                    "NE" => RelOp::Ne,
                    "LT" => RelOp::Lt,
                    "LE" => RelOp::Le,
                    "GT" => RelOp::Gt,
                    "GE" => RelOp::Ge,
                    _ => {
                        return Err(FrontendError::SyntaxError {
                            line: line_no,
                            expected: "relational operator".into(),
                            found: format!(".{name}."),
                        })
                    }
                };
                out.push(Token {
                    tok: Tok::RelOp(op),
                    line: line_no,
                    col,
                });
                i = j + 1;
            }
            '+' | '-' | '*' | '/' | '=' | '(' | ')' | ',' => {
                let tok = match c {
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '/' => Tok::Slash,
                    '=' => Tok::Assign,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    _ => Tok::Comma,
                };
                out.push(Token {
                    tok,
                    line: line_no,
                    col,
                });
                i += 1;
            }
            _ => {
                return Err(FrontendError::IllegalCharacter {
                    line: line_no,
                    col,
                    ch: c,
                })
            }
        }
        first = false;
    }
    Ok(())
}
