use std::fmt;

use super::Diagnostic;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Name(String),
    Quoted(String),
    Nat(u64),
    LBrace,
    RBrace,
    Colon,
    Semi,
    Comma,
    Arrow,
    FatArrow,
    Equals,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Name(s) => write!(f, "`{s}`"),
            Tok::Quoted(s) => write!(f, "\"{s}\""),
            Tok::Nat(n) => write!(f, "`{n}`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::FatArrow => f.write_str("`=>`"),
            Tok::Equals => f.write_str("`=`"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spanned {
    pub tok: Tok,
    pub pos: Pos,
}

/// Characters allowed in an unquoted name.
pub fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '\'')
}

pub fn lex(text: &str) -> Result<Vec<Spanned>, Diagnostic> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);
    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else if c.is_some() {
                column += 1;
            }
            c
        }};
    }
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, column };
        let tok = match c {
            c if c.is_whitespace() => {
                bump!();
                continue;
            }
            '#' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    bump!();
                }
                continue;
            }
            '{' | '}' | ':' | ';' | ',' => {
                bump!();
                match c {
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    ':' => Tok::Colon,
                    ';' => Tok::Semi,
                    _ => Tok::Comma,
                }
            }
            '-' => {
                bump!();
                if bump!() != Some('>') {
                    return Err(Diagnostic::syntax(pos, "expected `->`"));
                }
                Tok::Arrow
            }
            '=' => {
                bump!();
                if chars.peek() == Some(&'>') {
                    bump!();
                    Tok::FatArrow
                } else {
                    Tok::Equals
                }
            }
            '"' => {
                bump!();
                let mut s = String::new();
                loop {
                    match bump!() {
                        Some('"') => break,
                        Some('\\') => match bump!() {
                            Some(e @ ('"' | '\\')) => s.push(e),
                            Some('n') => s.push('\n'),
                            _ => return Err(Diagnostic::syntax(pos, "invalid escape in quoted name")),
                        },
                        Some(c) => s.push(c),
                        None => return Err(Diagnostic::syntax(pos, "unterminated quoted name")),
                    }
                }
                Tok::Quoted(s)
            }
            c if is_name_char(c) => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if !is_name_char(c) {
                        break;
                    }
                    s.push(c);
                    bump!();
                }
                if s.bytes().all(|b| b.is_ascii_digit()) {
                    match s.parse() {
                        Ok(n) => Tok::Nat(n),
                        Err(_) => return Err(Diagnostic::syntax(pos, "number too large")),
                    }
                } else {
                    Tok::Name(s)
                }
            }
            other => return Err(Diagnostic::syntax(pos, format!("unexpected character `{other}`"))),
        };
        out.push(Spanned { tok, pos });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        lex(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn punctuation_names_and_numbers() {
        assert_eq!(
            toks("a -> b => \"L.x=R.y\" : 12; # comment\n,"),
            [
                Tok::Name("a".into()),
                Tok::Arrow,
                Tok::Name("b".into()),
                Tok::FatArrow,
                Tok::Quoted("L.x=R.y".into()),
                Tok::Colon,
                Tok::Nat(12),
                Tok::Semi,
                Tok::Comma
            ]
        );
        assert_eq!(
            toks("t1.q1 L.x'"),
            [Tok::Name("t1.q1".into()), Tok::Name("L.x'".into())]
        );
    }

    #[test]
    fn positions_and_errors() {
        let t = lex("a\n  b").unwrap();
        assert_eq!(t[1].pos, Pos { line: 2, column: 3 });
        let e = lex("x\n -y").unwrap_err();
        assert_eq!((e.line, e.column), (2, 2));
        assert!(lex("\"open").unwrap_err().message.contains("unterminated"));
        assert!(lex("a @ b").unwrap_err().message.contains('@'));
    }
}
