use crate::error::{Error, Pos};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(super) enum Tok {
    /// Lowercase-initial identifier or keyword.
    Ident(String),
    /// `_n`: a bound name as printed by the normalizer.
    Bound(u32),
    /// Uppercase-initial identifier or `_Xn`.
    Var(String),
    Zero,
    Dot,
    Tilde,
    Bang,
    Bar,
    Comma,
    Arrow,
    LParen,
    RParen,
    LBrack,
    RBrack,
    LAngle,
    RAngle,
    Dollar,
    Epsilon,
    Eof,
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tok::Ident(s) | Tok::Var(s) => write!(f, "`{s}`"),
            Tok::Bound(i) => write!(f, "`_{i}`"),
            Tok::Zero => f.write_str("`0`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Tilde => f.write_str("`~`"),
            Tok::Bang => f.write_str("`!`"),
            Tok::Bar => f.write_str("`|`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Arrow => f.write_str("`=>`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBrack => f.write_str("`[`"),
            Tok::RBrack => f.write_str("`]`"),
            Tok::LAngle => f.write_str("`<`"),
            Tok::RAngle => f.write_str("`>`"),
            Tok::Dollar => f.write_str("`$`"),
            Tok::Epsilon => f.write_str("`ε`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

/// Splits `text` into tokens paired with byte offsets. `#` starts a
/// comment running to the end of the line.
pub(super) fn lex(text: &str) -> Result<Vec<(Tok, usize)>, Error> {
    let err = |at: usize, msg: String| Error::Parse {
        pos: Pos::of(text, at),
        msg,
    };
    let mut out = Vec::new();
    let mut it = text.char_indices().peekable();
    while let Some((i, c)) = it.next() {
        let tok = match c {
            c if c.is_whitespace() => continue,
            '#' => {
                while it.peek().is_some_and(|&(_, c)| c != '\n') {
                    it.next();
                }
                continue;
            }
            '0' if !it.peek().is_some_and(|&(_, c)| ident_char(c)) => Tok::Zero,
            '.' => Tok::Dot,
            '~' => Tok::Tilde,
            '!' => Tok::Bang,
            '|' => Tok::Bar,
            ',' => Tok::Comma,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBrack,
            ']' => Tok::RBrack,
            '<' => Tok::LAngle,
            '>' => Tok::RAngle,
            '$' => Tok::Dollar,
            'ε' => Tok::Epsilon,
            '=' => match it.next() {
                Some((_, '>')) => Tok::Arrow,
                _ => return Err(err(i, "expected `=>`".into())),
            },
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut end = i + c.len_utf8();
                while let Some(&(j, d)) = it.peek() {
                    if !ident_char(d) {
                        break;
                    }
                    end = j + d.len_utf8();
                    it.next();
                }
                let word = &text[i..end];
                if c.is_ascii_uppercase() {
                    Tok::Var(word.to_string())
                } else if c.is_ascii_lowercase() {
                    Tok::Ident(word.to_string())
                } else if let Some(Ok(n)) = word.strip_prefix('_').map(str::parse::<u32>) {
                    Tok::Bound(n)
                } else if word
                    .strip_prefix("_X")
                    .is_some_and(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
                {
                    Tok::Var(word.to_string())
                } else {
                    return Err(err(i, format!("malformed identifier `{word}`")));
                }
            }
            c => return Err(err(i, format!("unexpected character `{c}`"))),
        };
        out.push((tok, i));
    }
    out.push((Tok::Eof, text.len()));
    Ok(out)
}
