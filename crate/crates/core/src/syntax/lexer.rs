//! Tokenizer shared by the program and formula parsers.

use super::SyntaxError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    /// Constant or predicate name (`foo`, `__aux_x`).
    Ident(String),
    /// Variable (`X`, `_Y`).
    Var(String),
    Anon,
    Int(i64),
    /// `#count`, `#minimize`, `#const`, ...
    Hash(String),
    /// Debug label comment `%@ ...` (raw text after the marker).
    Label(String),
    Not,
    Dot,
    DotDot,
    Comma,
    Semi,
    Colon,
    If,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Plus,
    Minus,
    Star,
    Slash,
    Amp,
    Bar,
    Arrow,
    DArrow,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) | Tok::Var(s) => format!("`{s}`"),
            Tok::Anon => "`_`".into(),
            Tok::Int(v) => format!("`{v}`"),
            Tok::Hash(s) => format!("`#{s}`"),
            Tok::Label(_) => "label comment".into(),
            Tok::Eof => "end of input".into(),
            other => format!("`{}`", other.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::Not => "not",
            Tok::Dot => ".",
            Tok::DotDot => "..",
            Tok::Comma => ",",
            Tok::Semi => ";",
            Tok::Colon => ":",
            Tok::If => ":-",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::Eq => "=",
            Tok::Ne => "!=",
            Tok::Lt => "<",
            Tok::Le => "<=",
            Tok::Gt => ">",
            Tok::Ge => ">=",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Amp => "&",
            Tok::Bar => "|",
            Tok::Arrow => "->",
            Tok::DArrow => "<->",
            _ => "?",
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

fn ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<Spanned>, SyntaxError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let err = |msg: String| SyntaxError::Parse { line: tl, col: tc, message: msg };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '%' {
            let start = i;
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            let comment: String = chars[start..i].iter().collect();
            col += i - start;
            if let Some(rest) = comment.strip_prefix("%@") {
                out.push(Spanned { tok: Tok::Label(rest.trim().to_string()), line: tl, col: tc });
            }
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let v = s.parse::<i64>().map_err(|_| err(format!("integer `{s}` out of range")))?;
            col += i - start;
            out.push(Spanned { tok: Tok::Int(v), line: tl, col: tc });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && ident_char(chars[i]) {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            let first = s.trim_start_matches('_').chars().next();
            let tok = match first {
                None if s == "_" => Tok::Anon,
                None => return Err(err(format!("malformed identifier `{s}`"))),
                Some(_) if s == "not" => Tok::Not,
                Some(f) if f.is_ascii_uppercase() => Tok::Var(s),
                Some(f) if f.is_ascii_lowercase() => Tok::Ident(s),
                Some(_) => return Err(err(format!("malformed identifier `{s}`"))),
            };
            out.push(Spanned { tok, line: tl, col: tc });
            continue;
        }
        if c == '#' {
            let start = i + 1;
            i += 1;
            while i < chars.len() && chars[i].is_ascii_alphabetic() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            if s.is_empty() {
                return Err(err("expected directive name after `#`".into()));
            }
            col += i - start + 1;
            out.push(Spanned { tok: Tok::Hash(s), line: tl, col: tc });
            continue;
        }
        let next = chars.get(i + 1).copied();
        let next2 = chars.get(i + 2).copied();
        let (tok, len) = match (c, next) {
            ('.', Some('.')) => (Tok::DotDot, 2),
            ('.', _) => (Tok::Dot, 1),
            (':', Some('-')) => (Tok::If, 2),
            (':', _) => (Tok::Colon, 1),
            (',', _) => (Tok::Comma, 1),
            (';', _) => (Tok::Semi, 1),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            ('{', _) => (Tok::LBrace, 1),
            ('}', _) => (Tok::RBrace, 1),
            ('=', Some('=')) => (Tok::Eq, 2),
            ('=', _) => (Tok::Eq, 1),
            ('!', Some('=')) => (Tok::Ne, 2),
            ('<', Some('-')) if next2 == Some('>') => (Tok::DArrow, 3),
            ('<', Some('=')) => (Tok::Le, 2),
            ('<', _) => (Tok::Lt, 1),
            ('>', Some('=')) => (Tok::Ge, 2),
            ('>', _) => (Tok::Gt, 1),
            ('-', Some('>')) => (Tok::Arrow, 2),
            ('-', _) => (Tok::Minus, 1),
            ('+', _) => (Tok::Plus, 1),
            ('*', _) => (Tok::Star, 1),
            ('/', _) => (Tok::Slash, 1),
            ('&', _) => (Tok::Amp, 1),
            ('|', _) => (Tok::Bar, 1),
            _ => return Err(err(format!("unexpected character `{c}`"))),
        };
        i += len;
        col += len;
        out.push(Spanned { tok, line: tl, col: tc });
    }
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn identifiers_follow_case_convention() {
        assert_eq!(
            toks("p(X,_,_Y,__aux_a)"),
            vec![
                Tok::Ident("p".into()),
                Tok::LParen,
                Tok::Var("X".into()),
                Tok::Comma,
                Tok::Anon,
                Tok::Comma,
                Tok::Var("_Y".into()),
                Tok::Comma,
                Tok::Ident("__aux_a".into()),
                Tok::RParen,
                Tok::Eof
            ]
        );
    }

    #[test]
    fn operators_and_labels() {
        assert_eq!(
            toks(":- a. %@ lbl(X)\n1..3 <-> -> != <="),
            vec![
                Tok::If,
                Tok::Ident("a".into()),
                Tok::Dot,
                Tok::Label("lbl(X)".into()),
                Tok::Int(1),
                Tok::DotDot,
                Tok::Int(3),
                Tok::DArrow,
                Tok::Arrow,
                Tok::Ne,
                Tok::Le,
                Tok::Eof
            ]
        );
    }

    #[test]
    fn positions_are_tracked() {
        let t = tokenize("a.\n  b").unwrap();
        assert_eq!((t[2].line, t[2].col), (2, 3));
        assert!(matches!(tokenize("a ? b"), Err(SyntaxError::Parse { line: 1, col: 3, .. })));
    }
}
