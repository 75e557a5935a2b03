use super::error::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    /// identifier immediately followed by `?`
    InName(String),
    /// identifier immediately followed by `!` (not `!=`)
    OutName(String),
    /// identifier immediately followed by `'`
    PrimedName(String),
    Int(i64),
    Sym(&'static str),
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::InName(s) => format!("`{s}?`"),
            Tok::OutName(s) => format!("`{s}!`"),
            Tok::PrimedName(s) => format!("`{s}'`"),
            Tok::Int(i) => format!("`{i}`"),
            Tok::Sym(s) => format!("`{s}`"),
            Tok::Eof => "end of input".to_string(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

// longest first
const SYMBOLS: &[&str] = &[
    ":=", "..", "!=", "<=", ">=", "=>", "++", "\\/", "\\\\", "{|", "|}", "(", ")", "[", "]", ",",
    ":", ";", "=", "<", ">", "+", "-", "#", "\\",
];

pub(crate) fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);

    while i < chars.len() {
        let c = chars[i];
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
        if c == '-' && chars.get(i + 1) == Some(&'-') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let (start_line, start_col) = (line, col);
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let name: String = chars[start..i].iter().collect();
            col += i - start;
            let tok = match chars.get(i) {
                Some('?') => {
                    i += 1;
                    col += 1;
                    Tok::InName(name)
                }
                Some('!') if chars.get(i + 1) != Some(&'=') => {
                    i += 1;
                    col += 1;
                    Tok::OutName(name)
                }
                Some('\'') => {
                    i += 1;
                    col += 1;
                    Tok::PrimedName(name)
                }
                _ => Tok::Ident(name),
            };
            out.push(Token { tok, line: start_line, col: start_col });
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            col += i - start;
            let value = text.parse::<i64>().map_err(|_| ParseError {
                line: start_line,
                col: start_col,
                expected: vec!["integer literal within 64-bit range".into()],
                found: format!("`{text}`"),
            })?;
            out.push(Token { tok: Tok::Int(value), line: start_line, col: start_col });
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
        match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
            Some(sym) => {
                let n = sym.chars().count();
                i += n;
                col += n;
                out.push(Token { tok: Tok::Sym(sym), line: start_line, col: start_col });
            }
            None => {
                return Err(ParseError {
                    line: start_line,
                    col: start_col,
                    expected: vec!["a token".into()],
                    found: format!("`{c}`"),
                })
            }
        }
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn decorations_and_operators() {
        assert_eq!(
            toks("x! = min(b) -- trailing comment\n x != y"),
            vec![
                Tok::OutName("x".into()),
                Tok::Sym("="),
                Tok::Ident("min".into()),
                Tok::Sym("("),
                Tok::Ident("b".into()),
                Tok::Sym(")"),
                Tok::Ident("x".into()),
                Tok::Sym("!="),
                Tok::Ident("y".into()),
                Tok::Eof,
            ]
        );
    }

    #[test]
    fn bag_symbols() {
        assert_eq!(
            toks("b \\/ {|x|} \\ c"),
            vec![
                Tok::Ident("b".into()),
                Tok::Sym("\\/"),
                Tok::Sym("{|"),
                Tok::Ident("x".into()),
                Tok::Sym("|}"),
                Tok::Sym("\\"),
                Tok::Ident("c".into()),
                Tok::Eof,
            ]
        );
    }

    #[test]
    fn positions() {
        let t = tokenize("a\n  b").unwrap();
        assert_eq!((t[1].line, t[1].col), (2, 3));
    }
}
