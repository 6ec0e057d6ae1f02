use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Tok {
    Iri(String),
    /// `prefix:local`, with the local part unescaped.
    PName(String, String),
    Var(String),
    BNode(String),
    Str(String),
    LangTag(String),
    DoubleCaret,
    Integer(String),
    Decimal(String),
    Double(String),
    /// Keywords, function names and `a`.
    Word(String),
    Punct(&'static str),
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub start: usize,
    pub end: usize,
}

const PUNCTS: &[&str] = &[
    "&&", "||", "!=", "<=", ">=", "{", "}", "(", ")", "[", "]", ".", ";", ",", "*", "=", "<", ">",
    "!", "+", "-", "/", "|", "^", "?",
];

pub(crate) fn position(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

pub(crate) fn syntax_error(src: &str, offset: usize, message: impl Into<String>) -> Error {
    let (line, column) = position(src, offset);
    Error::Sparql {
        line,
        column,
        message: message.into(),
    }
}

fn is_name_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_var_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-'
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.src[self.pos..].chars().nth(n)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn err(&self, at: usize, msg: impl Into<String>) -> Error {
        syntax_error(self.src, at, msg)
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    /// `<...>` as an IRI if it is one, otherwise `None` with nothing consumed.
    fn try_iri(&mut self) -> Option<String> {
        let rest = &self.src[self.pos + 1..];
        let end = rest.find(|c: char| {
            c == '>' || c.is_whitespace() || matches!(c, '<' | '"' | '{' | '}' | '|' | '^' | '`')
        })?;
        if !rest[end..].starts_with('>') {
            return None;
        }
        let iri = rest[..end].to_string();
        self.pos += end + 2;
        Some(iri)
    }

    fn string(&mut self, quote: char) -> Result<String> {
        let start = self.pos;
        let long = self.peek_at(1) == Some(quote) && self.peek_at(2) == Some(quote);
        let n = if long { 3 } else { 1 };
        for _ in 0..n {
            self.bump();
        }
        let mut out = String::new();
        loop {
            let Some(c) = self.bump() else {
                return Err(self.err(start, "unterminated string"));
            };
            if c == quote {
                if !long {
                    return Ok(out);
                }
                if self.peek() == Some(quote) && self.peek_at(1) == Some(quote) {
                    self.bump();
                    self.bump();
                    return Ok(out);
                }
                out.push(c);
            } else if c == '\\' {
                let e = self.bump().ok_or_else(|| self.err(start, "unterminated string"))?;
                out.push(match e {
                    't' => '\t',
                    'n' => '\n',
                    'r' => '\r',
                    'b' => '\u{8}',
                    'f' => '\u{c}',
                    '"' | '\'' | '\\' => e,
                    'u' | 'U' => {
                        let len = if e == 'u' { 4 } else { 8 };
                        let at = self.pos;
                        let hex = self.src.get(at..at + len).ok_or_else(|| self.err(at, "bad escape"))?;
                        let ch = u32::from_str_radix(hex, 16)
                            .ok()
                            .and_then(char::from_u32)
                            .ok_or_else(|| self.err(at, "bad unicode escape"))?;
                        self.pos += len;
                        ch
                    }
                    _ => return Err(self.err(self.pos - 1, format!("unknown escape \\{e}"))),
                });
            } else if !long && (c == '\n' || c == '\r') {
                return Err(self.err(start, "newline in string"));
            } else {
                out.push(c);
            }
        }
    }

    fn number(&mut self) -> Tok {
        let start = self.pos;
        let mut seen_dot = false;
        let mut seen_exp = false;
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                self.bump();
            } else if c == '.' && !seen_dot && !seen_exp && self.peek_at(1).is_some_and(|d| d.is_ascii_digit()) {
                seen_dot = true;
                self.bump();
            } else if (c == 'e' || c == 'E') && !seen_exp {
                let sign = matches!(self.peek_at(1), Some('+' | '-'));
                let digit_at = if sign { 2 } else { 1 };
                if !self.peek_at(digit_at).is_some_and(|d| d.is_ascii_digit()) {
                    break;
                }
                seen_exp = true;
                self.bump();
                if sign {
                    self.bump();
                }
            } else {
                break;
            }
        }
        let text = self.src[start..self.pos].to_string();
        if seen_exp {
            Tok::Double(text)
        } else if seen_dot {
            Tok::Decimal(text)
        } else {
            Tok::Integer(text)
        }
    }

    fn name(&mut self) -> String {
        let start = self.pos;
        while self.peek().is_some_and(is_name_char) {
            self.bump();
        }
        self.src[start..self.pos].to_string()
    }

    /// The local part of a prefixed name; `.` is allowed inside but not last.
    fn local(&mut self) -> Result<String> {
        let mut out = String::new();
        loop {
            match self.peek() {
                Some(c) if is_name_char(c) || c == ':' => {
                    out.push(c);
                    self.bump();
                }
                Some('.') if self.peek_at(1).is_some_and(|c| is_name_char(c) || c == ':' || c == '.') => {
                    out.push('.');
                    self.bump();
                }
                Some('%') => {
                    let at = self.pos;
                    let hex = self.src.get(at + 1..at + 3).unwrap_or("");
                    if hex.len() != 2 || !hex.chars().all(|c| c.is_ascii_hexdigit()) {
                        return Err(self.err(at, "bad percent escape"));
                    }
                    out.push_str(&self.src[at..at + 3]);
                    self.pos += 3;
                }
                Some('\\') => {
                    self.bump();
                    match self.bump() {
                        Some(c) if "_~.-!$&'()*+,;=/?#@%".contains(c) => out.push(c),
                        _ => return Err(self.err(self.pos, "bad local name escape")),
                    }
                }
                _ => break,
            }
        }
        if out.ends_with('.') {
            return Err(self.err(self.pos, "prefixed name ends with '.'"));
        }
        Ok(out)
    }

    fn next(&mut self) -> Result<Option<Token>> {
        self.skip_ws();
        let start = self.pos;
        let Some(c) = self.peek() else {
            return Ok(None);
        };
        let tok = match c {
            '<' => match self.try_iri() {
                Some(iri) => Tok::Iri(iri),
                None => self.punct()?,
            },
            '?' | '$' if self.peek_at(1).is_some_and(is_var_char) => {
                self.bump();
                let at = self.pos;
                while self.peek().is_some_and(is_var_char) {
                    self.bump();
                }
                Tok::Var(self.src[at..self.pos].to_string())
            }
            '"' | '\'' => Tok::Str(self.string(c)?),
            '@' => {
                self.bump();
                let tag = self.name();
                if tag.is_empty() {
                    return Err(self.err(start, "empty language tag"));
                }
                Tok::LangTag(tag)
            }
            '^' if self.peek_at(1) == Some('^') => {
                self.pos += 2;
                Tok::DoubleCaret
            }
            '_' if self.peek_at(1) == Some(':') => {
                self.pos += 2;
                let label = self.name();
                if label.is_empty() {
                    return Err(self.err(start, "empty blank node label"));
                }
                Tok::BNode(label)
            }
            c if c.is_ascii_digit() => self.number(),
            '.' if self.peek_at(1).is_some_and(|d| d.is_ascii_digit()) => self.number(),
            ':' => {
                self.bump();
                Tok::PName(String::new(), self.local()?)
            }
            c if is_name_start(c) => {
                let word = self.name();
                if self.peek() == Some(':') {
                    self.bump();
                    Tok::PName(word, self.local()?)
                } else {
                    Tok::Word(word)
                }
            }
            _ => self.punct()?,
        };
        Ok(Some(Token {
            tok,
            start,
            end: self.pos,
        }))
    }

    fn punct(&mut self) -> Result<Tok> {
        let rest = &self.src[self.pos..];
        match PUNCTS.iter().find(|p| rest.starts_with(**p)) {
            Some(p) => {
                self.pos += p.len();
                Ok(Tok::Punct(p))
            }
            None => Err(self.err(
                self.pos,
                format!("unexpected character {:?}", self.peek().unwrap_or(' ')),
            )),
        }
    }
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<Token>> {
    let mut lx = Lexer { src, pos: 0 };
    let mut out = Vec::new();
    while let Some(t) = lx.next()? {
        out.push(t);
    }
    Ok(out)
}
