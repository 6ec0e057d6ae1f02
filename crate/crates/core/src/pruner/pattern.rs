//! Matching patterns of torb expressions.
//!
//! A matching pattern is a POSIX extended regular expression built from
//! escaped string constants and `.+` per attribute. Matching is always over the
//! whole candidate string. The pattern class is small enough that a dedicated
//! wildcard matcher gives exact ERE semantics: `.` matches any character
//! (newlines included) and there is nothing else to interpret.

use std::fmt;

use crate::algebra::{TorbExpr, TorbPart};
use crate::error::{Error, Result};

/// Characters with a special meaning in POSIX EREs.
const ERE_SPECIAL: &[char] = &['.', '[', ']', '\\', '(', ')', '*', '+', '?', '{', '}', '|', '^', '$'];

/// Options controlling pattern construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PatternOptions {
    /// When set, an attribute reference is assumed to evaluate to a non-empty
    /// string and maps to `.+`. Otherwise it maps to `.*`, which stays sound
    /// for sources with empty cells.
    pub assume_nonempty_refs: bool,
}

impl Default for PatternOptions {
    fn default() -> Self {
        PatternOptions {
            assume_nonempty_refs: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Token {
    Char(char),
    /// `.`: exactly one character.
    Any,
    /// `.*` (also the tail of `.+`): zero or more characters.
    Star,
}

/// A fully anchored matching pattern.
#[derive(Clone, PartialEq, Eq)]
pub struct MatchingPattern {
    pattern: String,
    tokens: Vec<Token>,
}

pub fn escape_ere(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        if ERE_SPECIAL.contains(&c) {
            out.push('\\');
        }
        out.push(c);
    }
    out
}

/// `regex(φ)`
pub fn regex_of(phi: &TorbExpr, opts: PatternOptions) -> MatchingPattern {
    let attr = if opts.assume_nonempty_refs { ".+" } else { ".*" };
    let mut pattern = String::new();
    for part in phi.parts() {
        match part {
            TorbPart::Str(s) => pattern.push_str(&escape_ere(&s)),
            TorbPart::Attr(_) => pattern.push_str(attr),
        }
    }
    MatchingPattern::parse(&pattern).expect("generated pattern is in the supported class")
}

impl MatchingPattern {
    /// Parses a pattern from the supported ERE class: literal characters,
    /// backslash escapes, `.+` and `.*`.
    pub fn parse(pattern: &str) -> Result<Self> {
        let mut tokens = Vec::new();
        let mut chars = pattern.chars().peekable();
        while let Some(c) = chars.next() {
            match c {
                '\\' => match chars.next() {
                    Some(e) => tokens.push(Token::Char(e)),
                    None => {
                        return Err(Error::Unsupported(format!(
                            "dangling escape in pattern {pattern:?}"
                        )))
                    }
                },
                '.' => match chars.peek() {
                    Some('+') => {
                        chars.next();
                        tokens.push(Token::Any);
                        tokens.push(Token::Star);
                    }
                    Some('*') => {
                        chars.next();
                        tokens.push(Token::Star);
                    }
                    _ => tokens.push(Token::Any),
                },
                c if ERE_SPECIAL.contains(&c) => {
                    return Err(Error::Unsupported(format!(
                        "operator {c:?} outside the matching-pattern class in {pattern:?}"
                    )))
                }
                c => tokens.push(Token::Char(c)),
            }
        }
        Ok(MatchingPattern {
            pattern: pattern.to_string(),
            tokens,
        })
    }

    /// The pattern formed by prefixing this one with an escaped string.
    pub fn with_literal_prefix(&self, prefix: &str) -> MatchingPattern {
        let escaped = escape_ere(prefix);
        let mut tokens: Vec<Token> = prefix.chars().map(Token::Char).collect();
        tokens.extend_from_slice(&self.tokens);
        MatchingPattern {
            pattern: format!("{escaped}{}", self.pattern),
            tokens,
        }
    }

    pub fn as_str(&self) -> &str {
        &self.pattern
    }

    /// Whole-string match (implicitly `^…$`).
    pub fn is_full_match(&self, candidate: &str) -> bool {
        let text: Vec<char> = candidate.chars().collect();
        let p = &self.tokens;
        let (mut pi, mut ti) = (0usize, 0usize);
        // Position of the last star seen and the text index it was tried at.
        let mut backtrack: Option<(usize, usize)> = None;
        while ti < text.len() {
            match p.get(pi) {
                Some(Token::Any) => {
                    pi += 1;
                    ti += 1;
                }
                Some(Token::Char(c)) if *c == text[ti] => {
                    pi += 1;
                    ti += 1;
                }
                Some(Token::Star) => {
                    backtrack = Some((pi, ti));
                    pi += 1;
                }
                _ => match backtrack {
                    Some((star, from)) => {
                        pi = star + 1;
                        ti = from + 1;
                        backtrack = Some((star, from + 1));
                    }
                    None => return false,
                },
            }
        }
        p[pi..].iter().all(|t| *t == Token::Star)
    }
}

impl fmt::Debug for MatchingPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "/{}/", self.pattern)
    }
}

impl fmt::Display for MatchingPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pattern)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Attribute;

    fn opts() -> PatternOptions {
        PatternOptions::default()
    }

    #[test]
    fn attribute_maps_to_dot_plus() {
        assert_eq!(regex_of(&TorbExpr::attr("long"), opts()).as_str(), ".+");
    }

    #[test]
    fn template_escapes_literal_prefix() {
        let phi = TorbExpr::Concat(vec![
            TorbPart::Str("http://example.com/route/".into()),
            TorbPart::Attr(Attribute::new("transitRoute")),
        ]);
        assert_eq!(regex_of(&phi, opts()).as_str(), r"http://example\.com/route/.+");
    }

    #[test]
    fn single_special_character() {
        assert_eq!(regex_of(&TorbExpr::Str("a+b".into()), opts()).as_str(), r"a\+b");
        assert_eq!(
            escape_ere(r".[]\()*+?{}|^$"),
            r"\.\[\]\\\(\)\*\+\?\{\}\|\^\$"
        );
    }

    #[test]
    fn full_anchoring() {
        let p = MatchingPattern::parse(r"http://example\.com/route/.+").unwrap();
        assert!(p.is_full_match("http://example.com/route/43"));
        assert!(!p.is_full_match("http://example.com/route/"));
        assert!(!p.is_full_match("xhttp://example.com/route/43"));
        assert!(!p.is_full_match("http://exampleXcom/route/43"));
        assert!(!p.is_full_match("http://transit.api/route/43"));
    }

    #[test]
    fn dot_matches_newline() {
        let p = MatchingPattern::parse("a.+b").unwrap();
        assert!(p.is_full_match("a\nb"));
    }

    #[test]
    fn star_variant_for_empty_refs() {
        let relaxed = PatternOptions {
            assume_nonempty_refs: false,
        };
        let p = regex_of(&TorbExpr::attr("x"), relaxed);
        assert_eq!(p.as_str(), ".*");
        assert!(p.is_full_match(""));
        assert!(!regex_of(&TorbExpr::attr("x"), opts()).is_full_match(""));
    }

    #[test]
    fn prefix_is_escaped() {
        let p = regex_of(&TorbExpr::attr("x"), opts()).with_literal_prefix("http://b.org/");
        assert_eq!(p.as_str(), r"http://b\.org/.+");
        assert!(p.is_full_match("http://b.org/x"));
        assert!(!p.is_full_match("http://bXorg/x"));
    }

    #[test]
    fn backtracking_over_several_wildcards() {
        let p = MatchingPattern::parse(r"a.+-.+-c").unwrap();
        assert!(p.is_full_match("ax-y-z-c"));
        assert!(p.is_full_match("a--b--c"));
        assert!(!p.is_full_match("a-b-c"));
    }

    #[test]
    fn rejects_operators_outside_class() {
        assert!(MatchingPattern::parse("a|b").is_err());
        assert!(MatchingPattern::parse("(a)").is_err());
        assert!(MatchingPattern::parse("a\\").is_err());
    }
}
