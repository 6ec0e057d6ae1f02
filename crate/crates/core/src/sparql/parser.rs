use super::lexer::{syntax_error, tokenize, Tok, Token};
use super::{GroupElement, GroupPattern, Projection, Query, SelectItem};
use crate::error::{Error, Result};
use crate::rdf::{
    has_scheme, Iri, Literal, PatternTerm, RdfTerm, TriplePattern, Variable, RDF_TYPE, XSD_BOOLEAN,
    XSD_DECIMAL, XSD_DOUBLE, XSD_INTEGER,
};

/// Keywords that are recognized only to be rejected.
const REJECTED: &[(&str, &str)] = &[
    ("UNION", "UNION"),
    ("MINUS", "MINUS"),
    ("GRAPH", "GRAPH"),
    ("SERVICE", "SERVICE"),
    ("BIND", "BIND"),
    ("VALUES", "VALUES"),
    ("FROM", "FROM / FROM NAMED"),
    ("ASK", "ASK queries"),
    ("CONSTRUCT", "CONSTRUCT queries"),
    ("DESCRIBE", "DESCRIBE queries"),
];

struct Parser<'a> {
    src: &'a str,
    toks: Vec<Token>,
    i: usize,
    base: Option<String>,
    prefixes: Vec<(String, String)>,
    anon: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.tok)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.i).map_or(self.src.len(), |t| t.start)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        syntax_error(self.src, self.offset(), msg)
    }

    fn next(&mut self) -> Result<Tok> {
        let t = self
            .toks
            .get(self.i)
            .map(|t| t.tok.clone())
            .ok_or_else(|| self.err("unexpected end of query"))?;
        self.i += 1;
        Ok(t)
    }

    fn is_word(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Word(w)) if w.eq_ignore_ascii_case(kw))
    }

    fn is_punct(&self, p: &str) -> bool {
        matches!(self.peek(), Some(Tok::Punct(q)) if *q == p)
    }

    fn eat_word(&mut self, kw: &str) -> bool {
        let yes = self.is_word(kw);
        if yes {
            self.i += 1;
        }
        yes
    }

    fn eat_punct(&mut self, p: &str) -> bool {
        let yes = self.is_punct(p);
        if yes {
            self.i += 1;
        }
        yes
    }

    fn expect_punct(&mut self, p: &str) -> Result<()> {
        if self.eat_punct(p) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{p}'")))
        }
    }

    fn reject_keywords(&self) -> Result<()> {
        if let Some(Tok::Word(w)) = self.peek() {
            if let Some((_, what)) = REJECTED.iter().find(|(k, _)| w.eq_ignore_ascii_case(k)) {
                return Err(Error::Unsupported(format!("{what} (at {})", self.where_())));
            }
        }
        Ok(())
    }

    fn where_(&self) -> String {
        let (l, c) = super::lexer::position(self.src, self.offset());
        format!("line {l}, column {c}")
    }

    fn resolve(&self, iri: &str) -> Result<Iri> {
        let abs = if has_scheme(iri) {
            iri.to_string()
        } else {
            let base = self
                .base
                .as_deref()
                .ok_or_else(|| self.err(format!("relative IRI <{iri}> without BASE")))?;
            oxiri::Iri::parse(base.to_string())
                .and_then(|b| b.resolve(iri))
                .map_err(|e| self.err(format!("cannot resolve <{iri}>: {e}")))?
                .into_inner()
        };
        Iri::new(abs).map_err(|e| self.err(e.to_string()))
    }

    fn expand(&self, prefix: &str, local: &str) -> Result<Iri> {
        let ns = self
            .prefixes
            .iter()
            .rev()
            .find(|(p, _)| p == prefix)
            .map(|(_, ns)| ns)
            .ok_or_else(|| self.err(format!("undeclared prefix '{prefix}:'")))?;
        Iri::new(format!("{ns}{local}")).map_err(|e| self.err(e.to_string()))
    }

    fn iri(&mut self) -> Result<Iri> {
        match self.next()? {
            Tok::Iri(s) => self.resolve(&s),
            Tok::PName(p, l) => self.expand(&p, &l),
            _ => {
                self.i -= 1;
                Err(self.err("expected an IRI"))
            }
        }
    }

    /// Source text of tokens `from..self.i`.
    fn text(&self, from: usize) -> String {
        if from >= self.i {
            return String::new();
        }
        self.src[self.toks[from].start..self.toks[self.i - 1].end].to_string()
    }

    /// Skips a balanced parenthesized expression; rejects EXISTS inside it.
    fn balanced(&mut self) -> Result<()> {
        self.expect_punct("(")?;
        let mut depth = 1;
        while depth > 0 {
            if self.is_word("EXISTS") {
                return Err(Error::Unsupported(format!("EXISTS (at {})", self.where_())));
            }
            match self.next()? {
                Tok::Punct("(") => depth += 1,
                Tok::Punct(")") => depth -= 1,
                Tok::Punct("{") | Tok::Punct("}") => {
                    self.i -= 1;
                    return Err(self.err("unexpected brace in expression"));
                }
                _ => {}
            }
        }
        Ok(())
    }

    fn prologue(&mut self) -> Result<()> {
        loop {
            if self.eat_word("BASE") {
                match self.next()? {
                    Tok::Iri(s) => {
                        let b = self.resolve(&s)?;
                        self.base = Some(b.into_string());
                    }
                    _ => return Err(self.err("expected IRI after BASE")),
                }
            } else if self.eat_word("PREFIX") {
                let Tok::PName(p, l) = self.next()? else {
                    return Err(self.err("expected prefix label"));
                };
                if !l.is_empty() {
                    return Err(self.err("expected prefix label ending in ':'"));
                }
                let Tok::Iri(ns) = self.next()? else {
                    return Err(self.err("expected namespace IRI"));
                };
                let ns = self.resolve(&ns)?;
                self.prefixes.push((p, ns.into_string()));
            } else {
                return Ok(());
            }
        }
    }

    fn var(&mut self) -> Result<Variable> {
        match self.next()? {
            Tok::Var(v) => Ok(Variable::new(v)),
            _ => {
                self.i -= 1;
                Err(self.err("expected a variable"))
            }
        }
    }

    fn select(&mut self) -> Result<(bool, bool, Projection)> {
        self.reject_keywords()?;
        if !self.eat_word("SELECT") {
            return Err(self.err("expected SELECT"));
        }
        let distinct = self.eat_word("DISTINCT");
        let reduced = !distinct && self.eat_word("REDUCED");
        if self.eat_punct("*") {
            return Ok((distinct, reduced, Projection::All));
        }
        let mut items = Vec::new();
        loop {
            match self.peek() {
                Some(Tok::Var(_)) => items.push(SelectItem::Var(self.var()?)),
                Some(Tok::Punct("(")) => {
                    self.i += 1;
                    let from = self.i;
                    let mut depth = 0;
                    while !(depth == 0 && self.is_word("AS")) {
                        match self.next()? {
                            Tok::Punct("(") => depth += 1,
                            Tok::Punct(")") if depth == 0 => {
                                self.i -= 1;
                                return Err(self.err("expected AS in select expression"));
                            }
                            Tok::Punct(")") => depth -= 1,
                            _ => {}
                        }
                    }
                    let expr = self.text(from);
                    self.i += 1;
                    let var = self.var()?;
                    self.expect_punct(")")?;
                    items.push(SelectItem::Expr { expr, var });
                }
                _ => break,
            }
        }
        if items.is_empty() {
            return Err(self.err("expected projection"));
        }
        Ok((distinct, reduced, Projection::Items(items)))
    }

    fn group(&mut self) -> Result<GroupPattern> {
        self.expect_punct("{")?;
        if self.is_word("SELECT") {
            return Err(Error::Unsupported(format!("subqueries (at {})", self.where_())));
        }
        let mut g = GroupPattern::default();
        loop {
            self.reject_keywords()?;
            match self.peek() {
                None => return Err(self.err("unterminated group")),
                Some(Tok::Punct("}")) => {
                    self.i += 1;
                    return Ok(g);
                }
                Some(Tok::Punct(".")) => self.i += 1,
                Some(Tok::Punct("{")) => {
                    let inner = self.group()?;
                    self.reject_keywords()?;
                    g.elements.push(GroupElement::Group(inner));
                }
                Some(Tok::Word(w)) if w.eq_ignore_ascii_case("OPTIONAL") => {
                    self.i += 1;
                    g.elements.push(GroupElement::Optional(self.group()?));
                }
                Some(Tok::Word(w)) if w.eq_ignore_ascii_case("FILTER") => {
                    self.i += 1;
                    g.elements.push(GroupElement::Filter(self.constraint()?));
                }
                _ => {
                    let tps = self.triples()?;
                    match g.elements.last_mut() {
                        Some(GroupElement::Triples(prev)) => prev.extend(tps),
                        _ => g.elements.push(GroupElement::Triples(tps)),
                    }
                }
            }
        }
    }

    fn constraint(&mut self) -> Result<String> {
        let from = self.i;
        if self.is_word("EXISTS") || self.is_word("NOT") {
            return Err(Error::Unsupported(format!("FILTER EXISTS (at {})", self.where_())));
        }
        match self.peek() {
            Some(Tok::Punct("(")) => self.balanced()?,
            Some(Tok::Word(_) | Tok::Iri(_) | Tok::PName(..)) => {
                self.i += 1;
                self.balanced()?;
            }
            _ => return Err(self.err("expected a constraint after FILTER")),
        }
        Ok(self.text(from))
    }

    fn term(&mut self, object: bool) -> Result<PatternTerm> {
        let start = self.i;
        let t = self.next()?;
        let lit = |lex: String, dt: &str| {
            PatternTerm::Term(Literal::new(lex, Iri::new(dt).expect("xsd datatype")).into())
        };
        Ok(match t {
            Tok::Var(v) => PatternTerm::Var(Variable::new(v)),
            Tok::Iri(s) => PatternTerm::from(self.resolve(&s)?),
            Tok::PName(p, l) => PatternTerm::from(self.expand(&p, &l)?),
            Tok::BNode(b) => PatternTerm::Var(Variable::blank(&b)),
            Tok::Punct("[") if self.eat_punct("]") => {
                self.anon += 1;
                PatternTerm::Var(Variable::blank(&format!("anon{}", self.anon)))
            }
            Tok::Punct("[") => {
                self.i = start;
                return Err(Error::Unsupported(format!(
                    "blank node property lists (at {})",
                    self.where_()
                )));
            }
            Tok::Punct("(") => {
                self.i = start;
                return Err(Error::Unsupported(format!("collections (at {})", self.where_())));
            }
            _ if !object => {
                self.i = start;
                return Err(self.err("expected a variable or IRI"));
            }
            Tok::Str(s) => {
                if let Some(Tok::LangTag(_)) = self.peek() {
                    return Err(Error::Unsupported(format!(
                        "language-tagged literals (at {})",
                        self.where_()
                    )));
                }
                if self.eat_caret() {
                    let dt = self.iri()?;
                    PatternTerm::Term(Literal::new(s, dt).into())
                } else {
                    PatternTerm::Term(RdfTerm::Literal(Literal::string(s)))
                }
            }
            Tok::Integer(n) => lit(n, XSD_INTEGER),
            Tok::Decimal(n) => lit(n, XSD_DECIMAL),
            Tok::Double(n) => lit(n, XSD_DOUBLE),
            Tok::Punct(sign @ ("+" | "-")) => {
                let (n, dt) = match self.next()? {
                    Tok::Integer(n) => (n, XSD_INTEGER),
                    Tok::Decimal(n) => (n, XSD_DECIMAL),
                    Tok::Double(n) => (n, XSD_DOUBLE),
                    _ => {
                        self.i = start;
                        return Err(self.err("expected a number after sign"));
                    }
                };
                lit(format!("{sign}{n}"), dt)
            }
            Tok::Word(w) if w == "true" || w == "false" => lit(w, XSD_BOOLEAN),
            _ => {
                self.i = start;
                return Err(self.err("expected an RDF term or variable"));
            }
        })
    }

    fn eat_caret(&mut self) -> bool {
        if let Some(Tok::DoubleCaret) = self.peek() {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn verb(&mut self) -> Result<PatternTerm> {
        if let Some(Tok::Punct("^" | "!" | "(")) = self.peek() {
            return Err(Error::Unsupported(format!("property paths (at {})", self.where_())));
        }
        let v = if self.is_word("a") {
            self.i += 1;
            PatternTerm::from(Iri::new(RDF_TYPE).expect("rdf:type"))
        } else {
            self.term(false)?
        };
        if let Some(Tok::Punct("/" | "|" | "*" | "+" | "?")) = self.peek() {
            return Err(Error::Unsupported(format!("property paths (at {})", self.where_())));
        }
        Ok(v)
    }

    fn triples(&mut self) -> Result<Vec<TriplePattern>> {
        let mut out = Vec::new();
        let s = self.term(false)?;
        loop {
            let at = self.i;
            let p = self.verb()?;
            loop {
                let o = self.term(true)?;
                let tp = TriplePattern::new(s.clone(), p.clone(), o).map_err(|e| {
                    syntax_error(self.src, self.toks[at].start, e.to_string())
                })?;
                out.push(tp);
                if !self.eat_punct(",") {
                    break;
                }
            }
            if !self.eat_punct(";") {
                break;
            }
            while self.eat_punct(";") {}
            if matches!(self.peek(), Some(Tok::Punct("." | "}"))) {
                break;
            }
        }
        if !matches!(self.peek(), Some(Tok::Punct("." | "}"))) {
            if let Some(Tok::Word(w)) = self.peek() {
                if REJECTED.iter().any(|(k, _)| w.eq_ignore_ascii_case(k))
                    || w.eq_ignore_ascii_case("OPTIONAL")
                    || w.eq_ignore_ascii_case("FILTER")
                {
                    return Ok(out);
                }
            }
            if matches!(self.peek(), Some(Tok::Punct("{"))) {
                return Ok(out);
            }
            return Err(self.err("expected '.' or '}' after triple pattern"));
        }
        Ok(out)
    }

    /// Raw text of a clause body up to the next clause keyword.
    fn clause(&mut self, stop: &[&str]) -> Result<String> {
        let from = self.i;
        while self.peek().is_some() && !stop.iter().any(|k| self.is_word(k)) {
            if self.is_punct("(") {
                self.balanced()?;
            } else {
                self.i += 1;
            }
        }
        if from == self.i {
            return Err(self.err("empty clause"));
        }
        Ok(self.text(from))
    }

    fn number(&mut self) -> Result<u64> {
        match self.next()? {
            Tok::Integer(n) => n.parse().map_err(|_| self.err("number too large")),
            _ => {
                self.i -= 1;
                Err(self.err("expected an integer"))
            }
        }
    }
}

/// Parses a SELECT query of the supported subset.
pub fn parse_query(input: &str) -> Result<Query> {
    let mut p = Parser {
        src: input,
        toks: tokenize(input)?,
        i: 0,
        base: None,
        prefixes: Vec::new(),
        anon: 0,
    };
    p.prologue()?;
    let (distinct, reduced, projection) = p.select()?;
    p.reject_keywords()?;
    p.eat_word("WHERE");
    let pattern = p.group()?;
    let mut q = Query {
        base: p.base.clone(),
        prefixes: p.prefixes.clone(),
        distinct,
        reduced,
        projection,
        pattern,
        group_by: None,
        having: None,
        order_by: None,
        limit: None,
        offset: None,
    };
    const STOP: &[&str] = &["GROUP", "HAVING", "ORDER", "LIMIT", "OFFSET", "VALUES"];
    if p.eat_word("GROUP") {
        if !p.eat_word("BY") {
            return Err(p.err("expected BY"));
        }
        q.group_by = Some(p.clause(STOP)?);
    }
    if p.eat_word("HAVING") {
        q.having = Some(p.clause(STOP)?);
    }
    if p.eat_word("ORDER") {
        if !p.eat_word("BY") {
            return Err(p.err("expected BY"));
        }
        q.order_by = Some(p.clause(STOP)?);
    }
    for _ in 0..2 {
        if p.eat_word("LIMIT") {
            q.limit = Some(p.number()?);
        } else if p.eat_word("OFFSET") {
            q.offset = Some(p.number()?);
        }
    }
    p.reject_keywords()?;
    if p.peek().is_some() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(q)
}
