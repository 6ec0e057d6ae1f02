//! S-expression debug text for algebra expressions, one operator per line.
//! Not a stable format.

use std::fmt::{self, Write};

use super::expr::{Expr, ExtendExpr, ExtractSpec, RmlMappingExpr, TorbExpr, TorbPart, TrMapExpr};
use crate::rdf::write_quoted;

fn torb(f: &mut impl Write, e: &TorbExpr) -> fmt::Result {
    fn part(f: &mut impl Write, p: &TorbPart) -> fmt::Result {
        match p {
            TorbPart::Str(s) => write_quoted(f, s),
            TorbPart::Attr(a) => write!(f, "{a}"),
        }
    }
    match e {
        TorbExpr::Str(s) => write_quoted(f, s),
        TorbExpr::Attr(a) => write!(f, "{a}"),
        TorbExpr::Concat(parts) => {
            f.write_str("(concat")?;
            for p in parts {
                f.write_char(' ')?;
                part(f, p)?;
            }
            f.write_char(')')
        }
    }
}

impl fmt::Display for ExtendExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendExpr::Const(t) => write!(f, "(const {t})"),
            ExtendExpr::BNode(b) => write!(f, "(const {b})"),
            ExtendExpr::ToLiteral { body, datatype } => {
                f.write_str("(to-literal ")?;
                torb(f, body)?;
                write!(f, " {datatype})")
            }
            ExtendExpr::ToIri { body, base } => {
                f.write_str("(to-iri ")?;
                torb(f, body)?;
                write!(f, " {base})")
            }
            ExtendExpr::ToBNode { body } => {
                f.write_str("(to-bnode ")?;
                torb(f, body)?;
                f.write_char(')')
            }
        }
    }
}

impl fmt::Display for ExtractSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(extract ")?;
        write_quoted(f, self.source.as_str())?;
        write!(f, " {} ", self.source_type.id())?;
        write_quoted(f, &self.iterator)?;
        for (a, q) in &self.attr_queries {
            write!(f, " ({a} ")?;
            write_quoted(f, q)?;
            f.write_char(')')?;
        }
        f.write_char(')')
    }
}

fn write_expr(f: &mut fmt::Formatter<'_>, e: &Expr, depth: usize) -> fmt::Result {
    let pad = "  ".repeat(depth);
    match e {
        Expr::Extract(spec) => write!(f, "{pad}{spec}"),
        Expr::Extend { attr, expr, input } => {
            writeln!(f, "{pad}(extend {attr} {expr}")?;
            write_expr(f, input, depth + 1)?;
            f.write_char(')')
        }
        Expr::Project { attrs, input } => {
            let names: Vec<String> = attrs.iter().map(|a| a.to_string()).collect();
            writeln!(f, "{pad}(project ({})", names.join(" "))?;
            write_expr(f, input, depth + 1)?;
            f.write_char(')')
        }
        Expr::Join {
            left,
            right,
            conditions,
        } => {
            let conds: Vec<String> = conditions.iter().map(|(a, b)| format!("({a} {b})")).collect();
            writeln!(f, "{pad}(join ({})", conds.join(" "))?;
            write_expr(f, left, depth + 1)?;
            f.write_char('\n')?;
            write_expr(f, right, depth + 1)?;
            f.write_char(')')
        }
        Expr::Union { left, right } => {
            writeln!(f, "{pad}(union")?;
            write_expr(f, left, depth + 1)?;
            f.write_char('\n')?;
            write_expr(f, right, depth + 1)?;
            f.write_char(')')
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(f, self, 0)
    }
}

impl fmt::Display for TrMapExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "; {}", self.provenance())?;
        write!(f, "{}", self.to_expr())
    }
}

impl fmt::Display for RmlMappingExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, tm) in self.trmaps().iter().enumerate() {
            if i > 0 {
                f.write_char('\n')?;
            }
            writeln!(f, "{tm}")?;
        }
        Ok(())
    }
}
