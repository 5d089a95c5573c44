//! Query language.
//!
//! ```text
//! query   := or ;
//! or      := and { "OR" and } ;
//! and     := diff { "AND" diff } ;
//! diff    := primary { "ANDNOT" primary } ;
//! primary := termref [ "WITH" "[" reltype ":" termref "]" ] | "(" query ")" ;
//! termref := [ "=" ] ( IDENT | QUOTED_LABEL ) ;
//! ```
//!
//! Keywords are upper case and reserved. Binary operators associate to the
//! left.

use std::fmt;

use crate::algebra::RelationType;
use crate::error::QueryParseError;
use crate::model::is_valid_id;

/// A concept reference as written: an id or a double-quoted label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermRef {
    pub reference: String,
    /// `=` prefix: no downward expansion.
    pub exact: bool,
}

impl TermRef {
    pub fn new(reference: impl Into<String>, exact: bool) -> Self {
        TermRef { reference: reference.into(), exact }
    }
}

impl fmt::Display for TermRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exact {
            f.write_str("=")?;
        }
        f.write_str(&self.reference)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Query {
    Term(TermRef),
    /// Constraint query over the subtree of a single concept.
    With {
        base: TermRef,
        rel: RelationType,
        target: TermRef,
    },
    And(Box<Query>, Box<Query>),
    Or(Box<Query>, Box<Query>),
    AndNot(Box<Query>, Box<Query>),
}

/// Fully parenthesized rendering that parses back to the same tree.
impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Query::Term(t) => write!(f, "{t}"),
            Query::With { base, rel, target } => write!(f, "{base} WITH [{rel}: {target}]"),
            Query::And(l, r) => write!(f, "({l} AND {r})"),
            Query::Or(l, r) => write!(f, "({l} OR {r})"),
            Query::AndNot(l, r) => write!(f, "({l} ANDNOT {r})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok<'a> {
    Ident(&'a str),
    Quoted(&'a str),
    Eq,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Colon,
    And,
    Or,
    AndNot,
    With,
    End,
}

impl Tok<'_> {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Quoted(s) => format!("label {s}"),
            Tok::Eq => "`=`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Colon => "`:`".into(),
            Tok::And => "`AND`".into(),
            Tok::Or => "`OR`".into(),
            Tok::AndNot => "`ANDNOT`".into(),
            Tok::With => "`WITH`".into(),
            Tok::End => "end of query".into(),
        }
    }
}

fn error(offset: usize, message: impl Into<String>) -> QueryParseError {
    QueryParseError { offset: offset + 1, message: message.into() }
}

/// Tokens paired with their 0-based byte offsets.
fn lex(text: &str) -> Result<Vec<(Tok<'_>, usize)>, QueryParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let single = match b {
            b'=' => Some(Tok::Eq),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            b'[' => Some(Tok::LBracket),
            b']' => Some(Tok::RBracket),
            b':' => Some(Tok::Colon),
            _ => None,
        };
        if let Some(tok) = single {
            out.push((tok, i));
            i += 1;
        } else if b.is_ascii_whitespace() {
            i += 1;
        } else if b == b'"' {
            let start = i;
            i += 1;
            loop {
                match bytes.get(i) {
                    None => return Err(error(start, "unterminated quoted label")),
                    Some(b'\\') => i += 2,
                    Some(b'"') => break,
                    Some(_) => i += 1,
                }
            }
            i += 1;
            if i - start <= 2 {
                return Err(error(start, "empty quoted label"));
            }
            out.push((Tok::Quoted(&text[start..i]), start));
        } else {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || matches!(bytes[i], b'_' | b'.' | b'-')) {
                i += 1;
            }
            if i == start {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(error(start, format!("unexpected character `{ch}`")));
            }
            let word = &text[start..i];
            let tok = match word {
                "AND" => Tok::And,
                "OR" => Tok::Or,
                "ANDNOT" => Tok::AndNot,
                "WITH" => Tok::With,
                _ => Tok::Ident(word),
            };
            out.push((tok, start));
        }
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(Tok<'a>, usize)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &(Tok<'a>, usize) {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> (Tok<'a>, usize) {
        let t = self.tokens[self.pos].clone();
        if t.0 != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok<'static>, what: &str) -> Result<(), QueryParseError> {
        let (tok, at) = self.bump();
        if tok == want {
            Ok(())
        } else {
            Err(error(at, format!("expected {what}, found {}", tok.describe())))
        }
    }

    fn binary(
        &mut self,
        op: Tok<'static>,
        next: fn(&mut Self) -> Result<Query, QueryParseError>,
        build: fn(Box<Query>, Box<Query>) -> Query,
    ) -> Result<Query, QueryParseError> {
        let mut left = next(self)?;
        while self.peek().0 == op {
            self.bump();
            let right = next(self)?;
            left = build(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn or(&mut self) -> Result<Query, QueryParseError> {
        self.binary(Tok::Or, Self::and, Query::Or)
    }

    fn and(&mut self) -> Result<Query, QueryParseError> {
        self.binary(Tok::And, Self::diff, Query::And)
    }

    fn diff(&mut self) -> Result<Query, QueryParseError> {
        self.binary(Tok::AndNot, Self::primary, Query::AndNot)
    }

    fn primary(&mut self) -> Result<Query, QueryParseError> {
        if self.peek().0 == Tok::LParen {
            self.bump();
            let inner = self.or()?;
            self.expect(Tok::RParen, "`)`")?;
            return Ok(inner);
        }
        let base_at = self.peek().1;
        let base = self.termref()?;
        if self.peek().0 != Tok::With {
            return Ok(Query::Term(base));
        }
        if base.exact {
            return Err(error(base_at, "a WITH base cannot be marked exact with `=`"));
        }
        self.bump();
        self.expect(Tok::LBracket, "`[`")?;
        let (tok, at) = self.bump();
        let rel = match tok {
            Tok::Ident(w) => {
                w.parse::<RelationType>().map_err(|_| error(at, format!("expected relation type, found `{w}`")))?
            }
            other => return Err(error(at, format!("expected relation type, found {}", other.describe()))),
        };
        self.expect(Tok::Colon, "`:`")?;
        let target = self.termref()?;
        self.expect(Tok::RBracket, "`]`")?;
        Ok(Query::With { base, rel, target })
    }

    fn termref(&mut self) -> Result<TermRef, QueryParseError> {
        let exact = self.peek().0 == Tok::Eq;
        if exact {
            self.bump();
        }
        match self.bump() {
            (Tok::Ident(w), _) => {
                debug_assert!(is_valid_id(w));
                Ok(TermRef::new(w, exact))
            }
            (Tok::Quoted(q), _) => Ok(TermRef::new(q, exact)),
            (other, at) => Err(error(at, format!("expected concept id or quoted label, found {}", other.describe()))),
        }
    }
}

/// Parses query text. Error offsets are 1-based byte positions.
pub fn parse_query(text: &str) -> Result<Query, QueryParseError> {
    let mut p = Parser { tokens: lex(text)?, pos: 0 };
    let q = p.or()?;
    let (tok, at) = p.bump();
    if tok != Tok::End {
        return Err(error(at, format!("expected operator or end of query, found {}", tok.describe())));
    }
    Ok(q)
}
