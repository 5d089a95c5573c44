//! Line-oriented text formats: knowledge bases (`.kos`), document corpora,
//! and a SKOS subset in N-Triples form.
//!
//! Quoted strings use backslash escapes for `"`, `\`, `|` and newline (`\n`).

mod corpus;
mod kos;
mod skos;

pub use corpus::{parse_corpus, serialize_corpus};
pub use kos::{parse_kos, serialize_kos};
pub use skos::{import_skos_subset, SkosImport, DEFAULT_FACET};

use crate::error::FormatError;

/// Escapes a string for use between double quotes.
pub(crate) fn escape(s: &str, escape_pipe: bool) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '|' if escape_pipe => out.push_str("\\|"),
            _ => out.push(ch),
        }
    }
    out
}

/// Resolves escapes in the raw body of a quoted string.
pub(crate) fn unescape(raw: &str, line: usize) -> Result<String, FormatError> {
    let mut out = String::with_capacity(raw.len());
    let mut chars = raw.chars();
    while let Some(ch) = chars.next() {
        if ch != '\\' {
            out.push(ch);
            continue;
        }
        match chars.next() {
            Some('n') => out.push('\n'),
            Some(c @ ('"' | '\\' | '|')) => out.push(c),
            Some(c) => return Err(FormatError::syntax(line, format!("unknown escape `\\{c}`"))),
            None => return Err(FormatError::syntax(line, "dangling backslash")),
        }
    }
    Ok(out)
}

/// Splits a raw quoted body on unescaped `|` and unescapes each part.
pub(crate) fn split_alternatives(raw: &str, line: usize) -> Result<Vec<String>, FormatError> {
    let mut parts = Vec::new();
    let mut start = 0;
    let mut escaped = false;
    for (i, b) in raw.bytes().enumerate() {
        match b {
            _ if escaped => escaped = false,
            b'\\' => escaped = true,
            b'|' => {
                parts.push(unescape(&raw[start..i], line)?);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(unescape(&raw[start..], line)?);
    Ok(parts)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Token<'a> {
    Word(&'a str),
    /// Raw body between the quotes, escapes not yet resolved.
    Quoted(&'a str),
}

/// Splits a line into whitespace-separated words and quoted strings.
pub(crate) fn tokenize(text: &str, line: usize) -> Result<Vec<Token<'_>>, FormatError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        if b.is_ascii_whitespace() {
            i += 1;
        } else if b == b'"' {
            let start = i + 1;
            let mut j = start;
            loop {
                match bytes.get(j) {
                    None => return Err(FormatError::syntax(line, "unterminated quoted string")),
                    Some(b'\\') => j += 2,
                    Some(b'"') => break,
                    Some(_) => j += 1,
                }
            }
            if j > bytes.len() {
                return Err(FormatError::syntax(line, "unterminated quoted string"));
            }
            tokens.push(Token::Quoted(&text[start..j]));
            i = j + 1;
            if bytes.get(i).is_some_and(|b| !b.is_ascii_whitespace()) {
                return Err(FormatError::syntax(line, "expected whitespace after quoted string"));
            }
        } else {
            let start = i;
            while i < bytes.len() && !bytes[i].is_ascii_whitespace() {
                if bytes[i] == b'"' {
                    return Err(FormatError::syntax(line, "unexpected quote inside word"));
                }
                i += 1;
            }
            tokens.push(Token::Word(&text[start..i]));
        }
    }
    Ok(tokens)
}

/// Yields `(1-based line number, trimmed line)` for every line that is
/// neither blank nor a `#` comment.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let t = l.trim();
        (!t.is_empty() && !t.starts_with('#')).then_some((i + 1, t))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn escapes_invert() {
        let s = "a \"quoted\" back\\slash | pipe\nnewline";
        assert_eq!(unescape(&escape(s, true), 1).unwrap(), s);
        assert_eq!(unescape(&escape(s, false), 1).unwrap(), s);
        assert!(unescape("bad \\x", 3).is_err());
    }

    #[test]
    fn alternatives_split_on_unescaped_pipe() {
        assert_eq!(split_alternatives(r"a|b\|c|d", 1).unwrap(), vec!["a", "b|c", "d"]);
        assert_eq!(split_alternatives("single", 1).unwrap(), vec!["single"]);
    }

    #[test]
    fn tokenizer() {
        let toks = tokenize(r#"facet TAX "Tax \"onomy\"""#, 1).unwrap();
        assert_eq!(toks, vec![Token::Word("facet"), Token::Word("TAX"), Token::Quoted(r#"Tax \"onomy\""#)]);
        assert!(tokenize(r#"facet TAX "open"#, 1).is_err());
        assert!(tokenize(r#"facet TAX "a"b"#, 1).is_err());
        assert!(tokenize(r#"facet TA"X"#, 1).is_err());
    }
}
