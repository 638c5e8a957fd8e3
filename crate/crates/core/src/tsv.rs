//! Field escaping shared by the tab-separated persistence formats.

use crate::error::{Error, Result};

pub(crate) fn escape(field: &str) -> String {
    if !field.contains(['\\', '\t', '\n', '\r']) {
        return field.to_owned();
    }
    let mut out = String::with_capacity(field.len() + 4);
    for c in field.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out
}

pub(crate) fn unescape(field: &str, line: usize) -> Result<String> {
    if !field.contains('\\') {
        return Ok(field.to_owned());
    }
    let mut out = String::with_capacity(field.len());
    let mut chars = field.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('\\') => out.push('\\'),
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            other => {
                return Err(Error::parse(
                    line,
                    format!("invalid escape sequence \\{}", other.map(String::from).unwrap_or_default()),
                ))
            }
        }
    }
    Ok(out)
}

/// Iterates `(1-based line number, line)` pairs over LF-terminated text.
pub(crate) fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.split_terminator('\n').enumerate().map(|(i, l)| (i + 1, l))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn escape_round_trip() {
        for s in ["plain", "", "a\tb", "back\\slash", "multi\nline\r", "\\t literal"] {
            assert_eq!(unescape(&escape(s), 1).unwrap(), s);
        }
    }

    #[test]
    fn rejects_dangling_escape() {
        assert!(unescape("oops\\", 3).is_err());
        assert!(unescape("\\x", 3).is_err());
    }
}
