//! The identity-record text format.
//!
//! ```text
//! [entry]
//! id     = "GR-3.411.5"
//! lhs    = "integral(x, 0, ln(2), x / (1 - exp(-x)))"
//! rhs    = "pi^2 / 12"
//! expect = "verified"
//! note   = "..."
//! ```

use std::collections::HashSet;

use thiserror::Error;

use super::{IdentityRecord, VerdictTag};
use crate::expr::{parse, ExprError, SourceSpan};

#[derive(Debug, Clone, PartialEq, Error)]
#[error("record {record} (line {line}, bytes {span}): {kind}")]
pub struct CorpusError {
    /// Zero-based record index; the record being read when the error occurred.
    pub record: usize,
    /// One-based line number.
    pub line: usize,
    /// Byte range in the corpus text.
    pub span: SourceSpan,
    pub kind: CorpusErrorKind,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CorpusErrorKind {
    #[error("expected `[entry]`, a `key = \"value\"` line, a comment or a blank line")]
    Malformed,
    #[error("field outside of an `[entry]`")]
    FieldOutsideEntry,
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("key `{0}` given twice")]
    DuplicateKey(String),
    #[error("missing key `{0}`")]
    MissingKey(&'static str),
    #[error("unknown expect value `{0}` (want verified, refuted or divergent)")]
    UnknownExpect(String),
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("in {field}: {source}")]
    Expression {
        field: &'static str,
        #[source]
        source: ExprError,
    },
}

const KEYS: [&str; 5] = ["id", "lhs", "rhs", "expect", "note"];

#[derive(Default)]
struct Draft {
    index: usize,
    header_line: usize,
    header_span: SourceSpan,
    // value, line, byte offset of the value's first character
    fields: [Option<(String, usize, usize)>; 5],
}

impl Draft {
    fn finish(self, seen: &mut HashSet<String>) -> Result<IdentityRecord, CorpusError> {
        let err = |line, span, kind| CorpusError {
            record: self.index,
            line,
            span,
            kind,
        };
        let missing = |key| err(self.header_line, self.header_span, CorpusErrorKind::MissingKey(key));
        let [id, lhs, rhs, expect, note] = &self.fields;
        let (id, id_line, id_at) = id.clone().ok_or_else(|| missing("id"))?;
        let expression = |field: &'static str, slot: &Option<(String, usize, usize)>| {
            let (text, line, at) = slot.clone().ok_or_else(|| missing(field))?;
            parse(&text).map_err(|source| {
                let s = source.span();
                err(
                    line,
                    SourceSpan::new(at + s.start, at + s.end),
                    CorpusErrorKind::Expression { field, source },
                )
            })
        };
        let lhs = expression("lhs", lhs)?;
        let rhs = expression("rhs", rhs)?;
        let (expect_text, line, at) = expect.clone().ok_or_else(|| missing("expect"))?;
        let expect = match expect_text.as_str() {
            "verified" => VerdictTag::Verified,
            "refuted" => VerdictTag::Refuted,
            "divergent" => VerdictTag::Divergent,
            _ => {
                let span = SourceSpan::new(at, at + expect_text.len());
                return Err(err(line, span, CorpusErrorKind::UnknownExpect(expect_text)));
            }
        };
        if !seen.insert(id.clone()) {
            let span = SourceSpan::new(id_at, id_at + id.len());
            return Err(err(id_line, span, CorpusErrorKind::DuplicateId(id)));
        }
        Ok(IdentityRecord {
            id,
            lhs,
            rhs,
            expect,
            note: note.as_ref().map(|n| n.0.clone()).unwrap_or_default(),
        })
    }
}

/// Splits `key = "value"`, returning the key, the value and the value's
/// byte offset within the line.
fn split_field(line: &str) -> Option<(&str, &str, usize)> {
    let (key, rest) = line.split_once('=')?;
    let key = key.trim();
    if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return None;
    }
    let value_part = rest.trim();
    let inner = value_part.strip_prefix('"')?.strip_suffix('"')?;
    if inner.contains('"') {
        return None;
    }
    let offset = line.len() - rest.len() + (rest.len() - rest.trim_start().len()) + 1;
    Some((key, inner, offset))
}

/// Parses a corpus. Records keep their order in the text; `note` may be
/// omitted, all other keys are required.
pub fn load_corpus(text: &str) -> Result<Vec<IdentityRecord>, CorpusError> {
    let mut records = Vec::new();
    let mut seen = HashSet::new();
    let mut draft: Option<Draft> = None;
    let mut offset = 0usize;
    for (n, raw) in text.split('\n').enumerate() {
        let line_no = n + 1;
        let line_start = offset;
        offset += raw.len() + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        let trimmed = line.trim();
        let line_span = SourceSpan::new(line_start, line_start + line.len());
        let record = records.len();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if trimmed == "[entry]" {
            if let Some(d) = draft.take() {
                records.push(d.finish(&mut seen)?);
            }
            draft = Some(Draft {
                index: records.len(),
                header_line: line_no,
                header_span: line_span,
                ..Draft::default()
            });
            continue;
        }
        let err = |kind| CorpusError {
            record,
            line: line_no,
            span: line_span,
            kind,
        };
        let Some((key, value, at)) = split_field(line) else {
            return Err(err(CorpusErrorKind::Malformed));
        };
        let Some(d) = draft.as_mut() else {
            return Err(err(CorpusErrorKind::FieldOutsideEntry));
        };
        let Some(slot) = KEYS.iter().position(|k| *k == key) else {
            return Err(err(CorpusErrorKind::UnknownKey(key.to_string())));
        };
        if d.fields[slot].is_some() {
            return Err(err(CorpusErrorKind::DuplicateKey(key.to_string())));
        }
        d.fields[slot] = Some((value.to_string(), line_no, line_start + at));
    }
    if let Some(d) = draft.take() {
        records.push(d.finish(&mut seen)?);
    }
    Ok(records)
}
