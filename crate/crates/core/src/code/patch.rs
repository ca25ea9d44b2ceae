//! Span-based text patching.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::ops::Range;

use super::{CodeDocument, CodeError};
use crate::model::SourceSpan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CodeEditKind {
    RenameIdentifier,
    SetAnnotation,
    InsertMember,
    InsertClass,
    DeleteSpan,
}

/// Replace the text under `target` with `payload`. An empty target is an
/// insertion point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeEdit {
    pub kind: CodeEditKind,
    pub target: SourceSpan,
    pub payload: String,
}

impl CodeEdit {
    pub fn new(kind: CodeEditKind, target: SourceSpan, payload: impl Into<String>) -> Self {
        Self { kind, target, payload: payload.into() }
    }
}

fn resolve(doc: &CodeDocument, span: &SourceSpan) -> Result<Range<usize>, CodeError> {
    let out = || CodeError::SpanOutOfRange(span.clone());
    let start = doc.lines.offset(span.start_line, span.start_col).ok_or_else(out)?;
    let end = doc.lines.offset(span.end_line, span.end_col).ok_or_else(out)?;
    let text = &doc.raw_text;
    if start > end || !text.is_char_boundary(start) || !text.is_char_boundary(end) {
        return Err(out());
    }
    Ok(start..end)
}

/// Applies `edits` to the document text. Bytes outside the edited spans are
/// copied unchanged. Two insertions at the same point, or any two spans
/// sharing a byte, are rejected so the result never depends on edit order.
pub fn apply_code_edits(doc: &CodeDocument, edits: &[CodeEdit]) -> Result<String, CodeError> {
    let mut resolved: Vec<(Range<usize>, &CodeEdit)> = Vec::with_capacity(edits.len());
    for e in edits {
        resolved.push((resolve(doc, &e.target)?, e));
    }
    resolved.sort_by_key(|(r, _)| (r.start, r.end));
    for pair in resolved.windows(2) {
        let (a, b) = (&pair[0].0, &pair[1].0);
        let both_insert_here = a.is_empty() && b.is_empty() && a.start == b.start;
        if b.start < a.end || both_insert_here {
            return Err(CodeError::OverlappingEdits {
                first: pair[0].1.target.clone(),
                second: pair[1].1.target.clone(),
            });
        }
    }
    if resolved.is_empty() {
        return Ok(doc.raw_text.clone());
    }
    let text = &doc.raw_text;
    let mut out = String::with_capacity(text.len());
    let mut pos = 0;
    for (r, e) in &resolved {
        out.push_str(&text[pos..r.start]);
        out.push_str(&e.payload);
        pos = r.end;
    }
    out.push_str(&text[pos..]);
    CodeDocument::parse_named(&out, &doc.artifact).map_err(|e| CodeError::InvalidResult(Box::new(e)))?;
    Ok(out)
}
