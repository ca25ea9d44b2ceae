//! Extractor for the restricted, indentation-based code dialect.
//!
//! Only structure is read: `class NAME:` blocks, `def NAME(self, ...)`
//! members and `self.x = expr` statements directly inside `__init__`.
//! Everything else (method bodies, comments, module-level statements) is
//! kept verbatim in `raw_text` and never analyzed. Byte anchors recorded
//! during parsing let [`apply_code_edits`] patch the text without touching
//! bytes it was not asked to change.

mod lines;
mod patch;
mod skeleton;

use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::ops::Range;

use thiserror::Error;

use crate::model::{
    normalize_name, Attribute, ClassDef, ClassModel, Method, NameMode, Origin, Parameter, SourceSpan, TypeRef,
};
use crate::text::{ident_len, is_ident, split_top_level, trim_range, LineIndex};
use lines::{classify, find_region, LineKind, PhysLine};

pub use patch::{apply_code_edits, CodeEdit, CodeEditKind};
pub use skeleton::{render_class_skeleton, render_code_skeleton, render_code_type};
pub(crate) use skeleton::{attribute_line, method_stub, params_text, SkeletonStyle};

pub const DEFAULT_ARTIFACT: &str = "code";
pub(crate) const CONSTRUCTOR_NAME: &str = "__init__";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("line {line}, column {col}: expected {expected}")]
    Syntax { line: usize, col: usize, expected: String },
    #[error("line {line}: class `{name}` is defined twice")]
    DuplicateClass { name: String, line: usize },
    #[error("line {line}: method `{name}` is defined twice in class `{class}`")]
    DuplicateMethodSignature { class: String, name: String, line: usize },
    #[error("edits at {first} and {second} overlap")]
    OverlappingEdits { first: SourceSpan, second: SourceSpan },
    #[error("edit span {0} is outside the document")]
    SpanOutOfRange(SourceSpan),
    #[error("patched text no longer parses: {0}")]
    InvalidResult(Box<CodeError>),
}

impl CodeError {
    pub fn line(&self) -> Option<usize> {
        match self {
            CodeError::Syntax { line, .. }
            | CodeError::DuplicateClass { line, .. }
            | CodeError::DuplicateMethodSignature { line, .. } => Some(*line),
            CodeError::InvalidResult(inner) => inner.line(),
            _ => None,
        }
    }
}

/// Where an attribute's type came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum TypeSource {
    Annotation,
    /// Assigned from the constructor parameter with this name.
    Param(String),
    Literal,
    None,
}

#[derive(Debug, Clone)]
pub(crate) struct ParamAnchor {
    pub name: String,
    pub ty: TypeRef,
    /// End of the parameter name; annotations are inserted here.
    pub name_end: usize,
    /// `: T` including the colon, when present.
    pub annotation: Option<Range<usize>>,
}

#[derive(Debug, Clone)]
pub(crate) struct MethodAnchor {
    pub name: String,
    pub is_constructor: bool,
    pub name_range: Range<usize>,
    /// Text after the receiver up to the closing parenthesis.
    pub params_range: Range<usize>,
    pub params: Vec<ParamAnchor>,
    /// From just after `)` to the end of the return annotation; empty when
    /// there is none.
    pub return_range: Range<usize>,
    /// Whole lines from the `def` line through the last body line.
    pub lines: Range<usize>,
    pub body_indent: usize,
    /// Offsets of the statements directly in the body, with their extents.
    pub statements: Vec<Range<usize>>,
}

#[derive(Debug, Clone)]
pub(crate) struct AttrAnchor {
    pub name: String,
    pub target: Range<usize>,
    pub annotation: Option<Range<usize>>,
    pub statement: Range<usize>,
    pub source: TypeSource,
}

#[derive(Debug, Clone)]
pub(crate) struct ClassAnchor {
    pub name: String,
    pub lines: Range<usize>,
    pub member_indent: usize,
    pub methods: Vec<MethodAnchor>,
    pub attributes: Vec<AttrAnchor>,
    pub statements: Vec<Range<usize>>,
}

impl ClassAnchor {
    pub(crate) fn constructor(&self) -> Option<&MethodAnchor> {
        self.methods.iter().find(|m| m.is_constructor)
    }
}

#[derive(Debug, Clone)]
pub(crate) struct CodeIndex {
    pub classes: Vec<ClassAnchor>,
    /// Where new classes are inserted: after the last class, or at the end of
    /// the code region.
    pub class_insert: usize,
}

/// A parsed code artifact.
#[derive(Debug, Clone)]
pub struct CodeDocument {
    pub model: ClassModel,
    pub raw_text: String,
    pub artifact: String,
    pub(crate) index: CodeIndex,
    pub(crate) lines: LineIndex,
}

impl CodeDocument {
    pub(crate) fn span(&self, range: Range<usize>) -> SourceSpan {
        SourceSpan::new(&self.artifact, self.lines.position(range.start), self.lines.position(range.end))
    }

    pub(crate) fn class_anchor(&self, name: &str) -> Option<&ClassAnchor> {
        self.index.classes.iter().find(|c| c.name == name)
    }

    pub fn parse_named(text: &str, artifact: &str) -> Result<Self, CodeError> {
        Parser::new(text, artifact).run()
    }
}

pub fn parse_code(text: &str) -> Result<CodeDocument, CodeError> {
    CodeDocument::parse_named(text, DEFAULT_ARTIFACT)
}

/// Reads a type annotation of the dialect.
pub fn parse_code_type(annotation: &str) -> TypeRef {
    let t = annotation.trim();
    let t = t
        .strip_prefix('"')
        .and_then(|r| r.strip_suffix('"'))
        .or_else(|| t.strip_prefix('\'').and_then(|r| r.strip_suffix('\'')))
        .unwrap_or(t)
        .trim();
    match t {
        "None" => return TypeRef::Void,
        "list" | "List" => return TypeRef::collection(TypeRef::Unknown),
        _ => {}
    }
    for prefix in ["list[", "List["] {
        if let Some(inner) = t.strip_prefix(prefix).and_then(|r| r.strip_suffix(']')) {
            return TypeRef::collection(parse_code_type(inner));
        }
    }
    TypeRef::named(t)
}

struct Parser<'a> {
    text: &'a str,
    artifact: &'a str,
    lines: Vec<PhysLine<'a>>,
    index: LineIndex,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, artifact: &'a str) -> Self {
        Self { text, artifact, lines: classify(text), index: LineIndex::new(text) }
    }

    fn err(&self, offset: usize, expected: &str) -> CodeError {
        let (line, col) = self.index.position(offset);
        CodeError::Syntax { line, col, expected: expected.to_owned() }
    }

    fn span(&self, range: Range<usize>) -> SourceSpan {
        SourceSpan::new(self.artifact, self.index.position(range.start), self.index.position(range.end))
    }

    fn line_no(&self, i: usize) -> usize {
        i + 1
    }

    /// Offset just past line `i`, newline included.
    fn line_end(&self, i: usize) -> usize {
        self.lines.get(i + 1).map_or(self.text.len(), |l| l.start)
    }

    /// Index of the first code line after `from` (and its continuation lines)
    /// whose indentation is at most `base`, bounded by `end`.
    fn block_end(&self, from: usize, base: usize, end: usize) -> usize {
        let mut j = from + 1;
        while j < end {
            let l = &self.lines[j];
            if l.kind == LineKind::Code && l.indent <= base {
                break;
            }
            j += 1;
        }
        j
    }

    /// Last line in `(from..to)` that belongs to the block opened at `from`.
    fn content_last(&self, from: usize, to: usize, base: usize) -> usize {
        let mut last = from;
        for j in from + 1..to {
            let l = &self.lines[j];
            match l.kind {
                LineKind::Code | LineKind::Continuation => last = j,
                LineKind::Comment if l.indent > base => last = j,
                _ => {}
            }
        }
        last
    }

    /// Last physical line of the logical line starting at `i`.
    fn logical_last(&self, i: usize) -> usize {
        let mut j = i;
        while j + 1 < self.lines.len() && self.lines[j + 1].kind == LineKind::Continuation {
            j += 1;
        }
        j
    }

    /// Byte range of the logical statement starting at line `i`, excluding
    /// the indentation and the final newline.
    fn logical_range(&self, i: usize) -> Range<usize> {
        let last = self.logical_last(i);
        let start = self.lines[i].start + self.lines[i].indent;
        let end = self.lines[last].start + self.lines[last].text.len();
        start..end
    }

    fn run(self) -> Result<CodeDocument, CodeError> {
        let region = find_region(&self.lines);
        let mut model = ClassModel::new(Origin::CodeArtifact);
        let mut anchors = Vec::new();
        let mut class_insert = region.end.map_or(self.text.len(), |i| self.lines[i].start);
        let end = region.end.unwrap_or(self.lines.len());
        let mut i = region.start;
        while i < end {
            let l = &self.lines[i];
            if l.kind != LineKind::Code {
                i += 1;
                continue;
            }
            let next = self.block_end(i, l.indent, end);
            if l.indent == 0 && starts_with_keyword(l.trimmed(), "class") {
                let (class, anchor) = self.class(i, next)?;
                if model.class(&class.name).is_some() {
                    return Err(CodeError::DuplicateClass { name: class.name, line: self.line_no(i) });
                }
                class_insert = anchor.lines.end;
                model.classes.push(class);
                anchors.push(anchor);
            }
            i = next;
        }
        Ok(CodeDocument {
            model,
            raw_text: self.text.to_owned(),
            artifact: self.artifact.to_owned(),
            index: CodeIndex { classes: anchors, class_insert },
            lines: self.index,
        })
    }

    fn class(&self, h: usize, end: usize) -> Result<(ClassDef, ClassAnchor), CodeError> {
        let header = self.logical_range(h);
        let htext = &self.text[header.clone()];
        let after_kw = &htext[5..];
        let rest = after_kw.trim_start();
        let name_at = header.start + 5 + (after_kw.len() - rest.len());
        let n = ident_len(rest);
        if n == 0 || after_kw.len() == rest.len() {
            return Err(self.err(name_at, "class name"));
        }
        let name = &rest[..n];
        let tail = strip_comment(&rest[n..]).trim();
        if tail != ":" && tail != "():" {
            let what = if tail.starts_with('(') { "class without base classes" } else { "`:` after class name" };
            return Err(self.err(name_at + n, what));
        }
        let last = self.content_last(h, end, 0);
        let lines = self.lines[h].start..self.line_end(last);
        let mut anchor = ClassAnchor {
            name: name.to_owned(),
            lines: lines.clone(),
            member_indent: 0,
            methods: Vec::new(),
            attributes: Vec::new(),
            statements: Vec::new(),
        };
        let mut class = ClassDef::new(name);
        class.span = Some(self.span(lines.start..lines.end));

        let body_start = self.logical_last(h) + 1;
        let first = (body_start..end).find(|&k| self.lines[k].kind == LineKind::Code);
        let Some(first) = first else {
            return Err(self.err(header.end, "indented class body"));
        };
        let indent = self.lines[first].indent;
        anchor.member_indent = indent;
        let mut k = first;
        while k < end {
            let l = &self.lines[k];
            if l.kind != LineKind::Code {
                k += 1;
                continue;
            }
            if l.indent != indent {
                return Err(self.err(l.start + l.indent, "consistent member indentation"));
            }
            let next = self.block_end(k, indent, end);
            let stmt_last = self.content_last(k, next, indent);
            let stmt = l.start..self.line_end(stmt_last);
            anchor.statements.push(stmt.clone());
            let t = l.trimmed();
            if t.starts_with('@') {
                return Err(self.err(l.start + l.indent, "method definition (decorators are not supported)"));
            }
            if starts_with_keyword(t, "def") {
                let (method, manchor, attrs) = self.method(&class.name, k, next, stmt)?;
                let duplicate = if method.is_constructor {
                    class.methods.iter().any(|m| m.is_constructor)
                } else {
                    let key = normalize_name(&method.name, NameMode::Canonical);
                    class
                        .methods
                        .iter()
                        .any(|m| !m.is_constructor && normalize_name(&m.name, NameMode::Canonical) == key)
                };
                if duplicate {
                    return Err(CodeError::DuplicateMethodSignature {
                        class: class.name.clone(),
                        name: manchor.name.clone(),
                        line: self.line_no(k),
                    });
                }
                if method.is_constructor {
                    for (attr, aanchor) in attrs {
                        class.attributes.push(attr);
                        anchor.attributes.push(aanchor);
                    }
                }
                class.methods.push(method);
                anchor.methods.push(manchor);
            }
            k = next;
        }
        Ok((class, anchor))
    }

    #[allow(clippy::type_complexity)]
    fn method(
        &self,
        class: &str,
        k: usize,
        end: usize,
        lines: Range<usize>,
    ) -> Result<(Method, MethodAnchor, Vec<(Attribute, AttrAnchor)>), CodeError> {
        let member_indent = self.lines[k].indent;
        let sig = self.logical_range(k);
        let s = &self.text[sig.clone()];
        let base = sig.start;
        let after_def = &s[3..];
        let name_rel = 3 + (after_def.len() - after_def.trim_start().len());
        let n = ident_len(&s[name_rel..]);
        if n == 0 || name_rel == 3 {
            return Err(self.err(base + name_rel, "method name"));
        }
        let name = &s[name_rel..name_rel + n];
        let mut pos = name_rel + n;
        pos += ws_len(&s[pos..]);
        if !s[pos..].starts_with('(') {
            return Err(self.err(base + pos, "`(` after method name"));
        }
        let open = pos;
        let close = open + 1 + close_paren(&s[open + 1..]).ok_or_else(|| self.err(base + open, "`)` closing the parameter list"))?;
        let inner = &s[open + 1..close];
        let is_constructor = name == CONSTRUCTOR_NAME;

        let pieces = split_top_level(inner, b',');
        let (self_s, self_e) = trim_range(inner, pieces[0]);
        if &inner[self_s..self_e] != "self" {
            return Err(self.err(base + open + 1 + self_s, "`self` receiver as first parameter"));
        }
        let params_range = base + open + 1 + self_e..base + close;
        let mut params = Vec::new();
        let mut anchors: Vec<ParamAnchor> = Vec::new();
        for &piece in &pieces[1..] {
            let (ps, pe) = trim_range(inner, piece);
            if ps == pe {
                continue; // trailing comma
            }
            let ptext = &inner[ps..pe];
            let pbase = base + open + 1 + ps;
            let pn = ident_len(ptext);
            if pn == 0 {
                return Err(self.err(pbase, "parameter name"));
            }
            let pname = &ptext[..pn];
            if anchors.iter().any(|a| a.name == pname) {
                return Err(self.err(pbase, "a unique parameter name"));
            }
            let mut rest = &ptext[pn..];
            let mut at = pn;
            let w = ws_len(rest);
            let (ty, annotation) = if rest[w..].starts_with(':') {
                let ann_start = at;
                let eq = split_top_level(&rest[w + 1..], b'=')[0].1;
                let ann = &rest[w + 1..w + 1 + eq];
                if ann.trim().is_empty() {
                    return Err(self.err(pbase + at + w + 1, "a type annotation"));
                }
                let ann_end = at + w + 1 + ann.trim_end().len();
                at += w + 1 + eq;
                rest = &ptext[at..];
                (parse_code_type(ann), Some(pbase + ann_start..pbase + ann_end))
            } else {
                (TypeRef::Unknown, None)
            };
            let rest_t = rest.trim_start();
            if !rest_t.is_empty() && !rest_t.starts_with('=') {
                return Err(self.err(pbase + at + (rest.len() - rest_t.len()), "`: TYPE`, `= default`, `,` or `)`"));
            }
            params.push(Parameter {
                name: pname.to_owned(),
                ty: ty.clone(),
                span: Some(self.span(pbase..pbase + ptext.len())),
            });
            anchors.push(ParamAnchor { name: pname.to_owned(), ty, name_end: pbase + pn, annotation });
        }

        let mut pos = close + 1;
        pos += ws_len(&s[pos..]);
        let (return_type, return_end) = if s[pos..].starts_with("->") {
            let ty_start = pos + 2;
            let colon = find_top_level(&s[ty_start..], b':').ok_or_else(|| self.err(base + ty_start, "`:` ending the signature"))?;
            let ann = &s[ty_start..ty_start + colon];
            if ann.trim().is_empty() {
                return Err(self.err(base + ty_start, "a return type"));
            }
            let ty_end = ty_start + ann.trim_end().len();
            pos = ty_start + colon;
            (parse_code_type(ann), ty_end)
        } else {
            (TypeRef::Unknown, close + 1)
        };
        if !s[pos..].starts_with(':') {
            return Err(self.err(base + pos, "`:` ending the signature"));
        }
        let inline = strip_comment(&s[pos + 1..]).trim();

        let body_first = self.logical_last(k) + 1;
        let first_code = (body_first..end).find(|&j| self.lines[j].kind == LineKind::Code);
        if first_code.is_none() && inline.is_empty() {
            return Err(self.err(base + pos + 1, "an indented method body"));
        }
        let body_indent = first_code.map_or(member_indent + 4, |j| self.lines[j].indent);
        let mut statements = Vec::new();
        let mut attrs: Vec<(Attribute, AttrAnchor)> = Vec::new();
        let mut j = body_first;
        while j < end {
            let l = &self.lines[j];
            if l.kind != LineKind::Code {
                j += 1;
                continue;
            }
            let next = self.block_end(j, l.indent.min(body_indent), end);
            if l.indent == body_indent {
                let last = self.content_last(j, next, body_indent);
                let stmt = l.start..self.line_end(last);
                statements.push(stmt.clone());
                if is_constructor {
                    if let Some(found) = self.attribute(j, stmt, &anchors)? {
                        if !attrs.iter().any(|(a, _)| a.name == found.0.name) {
                            attrs.push(found);
                        }
                    }
                }
            }
            j = next;
        }

        let method_name = if is_constructor { class } else { name };
        let method = Method {
            name: method_name.to_owned(),
            params,
            return_type: if is_constructor { TypeRef::Unknown } else { return_type },
            visibility: Default::default(),
            is_constructor,
            span: Some(self.span(lines.clone())),
        };
        let anchor = MethodAnchor {
            name: name.to_owned(),
            is_constructor,
            name_range: base + name_rel..base + name_rel + n,
            params_range,
            params: anchors,
            return_range: base + close + 1..base + return_end,
            lines,
            body_indent,
            statements,
        };
        Ok((method, anchor, attrs))
    }

    /// Recognizes `self.NAME [: T] = EXPR` at line `j`.
    fn attribute(
        &self,
        j: usize,
        statement: Range<usize>,
        params: &[ParamAnchor],
    ) -> Result<Option<(Attribute, AttrAnchor)>, CodeError> {
        let range = self.logical_range(j);
        let s = &self.text[range.clone()];
        let Some(rest) = s.strip_prefix("self") else { return Ok(None) };
        let mut at = 4 + ws_len(rest);
        if !s[at..].starts_with('.') {
            return Ok(None);
        }
        at += 1;
        at += ws_len(&s[at..]);
        let n = ident_len(&s[at..]);
        if n == 0 {
            return Ok(None);
        }
        let name = &s[at..at + n];
        let target = range.start + at..range.start + at + n;
        at += n;
        let w = ws_len(&s[at..]);
        let mut annotation = None;
        let mut declared = None;
        if s[at + w..].starts_with(':') {
            let ann_start = at;
            let Some(eq) = find_top_level(&s[at + w + 1..], b'=') else { return Ok(None) };
            let ann = &s[at + w + 1..at + w + 1 + eq];
            if ann.trim().is_empty() {
                return Err(self.err(range.start + at + w + 1, "a type annotation"));
            }
            annotation = Some(range.start + ann_start..range.start + at + w + 1 + ann.trim_end().len());
            declared = Some(parse_code_type(ann));
            at += w + 1 + eq;
        } else {
            at += w;
        }
        let Some(expr) = s[at..].strip_prefix('=') else { return Ok(None) };
        if expr.starts_with('=') {
            return Ok(None);
        }
        let expr = strip_comment(expr).trim();
        let (ty, source) = match declared {
            Some(t) => (t, TypeSource::Annotation),
            None => infer_expr_type(expr, params),
        };
        let attr = Attribute { name: name.to_owned(), ty, visibility: Default::default(), span: Some(self.span(statement.clone())) };
        let anchor = AttrAnchor { name: name.to_owned(), target, annotation, statement, source };
        Ok(Some((attr, anchor)))
    }
}

fn infer_expr_type(expr: &str, params: &[ParamAnchor]) -> (TypeRef, TypeSource) {
    if is_ident(expr) {
        if let Some(p) = params.iter().find(|p| p.name == expr) {
            return (p.ty.clone(), TypeSource::Param(p.name.clone()));
        }
    }
    match expr {
        "True" | "False" => (TypeRef::named("bool"), TypeSource::Literal),
        e if e.starts_with('[') && e.ends_with(']') => (TypeRef::collection(TypeRef::Unknown), TypeSource::Literal),
        _ => (TypeRef::Unknown, TypeSource::None),
    }
}

fn ws_len(s: &str) -> usize {
    s.len() - s.trim_start().len()
}

fn starts_with_keyword(s: &str, kw: &str) -> bool {
    s.strip_prefix(kw).is_some_and(|r| r.starts_with([' ', '\t']))
}

/// Drops a trailing `# comment`, ignoring `#` inside string literals.
fn strip_comment(s: &str) -> &str {
    let mut quote = None;
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match quote {
            Some(_) if b == b'\\' => i += 1,
            Some(q) if b == q => quote = None,
            Some(_) => {}
            None if b == b'\'' || b == b'"' => quote = Some(b),
            None if b == b'#' => return &s[..i],
            None => {}
        }
        i += 1;
    }
    s
}

/// Offset of the `)` closing an already-opened parenthesis.
fn close_paren(s: &str) -> Option<usize> {
    let bytes = s.as_bytes();
    let mut depth = 0usize;
    let mut quote = None;
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match quote {
            Some(_) if b == b'\\' => i += 1,
            Some(q) if b == q => quote = None,
            Some(_) => {}
            None => match b {
                b'\'' | b'"' => quote = Some(b),
                b'(' | b'[' | b'{' => depth += 1,
                b')' if depth == 0 => return Some(i),
                b')' | b']' | b'}' => depth = depth.saturating_sub(1),
                _ => {}
            },
        }
        i += 1;
    }
    None
}

/// First `sep` at bracket depth zero, outside string literals.
fn find_top_level(s: &str, sep: u8) -> Option<usize> {
    let parts = split_top_level(s, sep);
    (parts.len() > 1).then(|| parts[0].1)
}
