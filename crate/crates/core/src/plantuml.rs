//! Parser and canonical emitter for the PlantUML class-diagram subset:
//! class blocks with typed fields and methods, and binary `--` associations
//! with optional multiplicities, label and trailing `>` direction marker.

use alloc::borrow::ToOwned;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;

use thiserror::Error;

use crate::model::{
    normalize_name, Attribute, ClassDef, ClassModel, Method, NameMode, Origin, Parameter, Relationship,
    SourceSpan, TypeRef, Visibility,
};
use crate::text::{ident_len, is_ident, lines_with_offsets, split_top_level, trim_range};

pub const DEFAULT_ARTIFACT: &str = "model";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlantUmlError {
    #[error("no @startuml region or ```plantuml block found")]
    MissingRegion,
    #[error("line {line}, column {col}: expected {expected}")]
    Syntax { line: usize, col: usize, expected: String },
    #[error("line {line}: class `{name}` is declared twice")]
    DuplicateClass { name: String, line: usize },
    #[error("line {line}: member `{name}` is declared twice in class `{class}`")]
    DuplicateMember { class: String, name: String, line: usize },
}

impl PlantUmlError {
    pub fn line(&self) -> Option<usize> {
        match self {
            PlantUmlError::MissingRegion => None,
            PlantUmlError::Syntax { line, .. }
            | PlantUmlError::DuplicateClass { line, .. }
            | PlantUmlError::DuplicateMember { line, .. } => Some(*line),
        }
    }
}

/// A parsed model artifact. Text outside the diagram region is kept verbatim
/// so a corrected model can be written back inside the same envelope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlantUmlDocument {
    pub model: ClassModel,
    pub leading_text: String,
    pub trailing_text: String,
}

impl PlantUmlDocument {
    /// Renders `model` inside this document's envelope.
    pub fn render_with(&self, model: &ClassModel) -> String {
        let mut out = self.leading_text.clone();
        out.push_str(&render_plantuml(model));
        out.push_str(&self.trailing_text);
        out
    }
}

pub fn parse_plantuml(text: &str) -> Result<PlantUmlDocument, PlantUmlError> {
    parse_plantuml_named(text, DEFAULT_ARTIFACT)
}

/// Like [`parse_plantuml`], recording `artifact` in every span.
pub fn parse_plantuml_named(text: &str, artifact: &str) -> Result<PlantUmlDocument, PlantUmlError> {
    let lines: Vec<(usize, &str)> = lines_with_offsets(text).collect();
    let region = find_region(text, &lines)?;
    let mut parser = Parser { artifact, model: ClassModel::new(Origin::ModelArtifact), rel_lines: Vec::new() };
    let mut open: Option<(ClassDef, usize)> = None;
    for (idx, &(_, raw)) in lines.iter().enumerate().take(region.body_end).skip(region.body_start) {
        let line_no = idx + 1;
        let trimmed = raw.trim();
        let col = raw.len() - raw.trim_start().len() + 1;
        if trimmed.is_empty() {
            continue;
        }
        match open.take() {
            Some((class, start)) => {
                if trimmed == "}" {
                    parser.close_class(class, start, line_no, raw.len() + 1)?;
                } else {
                    let mut class = class;
                    parser.member(&mut class, trimmed, line_no, col)?;
                    open = Some((class, start));
                }
            }
            None => {
                if let Some(rest) = trimmed.strip_prefix("class ") {
                    let (class, closed) = class_header(rest.trim(), line_no, col + 6)?;
                    if closed {
                        parser.close_class(class, line_no, line_no, raw.len() + 1)?;
                    } else {
                        open = Some((class, line_no));
                    }
                } else {
                    let rel = relationship(trimmed, line_no, col)?;
                    parser.model.relationships.push(rel);
                    parser.rel_lines.push((line_no, col));
                }
            }
        }
    }
    if let Some((class, _)) = open {
        return Err(PlantUmlError::Syntax {
            line: region.body_end + 1,
            col: 1,
            expected: format!("`}}` closing class `{}`", class.name),
        });
    }
    parser.check_relationships()?;
    Ok(PlantUmlDocument {
        model: parser.model,
        leading_text: text[..region.leading_end].to_owned(),
        trailing_text: text[region.trailing_start..].to_owned(),
    })
}

struct Region {
    /// 0-based line indices of the diagram body, `[body_start, body_end)`.
    body_start: usize,
    body_end: usize,
    leading_end: usize,
    trailing_start: usize,
}

fn find_region(text: &str, lines: &[(usize, &str)]) -> Result<Region, PlantUmlError> {
    let line_end = |i: usize| lines.get(i + 1).map_or(text.len(), |l| l.0);
    let start = lines.iter().position(|(_, l)| l.trim_start().starts_with("@startuml"));
    if let Some(start) = start {
        let end = lines[start + 1..]
            .iter()
            .position(|(_, l)| l.trim_start().starts_with("@enduml"))
            .map(|p| p + start + 1)
            .ok_or(PlantUmlError::Syntax { line: lines.len() + 1, col: 1, expected: "@enduml".to_string() })?;
        if let Some(again) = lines[end + 1..].iter().position(|(_, l)| l.trim_start().starts_with("@startuml")) {
            return Err(PlantUmlError::Syntax {
                line: end + again + 2,
                col: 1,
                expected: "a single @startuml region".to_string(),
            });
        }
        return Ok(Region {
            body_start: start + 1,
            body_end: end,
            leading_end: lines[start].0,
            trailing_start: line_end(end),
        });
    }
    let fence = lines.iter().position(|(_, l)| {
        let info = l.trim().strip_prefix("```").map(str::trim);
        matches!(info, Some("plantuml" | "puml" | "uml"))
    });
    let Some(fence) = fence else {
        return Err(PlantUmlError::MissingRegion);
    };
    let close = lines[fence + 1..]
        .iter()
        .position(|(_, l)| l.trim() == "```")
        .map_or(lines.len(), |p| p + fence + 1);
    Ok(Region {
        body_start: fence + 1,
        body_end: close,
        leading_end: line_end(fence),
        trailing_start: lines.get(close).map_or(text.len(), |l| l.0),
    })
}

struct Parser<'a> {
    artifact: &'a str,
    model: ClassModel,
    rel_lines: Vec<(usize, usize)>,
}

impl Parser<'_> {
    fn close_class(&mut self, mut class: ClassDef, start: usize, end: usize, end_col: usize) -> Result<(), PlantUmlError> {
        if self.model.class(&class.name).is_some() {
            return Err(PlantUmlError::DuplicateClass { name: class.name, line: start });
        }
        class.span = Some(SourceSpan::new(self.artifact, (start, 1), (end, end_col)));
        self.model.classes.push(class);
        Ok(())
    }

    fn member(&self, class: &mut ClassDef, text: &str, line: usize, col: usize) -> Result<(), PlantUmlError> {
        let span = SourceSpan::new(self.artifact, (line, col), (line, col + text.len()));
        let (visibility, rest, vis_len) = match text.as_bytes()[0] {
            b'+' => (Visibility::Public, &text[1..], 1),
            b'-' => (Visibility::Private, &text[1..], 1),
            b'#' => (Visibility::Protected, &text[1..], 1),
            _ => (Visibility::Unknown, text, 0),
        };
        let lead = rest.len() - rest.trim_start().len();
        let rest = rest.trim_start();
        let name_col = col + vis_len + lead;
        let n = ident_len(rest);
        if n == 0 {
            return Err(syntax(line, name_col, "member name"));
        }
        let name = &rest[..n];
        let after = &rest[n..];
        let after_col = name_col + n;
        let after_trim = after.trim_start();
        let after_col = after_col + (after.len() - after_trim.len());
        if let Some(inner) = after_trim.strip_prefix('(') {
            let close = matching_paren(inner).ok_or_else(|| syntax(line, after_col, "`)` closing the parameter list"))?;
            let params = self.params(&inner[..close], line, after_col + 1)?;
            let tail = inner[close + 1..].trim();
            let tail_col = after_col + 1 + close + 1 + (inner[close + 1..].len() - inner[close + 1..].trim_start().len());
            let return_type = if tail.is_empty() {
                TypeRef::Void
            } else if let Some(ty) = tail.strip_prefix(':') {
                parse_type(ty.trim()).ok_or_else(|| syntax(line, tail_col + 1, "a return type"))?
            } else {
                return Err(syntax(line, tail_col, "`: TYPE` or end of line"));
            };
            let is_constructor = name == class.name;
            if class
                .methods
                .iter()
                .any(|m| if is_constructor { m.is_constructor } else { same_method(m, name, params.len()) })
            {
                return Err(PlantUmlError::DuplicateMember { class: class.name.clone(), name: name.to_owned(), line });
            }
            class.methods.push(Method {
                name: name.to_owned(),
                params,
                return_type: if is_constructor { TypeRef::Void } else { return_type },
                visibility,
                is_constructor,
                span: Some(span),
            });
        } else {
            let ty = if after_trim.is_empty() {
                TypeRef::Unknown
            } else if let Some(ty) = after_trim.strip_prefix(':') {
                parse_type(ty.trim()).ok_or_else(|| syntax(line, after_col + 1, "an attribute type"))?
            } else {
                return Err(syntax(line, after_col, "`(`, `: TYPE` or end of line"));
            };
            if class.attribute(name, NameMode::Canonical).is_some() {
                return Err(PlantUmlError::DuplicateMember { class: class.name.clone(), name: name.to_owned(), line });
            }
            class.attributes.push(Attribute { name: name.to_owned(), ty, visibility, span: Some(span) });
        }
        Ok(())
    }

    fn params(&self, text: &str, line: usize, col: usize) -> Result<Vec<Parameter>, PlantUmlError> {
        let mut params: Vec<Parameter> = Vec::new();
        if text.trim().is_empty() {
            return Ok(params);
        }
        for range in split_top_level(text, b',') {
            let (s, e) = trim_range(text, range);
            let piece = &text[s..e];
            let pcol = col + s;
            let (name, ty) = match piece.split_once(':') {
                Some((n, t)) => {
                    let ty = parse_type(t.trim()).ok_or_else(|| syntax(line, pcol + n.len() + 1, "a parameter type"))?;
                    (n.trim(), ty)
                }
                None => (piece, TypeRef::Unknown),
            };
            if !is_ident(name) {
                return Err(syntax(line, pcol, "`name: TYPE` parameter"));
            }
            if params.iter().any(|p| p.name == name) {
                return Err(syntax(line, pcol, "a unique parameter name"));
            }
            params.push(Parameter {
                name: name.to_owned(),
                ty,
                span: Some(SourceSpan::new(self.artifact, (line, pcol), (line, pcol + piece.len()))),
            });
        }
        Ok(params)
    }

    fn check_relationships(&self) -> Result<(), PlantUmlError> {
        for (rel, &(line, col)) in self.model.relationships.iter().zip(&self.rel_lines) {
            for end in [&rel.left, &rel.right] {
                if self.model.class(end).is_none() {
                    return Err(PlantUmlError::Syntax {
                        line,
                        col,
                        expected: format!("a declared class name, found `{end}`"),
                    });
                }
            }
        }
        Ok(())
    }
}

fn same_method(m: &Method, name: &str, arity: usize) -> bool {
    !m.is_constructor
        && m.params.len() == arity
        && normalize_name(&m.name, NameMode::Canonical) == normalize_name(name, NameMode::Canonical)
}

fn syntax(line: usize, col: usize, expected: &str) -> PlantUmlError {
    PlantUmlError::Syntax { line, col, expected: expected.to_owned() }
}

/// Parses `NAME {` or `NAME {}`; `col` is the column of `NAME`.
fn class_header(rest: &str, line: usize, col: usize) -> Result<(ClassDef, bool), PlantUmlError> {
    let n = ident_len(rest);
    if n == 0 {
        return Err(syntax(line, col, "class name"));
    }
    let tail = rest[n..].trim();
    let closed = match tail {
        "{" => false,
        "{}" | "{ }" => true,
        _ => return Err(syntax(line, col + n + 1, "`{` after class name")),
    };
    Ok((ClassDef::new(&rest[..n]), closed))
}

fn matching_paren(s: &str) -> Option<usize> {
    let mut depth = 0usize;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' if depth == 0 => return Some(i),
            ')' => depth -= 1,
            _ => {}
        }
    }
    None
}

/// `A ["m1"] -- ["m2"] B [: label [>]]`
fn relationship(text: &str, line: usize, col: usize) -> Result<Relationship, PlantUmlError> {
    let mut cur = Cursor { s: text, pos: 0 };
    let err = |cur: &Cursor<'_>, what: &str| syntax(line, col + cur.pos, what);
    let left = cur.ident().ok_or_else(|| err(&cur, "class declaration or relationship"))?;
    cur.ws();
    let left_mult = cur.quoted().map_err(|_| err(&cur, "closing `\"`"))?;
    cur.ws();
    if !cur.eat("--") || cur.peek().is_some_and(|c| !c.is_whitespace() && c != '"') {
        return Err(err(&cur, "`--` association"));
    }
    cur.ws();
    let right_mult = cur.quoted().map_err(|_| err(&cur, "closing `\"`"))?;
    cur.ws();
    let right = cur.ident().ok_or_else(|| err(&cur, "class name"))?;
    cur.ws();
    let mut rel = Relationship::new(left, right);
    rel.left_mult = left_mult;
    rel.right_mult = right_mult;
    if cur.eat(":") {
        let mut label = cur.rest().trim();
        if let Some(l) = label.strip_suffix('>') {
            rel.directed = true;
            label = l.trim_end();
        }
        if !label.is_empty() {
            rel.label = Some(label.to_owned());
        }
    } else if !cur.rest().is_empty() {
        return Err(err(&cur, "`: label` or end of line"));
    }
    Ok(rel)
}

struct Cursor<'a> {
    s: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn rest(&self) -> &'a str {
        &self.s[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn ws(&mut self) {
        let r = self.rest();
        self.pos += r.len() - r.trim_start().len();
    }

    fn eat(&mut self, tok: &str) -> bool {
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Option<&'a str> {
        let n = ident_len(self.rest());
        if n == 0 {
            return None;
        }
        let id = &self.rest()[..n];
        self.pos += n;
        Some(id)
    }

    fn quoted(&mut self) -> Result<Option<String>, ()> {
        if !self.eat("\"") {
            return Ok(None);
        }
        let r = self.rest();
        let end = r.find('"').ok_or(())?;
        let value = r[..end].to_owned();
        self.pos += end + 1;
        Ok(Some(value))
    }
}

/// Parses a design-side type: `void`, `?` (unknown), `List<T>`, `T[]`, or a
/// named type.
pub fn parse_type(text: &str) -> Option<TypeRef> {
    let t = text.trim();
    if t.is_empty() {
        return None;
    }
    if t == "void" {
        return Some(TypeRef::Void);
    }
    if t == "?" {
        return Some(TypeRef::Unknown);
    }
    if let Some(inner) = t.strip_suffix("[]") {
        return parse_type(inner).map(TypeRef::collection);
    }
    if let Some(inner) = t.strip_prefix("List<").and_then(|r| r.strip_suffix('>')) {
        if balanced(inner) {
            return parse_type(inner).map(TypeRef::collection);
        }
    }
    let ok_chars = t.chars().all(|c| c.is_alphanumeric() || "_.<>[], ".contains(c));
    let starts_ok = t.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_');
    (ok_chars && starts_ok && balanced(t)).then(|| TypeRef::named(t))
}

fn balanced(s: &str) -> bool {
    let mut stack = Vec::new();
    for c in s.chars() {
        match c {
            '<' | '[' => stack.push(c),
            '>' if stack.pop() != Some('<') => return false,
            ']' if stack.pop() != Some('[') => return false,
            _ => {}
        }
    }
    stack.is_empty()
}

pub fn render_type(ty: &TypeRef) -> String {
    match ty {
        TypeRef::Named(n) => n.clone(),
        TypeRef::Collection(e) => format!("List<{}>", render_type(e)),
        TypeRef::Unknown => "?".to_string(),
        TypeRef::Void => "void".to_string(),
    }
}

fn visibility_marker(v: Visibility) -> &'static str {
    match v {
        Visibility::Public => "+",
        Visibility::Private => "-",
        Visibility::Protected => "#",
        Visibility::Unknown => "",
    }
}

/// Canonical PlantUML text for `model`: classes and members in declaration
/// order, attributes before methods, associations last.
pub fn render_plantuml(model: &ClassModel) -> String {
    let mut out = String::from("@startuml\n");
    for (i, class) in model.classes.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let _ = writeln!(out, "class {} {{", class.name);
        for a in &class.attributes {
            let _ = write!(out, "  {}{}", visibility_marker(a.visibility), a.name);
            if a.ty.is_known() {
                let _ = write!(out, ": {}", render_type(&a.ty));
            }
            out.push('\n');
        }
        for m in class.methods.iter().filter(|m| m.is_constructor).chain(class.methods.iter().filter(|m| !m.is_constructor)) {
            let _ = write!(out, "  {}{}(", visibility_marker(m.visibility), m.name);
            for (j, p) in m.params.iter().enumerate() {
                if j > 0 {
                    out.push_str(", ");
                }
                out.push_str(&p.name);
                if p.ty.is_known() {
                    let _ = write!(out, ": {}", render_type(&p.ty));
                }
            }
            out.push(')');
            if !m.is_constructor && m.return_type != TypeRef::Void {
                let _ = write!(out, ": {}", render_type(&m.return_type));
            }
            out.push('\n');
        }
        out.push_str("}\n");
    }
    if !model.relationships.is_empty() && !model.classes.is_empty() {
        out.push('\n');
    }
    for rel in &model.relationships {
        out.push_str(&rel.left);
        if let Some(m) = &rel.left_mult {
            let _ = write!(out, " \"{m}\"");
        }
        out.push_str(" --");
        if let Some(m) = &rel.right_mult {
            let _ = write!(out, " \"{m}\"");
        }
        let _ = write!(out, " {}", rel.right);
        match (&rel.label, rel.directed) {
            (Some(l), true) => {
                let _ = write!(out, " : {l} >");
            }
            (Some(l), false) => {
                let _ = write!(out, " : {l}");
            }
            (None, true) => out.push_str(" : >"),
            (None, false) => {}
        }
        out.push('\n');
    }
    out.push_str("@enduml\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASELINE: &str = include_str!("../../../fixtures/baseline_model.puml");
    const APPENDIX_A: &str = include_str!("../../../fixtures/appendix_a_model.puml");

    #[test]
    fn baseline_listing() {
        let doc = parse_plantuml(BASELINE).unwrap();
        let m = &doc.model;
        let names: Vec<&str> = m.classes.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names, ["Library", "User", "UserCard", "Book"]);
        let book = m.class("Book").unwrap();
        assert_eq!(book.attributes.len(), 2);
        assert_eq!(book.attributes[0].name, "title");
        assert_eq!(book.attributes[0].ty, TypeRef::named("String"));
        assert_eq!(book.attributes[0].visibility, Visibility::Private);
        assert_eq!(book.attributes[1].name, "borrowed");
        assert_eq!(book.attributes[1].ty, TypeRef::named("boolean"));
        assert_eq!(m.relationships.len(), 3);
        assert_eq!(m.relationships[0].left_mult.as_deref(), Some("1"));
        assert_eq!(m.relationships[0].right_mult.as_deref(), Some("many"));
        assert_eq!(m.relationships[0].label.as_deref(), Some("has"));
        let user = m.class("User").unwrap();
        let ctor = user.constructor().unwrap();
        assert_eq!(ctor.params.len(), 1);
        let library = m.class("Library").unwrap();
        assert_eq!(library.methods[0].return_type, TypeRef::Void);
        assert_eq!(library.methods[0].params[1].ty, TypeRef::named("Book"));
        assert!(doc.leading_text.is_empty() && doc.trailing_text.is_empty());
    }

    #[test]
    fn empty_region() {
        let doc = parse_plantuml("@startuml\n@enduml").unwrap();
        assert!(doc.model.classes.is_empty() && doc.model.relationships.is_empty());
        assert_eq!(render_plantuml(&doc.model), "@startuml\n@enduml\n");
    }

    #[test]
    fn appendix_listing() {
        let m = parse_plantuml(APPENDIX_A).unwrap().model;
        assert_eq!(m.classes.len(), 6);
        let staff = m.class("CounterStaff").unwrap();
        assert_eq!(staff.methods.len(), 4);
        assert!(staff.methods.iter().all(|m| m.return_type == TypeRef::Void && m.params.is_empty()));
        assert_eq!(m.relationships.len(), 7);
        let borrows = &m.relationships[3];
        assert_eq!((borrows.left.as_str(), borrows.right.as_str()), ("User", "Book"));
        assert_eq!(borrows.label.as_deref(), Some("borrows"));
        assert!(borrows.directed);
    }

    #[test]
    fn fenced_envelope_is_preserved() {
        let text = "Here you go:\n```plantuml\n@startuml\nclass A {\n}\n@enduml\n```\nbye\n";
        let doc = parse_plantuml(text).unwrap();
        assert_eq!(doc.leading_text, "Here you go:\n```plantuml\n");
        assert_eq!(doc.trailing_text, "```\nbye\n");
        assert_eq!(doc.render_with(&doc.model), text);
        let bare = parse_plantuml("```plantuml\nclass B {\n  -x: int\n}\n```\n").unwrap();
        assert_eq!(bare.model.classes[0].attributes[0].ty, TypeRef::named("int"));
    }

    #[test]
    fn missing_region() {
        assert_eq!(parse_plantuml("class A {\n}\n"), Err(PlantUmlError::MissingRegion));
        assert_eq!(parse_plantuml(""), Err(PlantUmlError::MissingRegion));
    }

    #[test]
    fn rejects_outside_subset() {
        for (text, line) in [
            ("@startuml\nA <|-- B\n@enduml", 2),
            ("@startuml\nclass A {\n}\nnote left of A\n@enduml", 4),
            ("@startuml\nclass A <<entity>> {\n}\n@enduml", 2),
            ("@startuml\npackage x {\n}\n@enduml", 2),
            ("@startuml\nclass A {\n  +f(: int)\n}\n@enduml", 3),
            ("@startuml\nclass A {\n  +x int\n}\n@enduml", 3),
            ("@startuml\nclass A {\n\n@enduml", 4),
            ("@startuml\nclass A {\n}\nA -- Ghost\n@enduml", 4),
            ("@startuml\nclass A {\n}\n", 4),
        ] {
            match parse_plantuml(text) {
                Err(e @ PlantUmlError::Syntax { .. }) => assert_eq!(e.line(), Some(line), "{text:?}: {e}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn duplicates() {
        assert!(matches!(
            parse_plantuml("@startuml\nclass A {\n}\nclass A {\n}\n@enduml"),
            Err(PlantUmlError::DuplicateClass { line: 4, .. })
        ));
        assert!(matches!(
            parse_plantuml("@startuml\nclass A {\n  -x: int\n  -x: String\n}\n@enduml"),
            Err(PlantUmlError::DuplicateMember { line: 4, .. })
        ));
    }

    #[test]
    fn syntax_error_column() {
        let err = parse_plantuml("@startuml\nclass A {\n    +f(x: int) int\n}\n@enduml").unwrap_err();
        assert_eq!(err, PlantUmlError::Syntax { line: 3, col: 16, expected: "`: TYPE` or end of line".into() });
    }

    #[test]
    fn render_attribute_line() {
        let mut m = ClassModel::new(Origin::Synthetic);
        let mut book = ClassDef::new("Book");
        let mut title = Attribute::new("title", TypeRef::named("String"));
        title.visibility = Visibility::Private;
        book.attributes.push(title);
        m.classes.push(book);
        assert!(render_plantuml(&m).contains("\n  -title: String\n"));
    }

    #[test]
    fn type_spellings() {
        assert_eq!(parse_type("List<Book>"), Some(TypeRef::collection(TypeRef::named("Book"))));
        assert_eq!(parse_type("Book[]"), Some(TypeRef::collection(TypeRef::named("Book"))));
        assert_eq!(parse_type("List<?>"), Some(TypeRef::collection(TypeRef::Unknown)));
        assert_eq!(parse_type("Map<String, int>"), Some(TypeRef::named("Map<String, int>")));
        assert_eq!(parse_type("a(b)"), None);
        for ty in [TypeRef::collection(TypeRef::collection(TypeRef::named("int"))), TypeRef::Unknown, TypeRef::Void] {
            assert_eq!(parse_type(&render_type(&ty)), Some(ty));
        }
    }

    #[test]
    fn directed_without_label() {
        let m = parse_plantuml("@startuml\nclass A {}\nclass B {}\nA -- B : >\n@enduml\n").unwrap().model;
        assert!(m.relationships[0].directed);
        assert_eq!(m.relationships[0].label, None);
        assert!(render_plantuml(&m).contains("A -- B : >\n"));
    }
}
