//! The class-model IR produced by both parsers and consumed by the checker.

use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// A region of an artifact. Lines and columns are 1-based, columns count
/// bytes, and `end` is exclusive (a zero-width span marks an insertion
/// point).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SourceSpan {
    pub artifact: String,
    pub start_line: usize,
    pub start_col: usize,
    pub end_line: usize,
    pub end_col: usize,
}

impl SourceSpan {
    pub fn new(artifact: &str, start: (usize, usize), end: (usize, usize)) -> Self {
        debug_assert!(start.0 >= 1 && start.1 >= 1);
        debug_assert!(start <= end);
        Self {
            artifact: artifact.to_owned(),
            start_line: start.0,
            start_col: start.1,
            end_line: end.0,
            end_col: end.1,
        }
    }

    pub fn start(&self) -> (usize, usize) {
        (self.start_line, self.start_col)
    }

    pub fn end(&self) -> (usize, usize) {
        (self.end_line, self.end_col)
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.artifact, self.start_line, self.start_col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TypeRef {
    Named(String),
    Collection(Box<TypeRef>),
    Unknown,
    Void,
}

impl TypeRef {
    pub fn named(name: &str) -> Self {
        TypeRef::Named(name.to_owned())
    }

    pub fn collection(element: TypeRef) -> Self {
        TypeRef::Collection(Box::new(element))
    }

    /// True for types that carry information the checker can compare.
    pub fn is_known(&self) -> bool {
        !matches!(self, TypeRef::Unknown)
    }

    /// The innermost named type, looking through collections.
    pub fn base_name(&self) -> Option<&str> {
        match self {
            TypeRef::Named(n) => Some(n),
            TypeRef::Collection(e) => e.base_name(),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum Visibility {
    Public,
    Private,
    Protected,
    #[default]
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parameter {
    pub name: String,
    pub ty: TypeRef,
    pub span: Option<SourceSpan>,
}

impl Parameter {
    pub fn new(name: &str, ty: TypeRef) -> Self {
        Self { name: name.to_owned(), ty, span: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Method {
    pub name: String,
    pub params: Vec<Parameter>,
    pub return_type: TypeRef,
    pub visibility: Visibility,
    pub is_constructor: bool,
    pub span: Option<SourceSpan>,
}

impl Method {
    pub fn new(name: &str, params: Vec<Parameter>, return_type: TypeRef) -> Self {
        Self {
            name: name.to_owned(),
            params,
            return_type,
            visibility: Visibility::Unknown,
            is_constructor: false,
            span: None,
        }
    }

    pub fn constructor(class: &str, params: Vec<Parameter>) -> Self {
        Self {
            name: class.to_owned(),
            params,
            return_type: TypeRef::Void,
            visibility: Visibility::Unknown,
            is_constructor: true,
            span: None,
        }
    }

    pub fn arity(&self) -> usize {
        self.params.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attribute {
    pub name: String,
    pub ty: TypeRef,
    pub visibility: Visibility,
    pub span: Option<SourceSpan>,
}

impl Attribute {
    pub fn new(name: &str, ty: TypeRef) -> Self {
        Self { name: name.to_owned(), ty, visibility: Visibility::Unknown, span: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDef {
    pub name: String,
    pub attributes: Vec<Attribute>,
    pub methods: Vec<Method>,
    pub span: Option<SourceSpan>,
}

impl ClassDef {
    pub fn new(name: &str) -> Self {
        Self { name: name.to_owned(), attributes: Vec::new(), methods: Vec::new(), span: None }
    }

    pub fn constructor(&self) -> Option<&Method> {
        self.methods.iter().find(|m| m.is_constructor)
    }

    pub fn attribute(&self, name: &str, mode: NameMode) -> Option<&Attribute> {
        let key = normalize_name(name, mode);
        self.attributes.iter().find(|a| normalize_name(&a.name, mode) == key)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Relationship {
    pub left: String,
    pub right: String,
    pub left_mult: Option<String>,
    pub right_mult: Option<String>,
    pub label: Option<String>,
    pub directed: bool,
}

impl Relationship {
    pub fn new(left: &str, right: &str) -> Self {
        Self {
            left: left.to_owned(),
            right: right.to_owned(),
            left_mult: None,
            right_mult: None,
            label: None,
            directed: false,
        }
    }

    pub fn connects(&self, a: &str, b: &str) -> bool {
        (self.left == a && self.right == b) || (self.left == b && self.right == a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Origin {
    ModelArtifact,
    CodeArtifact,
    #[default]
    Synthetic,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ClassModel {
    pub classes: Vec<ClassDef>,
    pub relationships: Vec<Relationship>,
    pub origin: Origin,
}

impl ClassModel {
    pub fn new(origin: Origin) -> Self {
        Self { classes: Vec::new(), relationships: Vec::new(), origin }
    }

    pub fn class(&self, name: &str) -> Option<&ClassDef> {
        self.classes.iter().find(|c| c.name == name)
    }

    pub fn class_mut(&mut self, name: &str) -> Option<&mut ClassDef> {
        self.classes.iter_mut().find(|c| c.name == name)
    }

    /// Checks the structural invariants; returns a description of the first
    /// violation.
    pub fn validate(&self) -> Result<(), String> {
        use alloc::format;
        for (i, class) in self.classes.iter().enumerate() {
            if self.classes[..i].iter().any(|c| c.name == class.name) {
                return Err(format!("duplicate class `{}`", class.name));
            }
            if class.methods.iter().filter(|m| m.is_constructor).count() > 1 {
                return Err(format!("class `{}` declares more than one constructor", class.name));
            }
            for (j, a) in class.attributes.iter().enumerate() {
                let key = normalize_name(&a.name, NameMode::Canonical);
                if class.attributes[..j].iter().any(|b| normalize_name(&b.name, NameMode::Canonical) == key) {
                    return Err(format!("duplicate attribute `{}.{}`", class.name, a.name));
                }
            }
            for (j, m) in class.methods.iter().enumerate() {
                let key = method_key(m);
                if class.methods[..j].iter().any(|n| method_key(n) == key) {
                    return Err(format!("duplicate method `{}.{}`", class.name, m.name));
                }
                for (k, p) in m.params.iter().enumerate() {
                    if m.params[..k].iter().any(|q| q.name == p.name) {
                        return Err(format!("duplicate parameter `{}` in `{}.{}`", p.name, class.name, m.name));
                    }
                }
            }
        }
        for rel in &self.relationships {
            for end in [&rel.left, &rel.right] {
                if self.class(end).is_none() {
                    return Err(format!("relationship endpoint `{end}` is not a class"));
                }
            }
        }
        Ok(())
    }

    /// Removes a class together with every relationship touching it.
    pub fn remove_class(&mut self, name: &str) -> Option<ClassDef> {
        let pos = self.classes.iter().position(|c| c.name == name)?;
        self.relationships.retain(|r| r.left != name && r.right != name);
        Some(self.classes.remove(pos))
    }

    /// Span-free, canonically ordered copy used for equality.
    fn canonical(&self) -> ClassModel {
        let mut classes: Vec<ClassDef> = self
            .classes
            .iter()
            .map(|c| {
                let mut attributes: Vec<Attribute> = c
                    .attributes
                    .iter()
                    .map(|a| Attribute { span: None, ..a.clone() })
                    .collect();
                attributes.sort_by(|a, b| {
                    normalize_name(&a.name, NameMode::Canonical)
                        .cmp(&normalize_name(&b.name, NameMode::Canonical))
                        .then_with(|| a.name.cmp(&b.name))
                });
                let mut methods: Vec<Method> = c
                    .methods
                    .iter()
                    // a parameterless constructor is the implicit default one
                    .filter(|m| !(m.is_constructor && m.params.is_empty()))
                    .map(|m| Method {
                        span: None,
                        params: m.params.iter().map(|p| Parameter { span: None, ..p.clone() }).collect(),
                        return_type: if m.is_constructor { TypeRef::Void } else { m.return_type.clone() },
                        ..m.clone()
                    })
                    .collect();
                methods.sort_by(|a, b| method_key(a).cmp(&method_key(b)).then_with(|| a.name.cmp(&b.name)));
                ClassDef { name: c.name.clone(), attributes, methods, span: None }
            })
            .collect();
        classes.sort_by(|a, b| a.name.cmp(&b.name));
        let mut relationships = self.relationships.clone();
        relationships.sort();
        ClassModel { classes, relationships, origin: Origin::Synthetic }
    }
}

fn method_key(m: &Method) -> (bool, String, usize) {
    (!m.is_constructor, normalize_name(&m.name, NameMode::Canonical), m.params.len())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NameMode {
    Exact,
    #[default]
    Canonical,
}

impl NameMode {
    pub fn as_str(self) -> &'static str {
        match self {
            NameMode::Exact => "exact",
            NameMode::Canonical => "canonical",
        }
    }
}

/// `Exact` returns the name unchanged; `Canonical` lowercases it and drops
/// underscores, so `lend_book` and `lendBook` coincide.
pub fn normalize_name(raw: &str, mode: NameMode) -> String {
    match mode {
        NameMode::Exact => raw.to_owned(),
        NameMode::Canonical => raw.chars().filter(|&c| c != '_').flat_map(char::to_lowercase).collect(),
    }
}

/// Converts `snake_case` to `camelCase`. Outer underscores are kept and a
/// name without inner underscores is returned unchanged.
pub fn camel_case(raw: &str) -> String {
    let core = raw.trim_matches('_');
    let lead = raw.len() - raw.trim_start_matches('_').len();
    let (prefix, suffix) = (&raw[..lead], &raw[lead + core.len()..]);
    if !core.contains('_') {
        return raw.to_owned();
    }
    let rest = core;
    let mut out = String::from(prefix);
    for (i, part) in rest.split('_').filter(|p| !p.is_empty()).enumerate() {
        if i == 0 {
            out.push_str(part);
        } else {
            let mut chars = part.chars();
            if let Some(first) = chars.next() {
                out.extend(first.to_uppercase());
                out.push_str(chars.as_str());
            }
        }
    }
    out.push_str(suffix);
    out
}

/// Pairs of type spellings that denote the same type on the design side and
/// the code side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeTable {
    pairs: Vec<(String, String)>,
}

impl Default for TypeTable {
    fn default() -> Self {
        Self::builtin()
    }
}

impl TypeTable {
    pub fn empty() -> Self {
        Self { pairs: Vec::new() }
    }

    pub fn builtin() -> Self {
        let mut t = Self::empty();
        t.add("String", "str");
        t.add("boolean", "bool");
        t.add("int", "int");
        t
    }

    /// Registers `model_name` (design spelling) as equivalent to `code_name`.
    pub fn add(&mut self, model_name: &str, code_name: &str) {
        let pair = (model_name.to_owned(), code_name.to_owned());
        if !self.pairs.contains(&pair) {
            self.pairs.push(pair);
        }
    }

    pub fn pairs(&self) -> &[(String, String)] {
        &self.pairs
    }

    pub fn names_equivalent(&self, a: &str, b: &str) -> bool {
        a == b || self.pairs.iter().any(|(m, c)| (m == a && c == b) || (m == b && c == a))
    }

    pub fn to_code_name<'a>(&'a self, model_name: &'a str) -> &'a str {
        self.pairs.iter().find(|(m, _)| m == model_name).map_or(model_name, |(_, c)| c.as_str())
    }

    pub fn to_model_name<'a>(&'a self, code_name: &'a str) -> &'a str {
        self.pairs.iter().find(|(_, c)| c == code_name).map_or(code_name, |(m, _)| m.as_str())
    }

    pub fn to_code(&self, ty: &TypeRef) -> TypeRef {
        self.map(ty, true)
    }

    pub fn to_model(&self, ty: &TypeRef) -> TypeRef {
        self.map(ty, false)
    }

    fn map(&self, ty: &TypeRef, to_code: bool) -> TypeRef {
        match ty {
            TypeRef::Named(n) => {
                let name = if to_code { self.to_code_name(n) } else { self.to_model_name(n) };
                TypeRef::Named(name.to_owned())
            }
            TypeRef::Collection(e) => TypeRef::Collection(Box::new(self.map(e, to_code))),
            other => other.clone(),
        }
    }

    /// Rewrites every type in `model` into code spelling.
    pub fn model_to_code(&self, model: &ClassModel) -> ClassModel {
        self.map_model(model, &|t| self.to_code(t))
    }

    /// Rewrites every type in `model` into design spelling.
    pub fn code_to_model(&self, model: &ClassModel) -> ClassModel {
        self.map_model(model, &|t| self.to_model(t))
    }

    fn map_model(&self, model: &ClassModel, f: &dyn Fn(&TypeRef) -> TypeRef) -> ClassModel {
        let mut out = model.clone();
        for class in &mut out.classes {
            for a in &mut class.attributes {
                a.ty = f(&a.ty);
            }
            for m in &mut class.methods {
                m.return_type = f(&m.return_type);
                for p in &mut m.params {
                    p.ty = f(&p.ty);
                }
            }
        }
        out
    }
}

/// `unknown` matches anything; named types match through `table`;
/// collections compare element-wise.
pub fn type_equivalent(a: &TypeRef, b: &TypeRef, table: &TypeTable) -> bool {
    match (a, b) {
        (TypeRef::Unknown, _) | (_, TypeRef::Unknown) => true,
        (TypeRef::Void, TypeRef::Void) => true,
        (TypeRef::Named(x), TypeRef::Named(y)) => table.names_equivalent(x, y),
        (TypeRef::Collection(x), TypeRef::Collection(y)) => type_equivalent(x, y, table),
        _ => false,
    }
}

/// Structural equality ignoring spans, origin and member/class order.
pub fn model_equal(a: &ClassModel, b: &ClassModel) -> bool {
    a.canonical() == b.canonical()
}
