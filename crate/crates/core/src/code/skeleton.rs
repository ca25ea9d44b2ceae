//! Forward generation of code skeletons from a class model.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use super::CONSTRUCTOR_NAME;
use crate::model::{Attribute, ClassDef, ClassModel, Method, Parameter, TypeRef};

const INDENT: &str = "    ";

/// Layout knobs for generated members.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SkeletonStyle<'a> {
    pub member_indent: &'a str,
    pub body_indent: &'a str,
}

impl Default for SkeletonStyle<'_> {
    fn default() -> Self {
        Self { member_indent: INDENT, body_indent: "        " }
    }
}

/// Annotation text for a type, `None` when the type is unknown.
pub fn render_code_type(ty: &TypeRef) -> Option<String> {
    match ty {
        TypeRef::Unknown => None,
        TypeRef::Void => Some("None".into()),
        TypeRef::Named(n) => Some(n.clone()),
        TypeRef::Collection(e) => Some(match render_code_type(e) {
            None => "list".into(),
            Some(inner) => format!("list[{inner}]"),
        }),
    }
}

fn param_text(p: &Parameter) -> String {
    match render_code_type(&p.ty) {
        Some(t) => format!("{}: {t}", p.name),
        None => p.name.clone(),
    }
}

/// Parameter list after the receiver, including the leading `, `.
pub(crate) fn params_text(params: &[Parameter]) -> String {
    let mut out = String::new();
    for p in params {
        out.push_str(", ");
        out.push_str(&param_text(p));
    }
    out
}

/// One constructor statement initializing `attr`. When a same-named
/// parameter carries exactly the attribute's type the value is taken from
/// it, otherwise a placeholder with an explicit annotation is written.
pub(crate) fn attribute_line(attr: &Attribute, params: &[Parameter], indent: &str) -> String {
    if params.iter().any(|p| p.name == attr.name && p.ty == attr.ty) {
        return format!("{indent}self.{0} = {0}\n", attr.name);
    }
    match render_code_type(&attr.ty) {
        None => format!("{indent}self.{} = None\n", attr.name),
        Some(t) => {
            let init = if matches!(attr.ty, TypeRef::Collection(_)) { "[]" } else { "None" };
            format!("{indent}self.{}: {t} = {init}\n", attr.name)
        }
    }
}

fn signature(m: &Method) -> String {
    let name = if m.is_constructor { CONSTRUCTOR_NAME } else { m.name.as_str() };
    let mut s = format!("def {name}(self{})", params_text(&m.params));
    if !m.is_constructor {
        if let TypeRef::Named(_) | TypeRef::Collection(_) = m.return_type {
            let _ = write!(s, " -> {}", render_code_type(&m.return_type).unwrap_or_default());
        }
    }
    s.push(':');
    s
}

/// A method with a placeholder body.
pub(crate) fn method_stub(m: &Method, style: SkeletonStyle<'_>) -> String {
    format!("{}{}\n{}pass\n", style.member_indent, signature(m), style.body_indent)
}

fn constructor_block(class: &ClassDef, style: SkeletonStyle<'_>) -> Option<String> {
    let ctor = class.constructor();
    let params: &[Parameter] = ctor.map_or(&[], |c| &c.params);
    if class.attributes.is_empty() && params.is_empty() {
        return None;
    }
    let synthetic;
    let m = match ctor {
        Some(c) => c,
        None => {
            synthetic = Method::constructor(&class.name, Vec::new());
            &synthetic
        }
    };
    let mut out = format!("{}{}\n", style.member_indent, signature(m));
    if class.attributes.is_empty() {
        let _ = writeln!(out, "{}pass", style.body_indent);
    }
    for a in &class.attributes {
        out.push_str(&attribute_line(a, params, style.body_indent));
    }
    Some(out)
}

/// One class block, ending in a newline.
pub fn render_class_skeleton(class: &ClassDef) -> String {
    let style = SkeletonStyle::default();
    let mut blocks: Vec<String> = Vec::new();
    blocks.extend(constructor_block(class, style));
    for m in class.methods.iter().filter(|m| !m.is_constructor) {
        blocks.push(method_stub(m, style));
    }
    let mut out = format!("class {}:\n", class.name);
    if blocks.is_empty() {
        let _ = writeln!(out, "{INDENT}pass");
    }
    out.push_str(&blocks.join("\n"));
    out
}

pub fn render_code_skeleton(model: &ClassModel) -> String {
    let classes: Vec<String> = model.classes.iter().map(render_class_skeleton).collect();
    classes.join("\n")
}
