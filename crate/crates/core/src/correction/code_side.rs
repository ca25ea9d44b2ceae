//! Compiles abstract edits into span edits on the code text.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::ops::Range;

use super::{CorrectionError, Edit, Member, TypeTarget};
use crate::code::{
    apply_code_edits, attribute_line, method_stub, params_text, render_class_skeleton, render_code_type, AttrAnchor,
    ClassAnchor, CodeDocument, CodeEdit, CodeEditKind, CodeError, MethodAnchor, SkeletonStyle, TypeSource,
};
use crate::consistency::MemberRef;
use crate::model::{Attribute, ClassDef, Method, Parameter, TypeRef};

/// Insertions are grouped per offset and ordered by `(rank, seq)`.
/// Sort key for an insertion: (rank, sequence number).
type InsertKey = (u8, usize);

#[derive(Default)]
struct Plan {
    replace: Vec<(Range<usize>, CodeEditKind, String)>,
    insert: BTreeMap<usize, Vec<(InsertKey, CodeEditKind, String)>>,
    seq: usize,
}

impl Plan {
    fn replace(&mut self, range: Range<usize>, kind: CodeEditKind, payload: String) {
        self.replace.push((range, kind, payload));
    }

    fn insert(&mut self, at: usize, rank: u8, kind: CodeEditKind, payload: String) {
        self.seq += 1;
        self.insert.entry(at).or_default().push(((rank, self.seq), kind, payload));
    }
}

fn annotation(ty: &TypeRef) -> String {
    format!(": {}", render_code_type(ty).unwrap_or_else(|| "None".to_owned()))
}

fn method_anchor<'a>(c: &'a ClassAnchor, r: &MemberRef) -> Option<&'a MethodAnchor> {
    match r {
        MemberRef::Constructor => c.constructor(),
        MemberRef::Method { name, arity } => {
            c.methods.iter().find(|m| !m.is_constructor && &m.name == name && m.params.len() == *arity)
        }
        MemberRef::Attribute(_) => None,
    }
}

fn attr_anchor<'a>(c: &'a ClassAnchor, name: &str) -> Option<&'a AttrAnchor> {
    c.attributes.iter().find(|a| a.name == name)
}

#[derive(Default)]
struct ClassEdits<'a> {
    renames: Vec<(&'a MemberRef, &'a str)>,
    removals: Vec<&'a MemberRef>,
    attr_types: BTreeMap<&'a str, &'a TypeRef>,
    param_types: Vec<(&'a MemberRef, usize, &'a TypeRef)>,
    return_types: Vec<(&'a MemberRef, &'a TypeRef)>,
    signatures: Vec<(&'a MemberRef, &'a [Parameter])>,
    new_ctor: Option<&'a Method>,
    new_methods: Vec<&'a Method>,
    new_attrs: Vec<&'a Attribute>,
}

pub(super) fn apply(doc: &CodeDocument, edits: &[&Edit]) -> Result<String, CorrectionError> {
    let text = doc.raw_text.as_str();
    let mut plan = Plan::default();
    let mut per_class: BTreeMap<&str, ClassEdits<'_>> = BTreeMap::new();
    let mut removed_classes: Vec<&str> = Vec::new();
    let mut new_classes: Vec<&ClassDef> = Vec::new();
    for e in edits {
        match e {
            Edit::AddClass(c) => new_classes.push(c),
            Edit::RemoveClass(c) => removed_classes.push(c),
            Edit::AddMember { class, member } => {
                let ce = per_class.entry(class).or_default();
                match member {
                    Member::Attribute(a) => ce.new_attrs.push(a),
                    Member::Method(m) if m.is_constructor => ce.new_ctor = Some(m),
                    Member::Method(m) => ce.new_methods.push(m),
                }
            }
            Edit::RemoveMember { class, member } => per_class.entry(class).or_default().removals.push(member),
            Edit::Rename { class, member, to } => per_class.entry(class).or_default().renames.push((member, to)),
            Edit::ChangeType { class, target, to } => {
                let ce = per_class.entry(class).or_default();
                match target {
                    TypeTarget::Attribute(n) => {
                        ce.attr_types.insert(n, to);
                    }
                    TypeTarget::Param { method, index } => ce.param_types.push((method, *index, to)),
                    TypeTarget::Return(m) => ce.return_types.push((m, to)),
                }
            }
            Edit::ChangeSignature { class, member, params } => {
                per_class.entry(class).or_default().signatures.push((member, params))
            }
        }
    }

    for name in &removed_classes {
        let anchor = doc.class_anchor(name).ok_or_else(|| CorrectionError::UnknownTarget((*name).to_owned()))?;
        if per_class.contains_key(name) {
            return Err(CorrectionError::EditConflict((*name).to_owned()));
        }
        plan.replace(anchor.lines.clone(), CodeEditKind::DeleteSpan, String::new());
    }

    for (name, ce) in &per_class {
        let anchor = doc.class_anchor(name).ok_or_else(|| CorrectionError::UnknownTarget((*name).to_owned()))?;
        let class = doc.model.class(name).ok_or_else(|| CorrectionError::UnknownTarget((*name).to_owned()))?;
        class_plan(anchor, class, ce, &mut plan)?;
    }

    if !new_classes.is_empty() {
        let at = doc.index.class_insert;
        let mut payload = String::new();
        for c in new_classes {
            if at > 0 || !payload.is_empty() {
                payload.push('\n');
            }
            payload.push_str(&render_class_skeleton(c));
        }
        plan.insert(at, 9, CodeEditKind::InsertClass, payload);
    }

    let mut out: Vec<CodeEdit> = Vec::new();
    for (range, kind, payload) in plan.replace {
        out.push(CodeEdit::new(kind, doc.span(range), payload));
    }
    for (at, mut items) in plan.insert {
        items.sort_by_key(|i| i.0);
        let kind = items[0].1;
        let mut payload: String = items.into_iter().map(|i| i.2).collect();
        if at == text.len() && at > 0 && !text.ends_with('\n') {
            payload.insert(0, '\n');
        }
        out.push(CodeEdit::new(kind, doc.span(at..at), payload));
    }
    apply_code_edits(doc, &out).map_err(|e| match e {
        CodeError::OverlappingEdits { first, .. } => CorrectionError::EditConflict(format!("{first}")),
        other => CorrectionError::Code(other),
    })
}

fn class_plan(
    anchor: &ClassAnchor,
    class: &ClassDef,
    ce: &ClassEdits<'_>,
    plan: &mut Plan,
) -> Result<(), CorrectionError> {
    let unknown = |what: &dyn core::fmt::Debug| CorrectionError::UnknownTarget(format!("{}.{what:?}", class.name));
    let member_indent = " ".repeat(anchor.member_indent);
    let stub_body = " ".repeat(anchor.member_indent + 4);
    let mut deleted: Vec<usize> = Vec::new();

    for (r, to) in &ce.renames {
        let range = match r {
            MemberRef::Attribute(n) => attr_anchor(anchor, n).ok_or_else(|| unknown(r))?.target.clone(),
            _ => method_anchor(anchor, r).ok_or_else(|| unknown(r))?.name_range.clone(),
        };
        plan.replace(range, CodeEditKind::RenameIdentifier, (*to).to_owned());
    }
    let mut removed_attrs: Vec<&str> = Vec::new();
    for r in &ce.removals {
        let range = match r {
            MemberRef::Attribute(n) => {
                removed_attrs.push(n);
                attr_anchor(anchor, n).ok_or_else(|| unknown(r))?.statement.clone()
            }
            _ => method_anchor(anchor, r).ok_or_else(|| unknown(r))?.lines.clone(),
        };
        deleted.push(range.start);
        plan.replace(range, CodeEditKind::DeleteSpan, String::new());
    }
    for (r, index, to) in &ce.param_types {
        let m = method_anchor(anchor, r).ok_or_else(|| unknown(r))?;
        let p = m.params.get(*index).ok_or_else(|| unknown(r))?;
        match &p.annotation {
            Some(range) => plan.replace(range.clone(), CodeEditKind::SetAnnotation, annotation(to)),
            None => plan.insert(p.name_end, 0, CodeEditKind::SetAnnotation, annotation(to)),
        }
    }
    for (r, to) in &ce.return_types {
        let m = method_anchor(anchor, r).ok_or_else(|| unknown(r))?;
        let payload = format!(" -> {}", render_code_type(to).unwrap_or_else(|| "None".to_owned()));
        if m.return_range.is_empty() {
            plan.insert(m.return_range.start, 0, CodeEditKind::SetAnnotation, payload);
        } else {
            plan.replace(m.return_range.clone(), CodeEditKind::SetAnnotation, payload);
        }
    }
    let mut ctor_signature: Option<&[Parameter]> = None;
    for (r, params) in &ce.signatures {
        let m = method_anchor(anchor, r).ok_or_else(|| unknown(r))?;
        plan.replace(m.params_range.clone(), CodeEditKind::SetAnnotation, params_text(params));
        if m.is_constructor {
            ctor_signature = Some(params);
        }
    }

    // constructor parameter types after the edits, for attributes that take
    // their type from a parameter
    let ctor = anchor.constructor();
    let ctor_def = class.constructor();
    let new_params: Vec<(String, TypeRef)> = match (ctor_signature, ctor_def) {
        (Some(ps), _) => ps.iter().map(|p| (p.name.clone(), p.ty.clone())).collect(),
        (None, Some(m)) => {
            let mut ps: Vec<(String, TypeRef)> = m.params.iter().map(|p| (p.name.clone(), p.ty.clone())).collect();
            for (r, index, to) in &ce.param_types {
                if **r == MemberRef::Constructor {
                    if let Some(p) = ps.get_mut(*index) {
                        p.1 = (*to).clone();
                    }
                }
            }
            ps
        }
        (None, None) => Vec::new(),
    };
    for a in &anchor.attributes {
        if removed_attrs.contains(&a.name.as_str()) {
            continue;
        }
        let current = class.attributes.iter().find(|x| x.name == a.name).map(|x| x.ty.clone()).unwrap_or(TypeRef::Unknown);
        let edited = ce.attr_types.get(a.name.as_str()).copied();
        let intended = edited.cloned().unwrap_or_else(|| current.clone());
        let resulting = match &a.source {
            TypeSource::Param(p) => new_params.iter().find(|(n, _)| n == p).map_or(TypeRef::Unknown, |(_, t)| t.clone()),
            _ => current.clone(),
        };
        let needs = match (&a.source, edited) {
            (TypeSource::Annotation, Some(_)) => true,
            (TypeSource::Annotation, None) => false,
            (_, Some(_)) => resulting != intended,
            (_, None) => resulting != intended && intended.is_known(),
        };
        if !needs {
            continue;
        }
        match &a.annotation {
            Some(range) => plan.replace(range.clone(), CodeEditKind::SetAnnotation, annotation(&intended)),
            None => plan.insert(a.target.end, 0, CodeEditKind::SetAnnotation, annotation(&intended)),
        }
    }
    for name in ce.attr_types.keys() {
        if attr_anchor(anchor, name).is_none() {
            return Err(unknown(name));
        }
    }

    // additions
    let end = anchor.lines.end;
    let params_after: Vec<Parameter> = new_params.iter().map(|(n, t)| Parameter::new(n, t.clone())).collect();
    match ctor {
        Some(m) => {
            let body = " ".repeat(m.body_indent);
            for a in &ce.new_attrs {
                plan.insert(m.lines.end, 1, CodeEditKind::InsertMember, attribute_line(a, &params_after, &body));
            }
            let all_gone = !m.statements.is_empty() && m.statements.iter().all(|s| deleted.contains(&s.start));
            if all_gone && ce.new_attrs.is_empty() {
                plan.insert(m.lines.end, 1, CodeEditKind::InsertMember, format!("{body}pass\n"));
            }
            if let Some(extra) = ce.new_ctor {
                return Err(CorrectionError::EditConflict(format!("{}.{}", class.name, extra.name)));
            }
        }
        None if ce.new_ctor.is_some() || !ce.new_attrs.is_empty() => {
            let synthetic;
            let m = match ce.new_ctor {
                Some(m) => m,
                None => {
                    synthetic = Method::constructor(&class.name, Vec::new());
                    &synthetic
                }
            };
            let body = " ".repeat(anchor.member_indent + 4);
            let mut block = format!("\n{member_indent}def __init__(self{}):\n", params_text(&m.params));
            if ce.new_attrs.is_empty() {
                block.push_str(&format!("{body}pass\n"));
            }
            for a in &ce.new_attrs {
                block.push_str(&attribute_line(a, &m.params, &body));
            }
            plan.insert(end, 2, CodeEditKind::InsertMember, block);
        }
        None => {}
    }
    let style = SkeletonStyle { member_indent: &member_indent, body_indent: &stub_body };
    for m in &ce.new_methods {
        plan.insert(end, 3, CodeEditKind::InsertMember, format!("\n{}", method_stub(m, style)));
    }
    let adds_to_class = ce.new_ctor.is_some() || !ce.new_methods.is_empty() || (ctor.is_none() && !ce.new_attrs.is_empty());
    let class_emptied = anchor.statements.iter().all(|s| deleted.contains(&s.start));
    if class_emptied && !anchor.statements.is_empty() && !adds_to_class {
        plan.insert(end, 4, CodeEditKind::InsertMember, format!("{member_indent}pass\n"));
    }
    Ok(())
}
