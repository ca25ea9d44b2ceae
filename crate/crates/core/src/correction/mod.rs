//! Correction alternatives for findings, policy-driven selection, and
//! application to both artifacts.
//!
//! Model-side edits operate on the IR (the model is re-rendered afterwards);
//! code-side edits are compiled to span edits so method bodies survive.

mod code_side;

use alloc::borrow::ToOwned;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::code::{CodeDocument, CodeError};
use crate::consistency::{fingerprint, match_models, Element, Finding, FindingKind, Location, MatchOptions, MemberRef, PairKind, Report, Severity};
use crate::model::{camel_case, Attribute, ClassDef, ClassModel, Method, NameMode, Parameter, TypeRef, TypeTable, Visibility};
use crate::plantuml::render_type;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Model,
    Code,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Model => "model",
            Side::Code => "code",
        }
    }

    pub fn other(self) -> Self {
        match self {
            Side::Model => Side::Code,
            Side::Code => Side::Model,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Member {
    Attribute(Attribute),
    Method(Method),
}

/// Which type a [`Edit::ChangeType`] rewrites.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum TypeTarget {
    Attribute(String),
    Param { method: MemberRef, index: usize },
    Return(MemberRef),
}

/// An abstract edit on one artifact. Types are already spelled for the side
/// the edit applies to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Edit {
    AddClass(ClassDef),
    RemoveClass(String),
    AddMember { class: String, member: Member },
    RemoveMember { class: String, member: MemberRef },
    Rename { class: String, member: MemberRef, to: String },
    ChangeType { class: String, target: TypeTarget, to: TypeRef },
    ChangeSignature { class: String, member: MemberRef, params: Vec<Parameter> },
}

impl Edit {
    pub fn kind_str(&self) -> &'static str {
        match self {
            Edit::AddClass(_) => "add-class",
            Edit::RemoveClass(_) => "remove-class",
            Edit::AddMember { .. } => "add-member",
            Edit::RemoveMember { .. } => "remove-member",
            Edit::Rename { .. } => "rename",
            Edit::ChangeType { .. } => "change-type",
            Edit::ChangeSignature { .. } => "change-signature",
        }
    }

    pub fn class(&self) -> &str {
        match self {
            Edit::AddClass(c) => &c.name,
            Edit::RemoveClass(c) => c,
            Edit::AddMember { class, .. }
            | Edit::RemoveMember { class, .. }
            | Edit::Rename { class, .. }
            | Edit::ChangeType { class, .. }
            | Edit::ChangeSignature { class, .. } => class,
        }
    }

    /// What the edit writes to, used to detect two edits fighting over one
    /// element.
    fn slot(&self) -> String {
        match self {
            Edit::AddClass(c) => format!("class:{}", c.name),
            Edit::RemoveClass(c) => format!("class:{c}"),
            Edit::AddMember { class, member: Member::Attribute(a) } => format!("{class}:attr:{}", a.name),
            Edit::AddMember { class, member: Member::Method(m) } => format!("{class}:{:?}", member_ref(m)),
            Edit::RemoveMember { class, member } => format!("{class}:{member:?}"),
            Edit::Rename { class, member, .. } => format!("{class}:{member:?}:name"),
            Edit::ChangeType { class, target, .. } => format!("{class}:{target:?}"),
            Edit::ChangeSignature { class, member, .. } => format!("{class}:{member:?}:params"),
        }
    }
}

pub(crate) fn member_ref(m: &Method) -> MemberRef {
    if m.is_constructor {
        MemberRef::Constructor
    } else {
        MemberRef::Method { name: m.name.clone(), arity: m.params.len() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alternative {
    pub side: Side,
    pub edit: Edit,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrectionSet {
    pub finding_id: String,
    pub kind: FindingKind,
    pub alternatives: Vec<Alternative>,
}

impl CorrectionSet {
    pub fn alternative(&self, side: Side) -> Option<&Alternative> {
        self.alternatives.iter().find(|a| a.side == side)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChosenEdit {
    pub finding_id: String,
    pub side: Side,
    pub edit: Edit,
    pub description: String,
}

impl ChosenEdit {
    pub fn from_alternative(set: &CorrectionSet, alt: &Alternative) -> Self {
        Self { finding_id: set.finding_id.clone(), side: alt.side, edit: alt.edit.clone(), description: alt.description.clone() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Policy {
    /// Keep the model, edit the code.
    ModelWins,
    /// Keep the code, edit the model.
    CodeWins,
    /// Add whatever one side lacks; on conflicting values keep `prefer`.
    Union { prefer: Side },
    ReportOnly,
}

impl Policy {
    pub fn as_str(self) -> &'static str {
        match self {
            Policy::ModelWins => "model-wins",
            Policy::CodeWins => "code-wins",
            Policy::Union { .. } => "union",
            Policy::ReportOnly => "report-only",
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorrectionError {
    #[error("the report was computed from different artifacts")]
    StaleReport,
    #[error("edit targets `{0}`, which does not exist")]
    UnknownTarget(String),
    #[error("two edits target `{0}`")]
    EditConflict(String),
    #[error(transparent)]
    Code(#[from] CodeError),
}

fn loc(l: &Option<Location>) -> &Location {
    l.as_ref().expect("finding location for its kind")
}

fn location_member(l: &Location) -> MemberRef {
    match l.element {
        Element::Constructor => MemberRef::Constructor,
        Element::Attribute => MemberRef::Attribute(l.member.clone().unwrap_or_default()),
        _ => MemberRef::Method { name: l.member.clone().unwrap_or_default(), arity: l.arity.unwrap_or(0) },
    }
}

fn find_method<'a>(c: &'a ClassDef, r: &MemberRef) -> Option<&'a Method> {
    match r {
        MemberRef::Constructor => c.constructor(),
        MemberRef::Method { name, arity } => {
            c.methods.iter().find(|m| !m.is_constructor && &m.name == name && m.params.len() == *arity)
        }
        MemberRef::Attribute(_) => None,
    }
}

fn retype_method(m: &Method, f: impl Fn(&TypeRef) -> TypeRef) -> Method {
    let mut m = m.clone();
    m.return_type = f(&m.return_type);
    for p in &mut m.params {
        p.ty = f(&p.ty);
    }
    m
}

/// Spelling and layout conventions for members copied across sides.
struct Convert<'a> {
    table: &'a TypeTable,
    mode: NameMode,
}

impl Convert<'_> {
    fn name_for_model(&self, name: &str) -> String {
        match self.mode {
            NameMode::Canonical => camel_case(name),
            NameMode::Exact => name.to_owned(),
        }
    }

    fn attr_to_model(&self, a: &Attribute) -> Attribute {
        Attribute {
            name: self.name_for_model(&a.name),
            ty: self.table.to_model(&a.ty),
            visibility: Visibility::Private,
            span: None,
        }
    }

    fn attr_to_code(&self, a: &Attribute) -> Attribute {
        Attribute { name: a.name.clone(), ty: self.table.to_code(&a.ty), visibility: Visibility::Unknown, span: None }
    }

    fn method_to_model(&self, m: &Method) -> Method {
        let mut out = retype_method(m, |t| self.table.to_model(t));
        if !out.is_constructor {
            out.name = self.name_for_model(&m.name);
            if out.return_type == TypeRef::Unknown {
                out.return_type = TypeRef::Void;
            }
        }
        for p in &mut out.params {
            p.span = None;
        }
        out.visibility = Visibility::Public;
        out.span = None;
        out
    }

    fn method_to_code(&self, m: &Method) -> Method {
        let mut out = retype_method(m, |t| self.table.to_code(t));
        for p in &mut out.params {
            p.span = None;
        }
        out.visibility = Visibility::Unknown;
        out.span = None;
        out
    }

    fn class_to_model(&self, c: &ClassDef) -> ClassDef {
        let mut out = ClassDef::new(&c.name);
        out.attributes = c.attributes.iter().map(|a| self.attr_to_model(a)).collect();
        out.methods = c
            .methods
            .iter()
            .filter(|m| !(m.is_constructor && m.params.is_empty()))
            .map(|m| self.method_to_model(m))
            .collect();
        out
    }

    fn class_to_code(&self, c: &ClassDef) -> ClassDef {
        let mut out = ClassDef::new(&c.name);
        out.attributes = c.attributes.iter().map(|a| self.attr_to_code(a)).collect();
        out.methods = c.methods.iter().map(|m| self.method_to_code(m)).collect();
        out
    }
}

fn describe_member(class: &str, r: &MemberRef) -> String {
    match r {
        MemberRef::Constructor => format!("the constructor of `{class}`"),
        MemberRef::Method { name, .. } => format!("method `{class}.{name}()`"),
        MemberRef::Attribute(name) => format!("attribute `{class}.{name}`"),
    }
}

fn signature_text(params: &[Parameter]) -> String {
    let parts: Vec<String> = params
        .iter()
        .map(|p| match p.ty {
            TypeRef::Unknown => p.name.clone(),
            _ => format!("{}: {}", p.name, render_type(&p.ty)),
        })
        .collect();
    format!("({})", parts.join(", "))
}

/// Turns every error finding of `report` into alternatives for both sides.
pub fn propose(report: &Report, design: &ClassModel, code: &CodeDocument) -> Result<Vec<CorrectionSet>, CorrectionError> {
    if fingerprint(design) != report.model_fingerprint || fingerprint(&code.model) != report.code_fingerprint {
        return Err(CorrectionError::StaleReport);
    }
    let opts = &report.options;
    let conv = Convert { table: &opts.type_table, mode: opts.name_mode };
    let mut out = Vec::new();
    for f in report.findings.iter().filter(|f| f.severity == Severity::Error) {
        let alternatives = alternatives(f, design, &code.model, opts, &conv)?;
        out.push(CorrectionSet { finding_id: f.id.clone(), kind: f.kind, alternatives });
    }
    Ok(out)
}

fn class_of<'a>(model: &'a ClassModel, name: &str) -> Result<&'a ClassDef, CorrectionError> {
    model.class(name).ok_or_else(|| CorrectionError::UnknownTarget(name.to_owned()))
}

fn alternatives(
    f: &Finding,
    design: &ClassModel,
    code: &ClassModel,
    opts: &MatchOptions,
    conv: &Convert<'_>,
) -> Result<Vec<Alternative>, CorrectionError> {
    use FindingKind::*;
    let alt = |side, edit, description| Alternative { side, edit, description };
    let unknown = |what: &Location| CorrectionError::UnknownTarget(what.key());
    Ok(match f.kind {
        MissingClassInCode => {
            let c = class_of(design, &loc(&f.model_location).class)?;
            vec_of([
                alt(Side::Model, Edit::RemoveClass(c.name.clone()), format!("remove class `{}` from the design model", c.name)),
                alt(
                    Side::Code,
                    Edit::AddClass(conv.class_to_code(c)),
                    format!("add class `{}` to the code (methods get placeholder bodies)", c.name),
                ),
            ])
        }
        MissingClassInModel => {
            let c = class_of(code, &loc(&f.code_location).class)?;
            vec_of([
                alt(Side::Model, Edit::AddClass(conv.class_to_model(c)), format!("add class `{}` to the design model", c.name)),
                alt(Side::Code, Edit::RemoveClass(c.name.clone()), format!("remove class `{}` from the code", c.name)),
            ])
        }
        MissingMethodInCode | MissingAttributeInCode => {
            let l = loc(&f.model_location);
            let c = class_of(design, &l.class)?;
            let r = location_member(l);
            let code_class = matched_class(design, code, opts, &c.name, Side::Model)?;
            let (member, what) = match &r {
                MemberRef::Attribute(name) => {
                    let a = c.attributes.iter().find(|a| &a.name == name).ok_or_else(|| unknown(l))?;
                    (Member::Attribute(conv.attr_to_code(a)), "")
                }
                _ => {
                    let m = find_method(c, &r).ok_or_else(|| unknown(l))?;
                    (Member::Method(conv.method_to_code(m)), " with a placeholder body")
                }
            };
            vec_of([
                alt(
                    Side::Model,
                    Edit::RemoveMember { class: c.name.clone(), member: r.clone() },
                    format!("remove {} from the design model", describe_member(&c.name, &r)),
                ),
                alt(
                    Side::Code,
                    Edit::AddMember { class: code_class.clone(), member },
                    format!("add {} to the code{what}", describe_member(&code_class, &r)),
                ),
            ])
        }
        MissingMethodInModel | MissingAttributeInModel => {
            let l = loc(&f.code_location);
            let c = class_of(code, &l.class)?;
            let r = location_member(l);
            let model_class = matched_class(design, code, opts, &c.name, Side::Code)?;
            let (member, shown) = match &r {
                MemberRef::Attribute(name) => {
                    let a = c.attributes.iter().find(|a| &a.name == name).ok_or_else(|| unknown(l))?;
                    let a = conv.attr_to_model(a);
                    let shown = MemberRef::Attribute(a.name.clone());
                    (Member::Attribute(a), shown)
                }
                _ => {
                    let m = conv.method_to_model(find_method(c, &r).ok_or_else(|| unknown(l))?);
                    let shown = member_ref(&m);
                    (Member::Method(m), shown)
                }
            };
            let code_alt = if r == MemberRef::Constructor {
                alt(
                    Side::Code,
                    Edit::ChangeSignature { class: c.name.clone(), member: r.clone(), params: Vec::new() },
                    format!("drop the parameters of the constructor of `{}` in the code", c.name),
                )
            } else {
                alt(
                    Side::Code,
                    Edit::RemoveMember { class: c.name.clone(), member: r.clone() },
                    format!("remove {} from the code", describe_member(&c.name, &r)),
                )
            };
            vec_of([
                alt(
                    Side::Model,
                    Edit::AddMember { class: model_class.clone(), member },
                    format!("add {} to the design model", describe_member(&model_class, &shown)),
                ),
                code_alt,
            ])
        }
        ProbableRename => {
            let (dl, cl) = (loc(&f.model_location), loc(&f.code_location));
            let (dr, cr) = (location_member(dl), location_member(cl));
            let (dn, cn) = (dl.member.clone().unwrap_or_default(), cl.member.clone().unwrap_or_default());
            vec_of([
                alt(
                    Side::Model,
                    Edit::Rename { class: dl.class.clone(), member: dr.clone(), to: cn.clone() },
                    format!("rename {} to `{cn}` in the design model", describe_member(&dl.class, &dr)),
                ),
                alt(
                    Side::Code,
                    Edit::Rename { class: cl.class.clone(), member: cr.clone(), to: dn.clone() },
                    format!("rename {} to `{dn}` in the code", describe_member(&cl.class, &cr)),
                ),
            ])
        }
        ConstructorArityMismatch => {
            let (dl, cl) = (loc(&f.model_location), loc(&f.code_location));
            let (dc, cc) = (class_of(design, &dl.class)?, class_of(code, &cl.class)?);
            let (dr, cr) = (location_member(dl), location_member(cl));
            let dm = find_method(dc, &dr).ok_or_else(|| unknown(dl))?;
            let cm = find_method(cc, &cr).ok_or_else(|| unknown(cl))?;
            let model_params = adopt_code_params(dc, cc, cm, opts, conv);
            let code_params: Vec<Parameter> = conv.method_to_code(dm).params;
            vec_of([
                alt(
                    Side::Model,
                    Edit::ChangeSignature { class: dc.name.clone(), member: dr.clone(), params: model_params.clone() },
                    format!("change {} to {} in the design model", describe_member(&dc.name, &dr), signature_text(&model_params)),
                ),
                alt(
                    Side::Code,
                    Edit::ChangeSignature { class: cc.name.clone(), member: cr.clone(), params: code_params.clone() },
                    format!("change {} to {} in the code", describe_member(&cc.name, &cr), signature_text(&code_params)),
                ),
            ])
        }
        ParamTypeMismatch | ReturnTypeMismatch | AttributeTypeMismatch => {
            let (dl, cl) = (loc(&f.model_location), loc(&f.code_location));
            let (dc, cc) = (class_of(design, &dl.class)?, class_of(code, &cl.class)?);
            let (dr, cr) = (location_member(dl), location_member(cl));
            let (dt, ct, dtarget, ctarget, what) = match f.kind {
                AttributeTypeMismatch => {
                    let (MemberRef::Attribute(an), MemberRef::Attribute(bn)) = (&dr, &cr) else { return Err(unknown(dl)) };
                    let a = dc.attributes.iter().find(|a| &a.name == an).ok_or_else(|| unknown(dl))?;
                    let b = cc.attributes.iter().find(|a| &a.name == bn).ok_or_else(|| unknown(cl))?;
                    let what = format!("the type of attribute `{}.{an}`", dc.name);
                    (a.ty.clone(), b.ty.clone(), TypeTarget::Attribute(an.clone()), TypeTarget::Attribute(bn.clone()), what)
                }
                ParamTypeMismatch => {
                    let (i, j) = (dl.param.unwrap_or(0), cl.param.unwrap_or(0));
                    let m = find_method(dc, &dr).ok_or_else(|| unknown(dl))?;
                    let n = find_method(cc, &cr).ok_or_else(|| unknown(cl))?;
                    let p = m.params.get(i).ok_or_else(|| unknown(dl))?;
                    let q = n.params.get(j).ok_or_else(|| unknown(cl))?;
                    let what = format!("the type of parameter `{}` of {}", p.name, describe_member(&dc.name, &dr));
                    (
                        p.ty.clone(),
                        q.ty.clone(),
                        TypeTarget::Param { method: dr.clone(), index: i },
                        TypeTarget::Param { method: cr.clone(), index: j },
                        what,
                    )
                }
                _ => {
                    let m = find_method(dc, &dr).ok_or_else(|| unknown(dl))?;
                    let n = find_method(cc, &cr).ok_or_else(|| unknown(cl))?;
                    let what = format!("the return type of {}", describe_member(&dc.name, &dr));
                    (m.return_type.clone(), n.return_type.clone(), TypeTarget::Return(dr.clone()), TypeTarget::Return(cr.clone()), what)
                }
            };
            let to_model = opts.type_table.to_model(&ct);
            let to_code = opts.type_table.to_code(&dt);
            vec_of([
                alt(
                    Side::Model,
                    Edit::ChangeType { class: dc.name.clone(), target: dtarget, to: to_model.clone() },
                    format!("set {what} to `{}` in the design model", render_type(&to_model)),
                ),
                alt(
                    Side::Code,
                    Edit::ChangeType { class: cc.name.clone(), target: ctarget, to: to_code.clone() },
                    format!("set {what} to `{}` in the code", render_type(&to_code)),
                ),
            ])
        }
        RelationshipMissingInCode | RelationshipMissingInModel => Vec::new(),
    })
}

fn vec_of<const N: usize>(items: [Alternative; N]) -> Vec<Alternative> {
    items.into_iter().collect()
}

/// Name of the class paired with `name` on the opposite side.
fn matched_class(design: &ClassModel, code: &ClassModel, opts: &MatchOptions, name: &str, from: Side) -> Result<String, CorrectionError> {
    let m = match_models(design, code, opts);
    m.classes
        .iter()
        .find(|p| match from {
            Side::Model => p.design == name,
            Side::Code => p.code == name,
        })
        .map(|p| match from {
            Side::Model => p.code.clone(),
            Side::Code => p.design.clone(),
        })
        .ok_or_else(|| CorrectionError::UnknownTarget(name.to_owned()))
}

/// The code signature in design spelling. Parameters the code leaves untyped
/// take the type of the design parameter or attribute they correspond to.
fn adopt_code_params(dc: &ClassDef, cc: &ClassDef, cm: &Method, opts: &MatchOptions, conv: &Convert<'_>) -> Vec<Parameter> {
    let matched = match_models(
        &ClassModel { classes: alloc::vec![dc.clone()], ..ClassModel::new(crate::model::Origin::Synthetic) },
        &ClassModel { classes: alloc::vec![cc.clone()], ..ClassModel::new(crate::model::Origin::Synthetic) },
        opts,
    );
    let renamed: Vec<(String, String)> = matched
        .classes
        .first()
        .map(|p| {
            p.pairs
                .iter()
                .filter(|x| x.kind == PairKind::Rename)
                .filter_map(|x| match (&x.design, &x.code) {
                    (MemberRef::Attribute(a), MemberRef::Attribute(b)) => Some((a.clone(), b.clone())),
                    _ => None,
                })
                .collect()
        })
        .unwrap_or_default();
    let design_params: Vec<&Parameter> = find_method(dc, &member_ref(cm)).map(|m| m.params.iter().collect()).unwrap_or_default();
    cm.params
        .iter()
        .map(|p| {
            let mut ty = conv.table.to_model(&p.ty);
            if ty == TypeRef::Unknown {
                let key = opts.key(&p.name);
                let from_param = design_params.iter().find(|d| opts.key(&d.name) == key).map(|d| d.ty.clone());
                let from_attr = dc.attributes.iter().find(|a| opts.key(&a.name) == key).map(|a| a.ty.clone());
                let from_rename = renamed
                    .iter()
                    .find(|(_, b)| b == &p.name)
                    .and_then(|(a, _)| dc.attributes.iter().find(|x| &x.name == a))
                    .map(|a| a.ty.clone());
                ty = from_param.or(from_attr).or(from_rename).unwrap_or(TypeRef::Unknown);
            }
            Parameter { name: p.name.clone(), ty, span: None }
        })
        .collect()
}

/// Picks one alternative per set according to `policy`.
pub fn resolve(sets: &[CorrectionSet], policy: Policy) -> Vec<ChosenEdit> {
    let mut out = Vec::new();
    for set in sets {
        let side = match policy {
            Policy::ReportOnly => continue,
            Policy::ModelWins => Side::Code,
            Policy::CodeWins => Side::Model,
            Policy::Union { prefer } => lacking_side(set.kind).unwrap_or(prefer.other()),
        };
        if let Some(alt) = set.alternative(side) {
            out.push(ChosenEdit::from_alternative(set, alt));
        }
    }
    out
}

/// For missing-element findings, the side that lacks the element.
fn lacking_side(k: FindingKind) -> Option<Side> {
    use FindingKind::*;
    match k {
        MissingClassInCode | MissingMethodInCode | MissingAttributeInCode => Some(Side::Code),
        MissingClassInModel | MissingMethodInModel | MissingAttributeInModel => Some(Side::Model),
        _ => None,
    }
}

/// Applies the chosen edits: model edits on a copy of `design`, code edits
/// span-wise on the code text. Returns the new model and the new code text.
pub fn apply(design: &ClassModel, code: &CodeDocument, chosen: &[ChosenEdit]) -> Result<(ClassModel, String), CorrectionError> {
    for side in [Side::Model, Side::Code] {
        let mut seen = BTreeSet::new();
        for c in chosen.iter().filter(|c| c.side == side) {
            if !seen.insert(c.edit.slot()) {
                return Err(CorrectionError::EditConflict(c.edit.slot()));
            }
        }
    }
    let model_edits: Vec<&Edit> = chosen.iter().filter(|c| c.side == Side::Model).map(|c| &c.edit).collect();
    let code_edits: Vec<&Edit> = chosen.iter().filter(|c| c.side == Side::Code).map(|c| &c.edit).collect();
    let model = apply_to_model(design, &model_edits)?;
    let text = if code_edits.is_empty() { code.raw_text.clone() } else { code_side::apply(code, &code_edits)? };
    Ok((model, text))
}

enum Resolved {
    Class(usize),
    Method(usize, usize),
    Attribute(usize, usize),
    New,
}

fn apply_to_model(design: &ClassModel, edits: &[&Edit]) -> Result<ClassModel, CorrectionError> {
    let mut model = design.clone();
    let missing = |what: &str| CorrectionError::UnknownTarget(what.to_owned());
    // resolve every target against the untouched model so renames and
    // removals cannot change what later edits refer to
    let mut targets = Vec::with_capacity(edits.len());
    for e in edits {
        let ci = || model.classes.iter().position(|c| c.name == e.class()).ok_or_else(|| missing(e.class()));
        let resolve_member = |r: &MemberRef| -> Result<Resolved, CorrectionError> {
            let i = ci()?;
            let c = &model.classes[i];
            let idx = match r {
                MemberRef::Attribute(n) => c.attributes.iter().position(|a| &a.name == n).map(|j| Resolved::Attribute(i, j)),
                _ => {
                    let m = find_method(c, r);
                    m.and_then(|m| c.methods.iter().position(|x| core::ptr::eq(x, m))).map(|j| Resolved::Method(i, j))
                }
            };
            idx.ok_or_else(|| missing(&format!("{}.{r:?}", c.name)))
        };
        let t = match e {
            Edit::AddClass(c) => {
                if model.class(&c.name).is_some() {
                    return Err(CorrectionError::EditConflict(c.name.clone()));
                }
                Resolved::New
            }
            Edit::RemoveClass(_) => Resolved::Class(ci()?),
            Edit::AddMember { .. } => Resolved::Class(ci()?),
            Edit::RemoveMember { member, .. } | Edit::Rename { member, .. } | Edit::ChangeSignature { member, .. } => resolve_member(member)?,
            Edit::ChangeType { target, .. } => match target {
                TypeTarget::Attribute(n) => resolve_member(&MemberRef::Attribute(n.clone()))?,
                TypeTarget::Param { method, .. } | TypeTarget::Return(method) => resolve_member(method)?,
            },
        };
        targets.push(t);
    }
    let mut removed_classes = Vec::new();
    let mut removed_methods = Vec::new();
    let mut removed_attrs = Vec::new();
    let mut added = Vec::new();
    for (e, t) in edits.iter().zip(&targets) {
        match (e, t) {
            (Edit::AddClass(c), _) => added.push(c.clone()),
            (Edit::RemoveClass(_), Resolved::Class(i)) => removed_classes.push(*i),
            (Edit::AddMember { member, .. }, Resolved::Class(i)) => {
                let c = &mut model.classes[*i];
                match member {
                    Member::Attribute(a) => c.attributes.push(a.clone()),
                    Member::Method(m) if m.is_constructor => {
                        if let Some(j) = c.methods.iter().position(|x| x.is_constructor) {
                            c.methods[j] = m.clone();
                        } else {
                            c.methods.push(m.clone());
                        }
                    }
                    Member::Method(m) => c.methods.push(m.clone()),
                }
            }
            (Edit::RemoveMember { .. }, Resolved::Method(i, j)) => removed_methods.push((*i, *j)),
            (Edit::RemoveMember { .. }, Resolved::Attribute(i, j)) => removed_attrs.push((*i, *j)),
            (Edit::Rename { to, .. }, Resolved::Method(i, j)) => model.classes[*i].methods[*j].name = to.clone(),
            (Edit::Rename { to, .. }, Resolved::Attribute(i, j)) => model.classes[*i].attributes[*j].name = to.clone(),
            (Edit::ChangeSignature { params, .. }, Resolved::Method(i, j)) => {
                model.classes[*i].methods[*j].params = params.clone();
            }
            (Edit::ChangeType { to, .. }, Resolved::Attribute(i, j)) => {
                model.classes[*i].attributes[*j].ty = to.clone();
            }
            (Edit::ChangeType { target: TypeTarget::Param { index, .. }, to, .. }, Resolved::Method(i, j)) => {
                let m = &mut model.classes[*i].methods[*j];
                let p = m.params.get_mut(*index).ok_or_else(|| missing(&m.name))?;
                p.ty = to.clone();
            }
            (Edit::ChangeType { target: TypeTarget::Return(_), to, .. }, Resolved::Method(i, j)) => {
                model.classes[*i].methods[*j].return_type = to.clone();
            }
            (e, _) => return Err(missing(e.class())),
        }
    }
    removed_methods.sort_unstable();
    for (i, j) in removed_methods.into_iter().rev() {
        model.classes[i].methods.remove(j);
    }
    removed_attrs.sort_unstable();
    for (i, j) in removed_attrs.into_iter().rev() {
        model.classes[i].attributes.remove(j);
    }
    removed_classes.sort_unstable();
    removed_classes.dedup();
    for i in removed_classes.into_iter().rev() {
        let name = model.classes[i].name.clone();
        model.remove_class(&name);
    }
    model.classes.extend(added);
    Ok(model)
}

#[cfg(test)]
mod tests;
