//! Seeded random class models and single-mutation operators.

use modelsync_core::{Attribute, ClassDef, ClassModel, FindingKind, Method, Origin, Parameter, Relationship, TypeRef, Visibility};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const WORDS: &[&str] = &[
    "title", "author", "borrow", "lend", "count", "shelf", "status", "member", "phone", "card", "record", "date", "limit", "notice",
    "return", "select", "check", "open", "close", "register",
];
const DESIGN_TYPES: &[&str] = &["String", "int", "boolean", "float", "Date"];
const CLASS_STEMS: &[&str] = &["Library", "Reader", "Item", "Loan", "Desk", "Staff", "Catalog", "Notice"];

pub struct Gen {
    rng: ChaCha8Rng,
    n: usize,
}

impl Gen {
    pub fn new(rng: ChaCha8Rng) -> Self {
        Self { rng, n: 0 }
    }

    /// Unique identifier built from a dictionary word and a counter; camel
    /// or snake joined so both spellings show up.
    fn ident(&mut self) -> String {
        self.n += 1;
        let a = WORDS.choose(&mut self.rng).unwrap();
        let b = WORDS.choose(&mut self.rng).unwrap();
        match self.rng.gen_range(0..3) {
            0 => format!("{a}{}", self.n),
            1 => format!("{a}{}{}{}", b[..1].to_uppercase(), &b[1..], self.n),
            _ => format!("{a}_{b}{}", self.n),
        }
    }

    fn named_type(&mut self, classes: &[String]) -> TypeRef {
        if !classes.is_empty() && self.rng.gen_bool(0.2) {
            TypeRef::Named(classes.choose(&mut self.rng).unwrap().clone())
        } else {
            TypeRef::named(DESIGN_TYPES.choose(&mut self.rng).unwrap())
        }
    }

    fn any_type(&mut self, classes: &[String]) -> TypeRef {
        match self.rng.gen_range(0..10) {
            0 | 1 => TypeRef::Unknown,
            2 => TypeRef::collection(self.named_type(classes)),
            3 => TypeRef::collection(TypeRef::Unknown),
            _ => self.named_type(classes),
        }
    }

    fn visibility(&mut self) -> Visibility {
        *[Visibility::Public, Visibility::Private, Visibility::Protected, Visibility::Unknown].choose(&mut self.rng).unwrap()
    }

    fn params(&mut self, classes: &[String], max: usize) -> Vec<Parameter> {
        let k = self.rng.gen_range(0..=max);
        (0..k)
            .map(|_| {
                let name = self.ident();
                let ty = self.any_type(classes);
                Parameter::new(&name, ty)
            })
            .collect()
    }

    pub fn model(&mut self, max_classes: usize, with_relationships: bool) -> ClassModel {
        let count = self.rng.gen_range(1..=max_classes);
        let mut stems: Vec<&str> = CLASS_STEMS.to_vec();
        stems.shuffle(&mut self.rng);
        let names: Vec<String> = (0..count).map(|i| format!("{}{}", stems[i % stems.len()], i)).collect();
        let mut m = ClassModel::new(Origin::Synthetic);
        for name in &names {
            let mut c = ClassDef::new(name);
            for _ in 0..self.rng.gen_range(0..4) {
                let attr_name = self.ident();
                let ty = self.any_type(&names);
                let mut a = Attribute::new(&attr_name, ty);
                a.visibility = self.visibility();
                c.attributes.push(a);
            }
            if self.rng.gen_bool(0.7) {
                let params = self.params(&names, 3);
                let mut ctor = Method::constructor(name, params);
                ctor.visibility = Visibility::Public;
                c.methods.push(ctor);
            }
            for _ in 0..self.rng.gen_range(0..4) {
                let method_name = self.ident();
                let params = self.params(&names, 2);
                let ret = if self.rng.gen_bool(0.3) { TypeRef::Void } else { self.any_type(&names) };
                let mut meth = Method::new(&method_name, params, ret);
                meth.visibility = self.visibility();
                c.methods.push(meth);
            }
            m.classes.push(c);
        }
        if with_relationships && count > 1 {
            for _ in 0..self.rng.gen_range(0..3) {
                let l = names.choose(&mut self.rng).unwrap();
                let r = names.choose(&mut self.rng).unwrap();
                let mut rel = Relationship::new(l, r);
                if self.rng.gen_bool(0.5) {
                    rel.left_mult = Some("1".into());
                    rel.right_mult = Some(["1", "many", "0..*"].choose(&mut self.rng).unwrap().to_string());
                }
                if self.rng.gen_bool(0.5) {
                    rel.label = Some("has".into());
                    rel.directed = self.rng.gen_bool(0.5);
                }
                m.relationships.push(rel);
            }
        }
        m
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> Option<&'a T> {
        items.choose(&mut self.rng)
    }

    pub fn fresh(&mut self) -> String {
        self.ident()
    }

    pub fn coin(&mut self) -> bool {
        self.rng.gen_bool(0.5)
    }
}

/// Strips what the code dialect cannot express: visibility, relationships
/// and `void` returns.
pub fn code_view(m: &ClassModel) -> ClassModel {
    let mut out = m.clone();
    out.relationships.clear();
    for c in &mut out.classes {
        for a in &mut c.attributes {
            a.visibility = Visibility::Unknown;
        }
        for meth in &mut c.methods {
            meth.visibility = Visibility::Unknown;
            if !meth.is_constructor && meth.return_type == TypeRef::Void {
                meth.return_type = TypeRef::Unknown;
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Op {
    RenameMethod,
    RenameAttribute,
    ChangeAttributeType,
    ChangeParamType,
    ChangeReturnType,
    AddClass,
    RemoveClass,
    AddMethod,
    AddAttribute,
    RemoveMethod,
    RemoveAttribute,
    ChangeConstructorArity,
}

pub const OPS: &[Op] = &[
    Op::RenameMethod,
    Op::RenameAttribute,
    Op::ChangeAttributeType,
    Op::ChangeParamType,
    Op::ChangeReturnType,
    Op::AddClass,
    Op::RemoveClass,
    Op::AddMethod,
    Op::AddAttribute,
    Op::RemoveMethod,
    Op::RemoveAttribute,
    Op::ChangeConstructorArity,
];

/// Which artifact the mutation is applied to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Model,
    Code,
}

pub fn expected_kind(op: Op, target: Target) -> FindingKind {
    use FindingKind::*;
    let on_model = target == Target::Model;
    match op {
        Op::RenameMethod | Op::RenameAttribute => ProbableRename,
        Op::ChangeAttributeType => AttributeTypeMismatch,
        Op::ChangeParamType => ParamTypeMismatch,
        Op::ChangeReturnType => ReturnTypeMismatch,
        Op::ChangeConstructorArity => ConstructorArityMismatch,
        // something now exists only on the mutated side
        Op::AddClass => if on_model { MissingClassInCode } else { MissingClassInModel },
        Op::AddMethod => if on_model { MissingMethodInCode } else { MissingMethodInModel },
        Op::AddAttribute => if on_model { MissingAttributeInCode } else { MissingAttributeInModel },
        // something now exists only on the other side
        Op::RemoveClass => if on_model { MissingClassInModel } else { MissingClassInCode },
        Op::RemoveMethod => if on_model { MissingMethodInModel } else { MissingMethodInCode },
        Op::RemoveAttribute => if on_model { MissingAttributeInModel } else { MissingAttributeInCode },
    }
}

fn class_names(m: &ClassModel) -> Vec<String> {
    m.classes.iter().map(|c| c.name.to_lowercase()).collect()
}

/// Attributes that name no class by name or type. Anything else may be
/// accounted for by an association instead of a member, which makes a
/// removal or rename a legitimate modeling choice rather than an
/// inconsistency.
fn plain_attributes(m: &ClassModel) -> Vec<(usize, usize)> {
    let classes = class_names(m);
    let mut out = Vec::new();
    for (i, c) in m.classes.iter().enumerate() {
        for (j, a) in c.attributes.iter().enumerate() {
            let ty = a.ty.base_name().map(str::to_lowercase);
            let name = a.name.to_lowercase().replace('_', "");
            if !classes.iter().any(|k| ty.as_deref() == Some(k.as_str()) || name.starts_with(k.as_str())) {
                out.push((i, j));
            }
        }
    }
    out
}

fn methods(m: &ClassModel, f: impl Fn(&Method) -> bool) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, c) in m.classes.iter().enumerate() {
        for (j, meth) in c.methods.iter().enumerate() {
            if f(meth) {
                out.push((i, j));
            }
        }
    }
    out
}

/// A one-letter substitution inside the name, far below the rename threshold
/// for the generated name lengths.
fn nudge(name: &str) -> String {
    let mut chars: Vec<char> = name.chars().collect();
    let pos = chars.iter().position(char::is_ascii_lowercase).map_or(0, |p| (p + 1).min(chars.len() - 1));
    chars[pos] = if chars[pos].eq_ignore_ascii_case(&'q') { 'x' } else { 'q' };
    chars.into_iter().collect()
}

/// A named type that no built-in equivalence maps onto `ty`.
fn other_type(ty: &TypeRef) -> TypeRef {
    let base = ty.base_name().unwrap_or("");
    let replacement = if matches!(base, "int" | "Date" | "float") { "String" } else { "int" };
    match ty {
        TypeRef::Collection(_) => TypeRef::collection(TypeRef::named(replacement)),
        _ => TypeRef::named(replacement),
    }
}

fn known_named(ty: &TypeRef) -> bool {
    matches!(ty, TypeRef::Named(_)) || matches!(ty, TypeRef::Collection(e) if matches!(**e, TypeRef::Named(_)))
}

/// Applies `op` to `m` in place; `None` when `m` has no suitable target.
pub fn mutate(g: &mut Gen, m: &mut ClassModel, op: Op) -> Option<String> {
    match op {
        Op::RenameMethod => {
            let targets = methods(m, |x| !x.is_constructor && x.name.len() >= 5);
            let &(i, j) = g.pick(&targets)?;
            let meth = &mut m.classes[i].methods[j];
            let old = meth.name.clone();
            meth.name = nudge(&old);
            Some(format!("rename {}.{old} -> {}", m.classes[i].name, m.classes[i].methods[j].name))
        }
        Op::RenameAttribute => {
            let targets: Vec<_> = plain_attributes(m).into_iter().filter(|&(i, j)| m.classes[i].attributes[j].name.len() >= 5).collect();
            let &(i, j) = g.pick(&targets)?;
            let a = &mut m.classes[i].attributes[j];
            let old = a.name.clone();
            a.name = nudge(&old);
            Some(format!("rename attribute {old} -> {}", a.name))
        }
        Op::ChangeAttributeType => {
            let targets: Vec<_> = plain_attributes(m).into_iter().filter(|&(i, j)| known_named(&m.classes[i].attributes[j].ty)).collect();
            let &(i, j) = g.pick(&targets)?;
            let a = &mut m.classes[i].attributes[j];
            a.ty = other_type(&a.ty);
            Some(format!("retype attribute {}", a.name))
        }
        Op::ChangeParamType => {
            let targets = methods(m, |x| x.params.iter().any(|p| known_named(&p.ty)));
            let &(i, j) = g.pick(&targets)?;
            let meth = &mut m.classes[i].methods[j];
            let p = meth.params.iter_mut().find(|p| known_named(&p.ty)).unwrap();
            p.ty = other_type(&p.ty);
            Some(format!("retype param {} of {}", p.name, meth.name))
        }
        Op::ChangeReturnType => {
            let targets = methods(m, |x| !x.is_constructor && known_named(&x.return_type));
            let &(i, j) = g.pick(&targets)?;
            let meth = &mut m.classes[i].methods[j];
            meth.return_type = other_type(&meth.return_type);
            Some(format!("retype return of {}", meth.name))
        }
        Op::AddClass => {
            let name = format!("Extra{}", g.fresh().len() + m.classes.len() * 100);
            let mut c = ClassDef::new(&name);
            let attr = g.fresh();
            c.attributes.push(Attribute::new(&attr, TypeRef::named("int")));
            let meth = g.fresh();
            c.methods.push(Method::new(&meth, vec![], TypeRef::named("String")));
            m.classes.push(c);
            Some(format!("add class {name}"))
        }
        Op::RemoveClass => {
            if m.classes.len() < 2 {
                return None;
            }
            let i = *g.pick(&(0..m.classes.len()).collect::<Vec<_>>())?;
            let name = m.classes[i].name.clone();
            m.remove_class(&name);
            Some(format!("remove class {name}"))
        }
        Op::AddMethod => {
            let i = *g.pick(&(0..m.classes.len()).collect::<Vec<_>>())?;
            let name = g.fresh();
            let p = g.fresh();
            m.classes[i].methods.push(Method::new(&name, vec![Parameter::new(&p, TypeRef::named("int"))], TypeRef::named("boolean")));
            Some(format!("add method {name}"))
        }
        Op::AddAttribute => {
            let i = *g.pick(&(0..m.classes.len()).collect::<Vec<_>>())?;
            let name = g.fresh();
            m.classes[i].attributes.push(Attribute::new(&name, TypeRef::named("float")));
            Some(format!("add attribute {name}"))
        }
        Op::RemoveMethod => {
            let targets = methods(m, |x| !x.is_constructor);
            let &(i, j) = g.pick(&targets)?;
            let gone = m.classes[i].methods.remove(j);
            Some(format!("remove method {}", gone.name))
        }
        Op::RemoveAttribute => {
            let &(i, j) = g.pick(&plain_attributes(m))?;
            let gone = m.classes[i].attributes.remove(j);
            Some(format!("remove attribute {}", gone.name))
        }
        Op::ChangeConstructorArity => {
            let targets = methods(m, |x| x.is_constructor && !x.params.is_empty());
            let &(i, j) = g.pick(&targets)?;
            let ctor = &mut m.classes[i].methods[j];
            if ctor.params.len() >= 2 && g.coin() {
                ctor.params.pop();
            } else {
                let p = g.fresh();
                ctor.params.push(Parameter::new(&p, TypeRef::named("int")));
            }
            Some(format!("constructor arity of {}", m.classes[i].name))
        }
    }
}
