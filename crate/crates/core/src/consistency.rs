//! Pairing of a design model with a code model and the resulting findings.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::hash::sha256_hex;
use crate::model::{normalize_name, type_equivalent, ClassDef, ClassModel, Method, NameMode, SourceSpan, TypeRef, TypeTable};

pub const REPORT_VERSION: u32 = 1;

/// A non-negative rational in `[0, 1]`, kept exact so threshold comparisons
/// never depend on floating point rounding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
    num: u64,
    den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Option<Self> {
        (den > 0 && num <= den).then(|| {
            let g = gcd(num, den);
            Self { num: num / g, den: den / g }
        })
    }

    pub fn num(self) -> u64 {
        self.num
    }

    pub fn den(self) -> u64 {
        self.den
    }

    /// Whether `a / b` is at most this ratio.
    pub fn admits(self, a: u64, b: u64) -> bool {
        a * self.den <= self.num * b
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("expected a ratio in [0, 1] such as `0.3` or `3/10`, got `{0}`")]
pub struct RatioParseError(pub String);

impl FromStr for Ratio {
    type Err = RatioParseError;

    /// Accepts `n/d` or a plain decimal such as `0.3`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || RatioParseError(s.to_owned());
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n = n.trim().parse().map_err(|_| err())?;
            let d = d.trim().parse().map_err(|_| err())?;
            return Ratio::new(n, d).ok_or_else(err);
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if int.is_empty() && frac.is_empty() || frac.len() > 9 {
            return Err(err());
        }
        let all_digits = |p: &str| p.bytes().all(|b| b.is_ascii_digit());
        if !all_digits(int) || !all_digits(frac) {
            return Err(err());
        }
        let den = 10u64.pow(frac.len() as u32);
        let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| err())? };
        let frac: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| err())? };
        Ratio::new(int * den + frac, den).ok_or_else(err)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchOptions {
    pub name_mode: NameMode,
    pub rename_threshold: Ratio,
    pub type_table: TypeTable,
    pub infer_code_relationships: bool,
}

impl Default for MatchOptions {
    fn default() -> Self {
        Self {
            name_mode: NameMode::Canonical,
            rename_threshold: Ratio { num: 3, den: 10 },
            type_table: TypeTable::builtin(),
            infer_code_relationships: true,
        }
    }
}

impl MatchOptions {
    pub fn key(&self, name: &str) -> String {
        normalize_name(name, self.name_mode)
    }
}

/// Levenshtein distance over chars.
pub fn levenshtein(a: &str, b: &str) -> usize {
    let b: Vec<char> = b.chars().collect();
    let mut row: Vec<usize> = (0..=b.len()).collect();
    for (i, ca) in a.chars().enumerate() {
        let mut prev = row[0];
        row[0] = i + 1;
        for (j, &cb) in b.iter().enumerate() {
            let cur = row[j + 1];
            row[j + 1] = if ca == cb { prev } else { 1 + prev.min(cur).min(row[j]) };
            prev = cur;
        }
    }
    row[b.len()]
}

/// Distance divided by the longer length, as a `(distance, length)` pair.
pub fn relative_distance(a: &str, b: &str) -> (u64, u64) {
    let len = a.chars().count().max(b.chars().count()) as u64;
    (levenshtein(a, b) as u64, len.max(1))
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MemberRef {
    Constructor,
    Method { name: String, arity: usize },
    Attribute(String),
}

impl MemberRef {
    fn of(m: &Method) -> Self {
        if m.is_constructor {
            MemberRef::Constructor
        } else {
            MemberRef::Method { name: m.name.clone(), arity: m.params.len() }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairKind {
    Name,
    Rename,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemberPair {
    pub design: MemberRef,
    pub code: MemberRef,
    pub kind: PairKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ClassPair {
    pub design: String,
    pub code: String,
    pub pairs: Vec<MemberPair>,
    pub design_only: Vec<MemberRef>,
    pub code_only: Vec<MemberRef>,
    /// Attributes without a counterpart that the other side expresses as a
    /// relationship instead.
    pub design_covered: Vec<String>,
    pub code_covered: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MatchResult {
    pub classes: Vec<ClassPair>,
    pub design_only: Vec<String>,
    pub code_only: Vec<String>,
}

fn find_method<'a>(class: &'a ClassDef, r: &MemberRef) -> Option<&'a Method> {
    match r {
        MemberRef::Constructor => class.constructor(),
        MemberRef::Method { name, arity } => {
            class.methods.iter().find(|m| !m.is_constructor && &m.name == name && m.params.len() == *arity)
        }
        MemberRef::Attribute(_) => None,
    }
}

/// Whether `attr` (name and type) is accounted for by a relationship of
/// `other` touching `class`.
fn covered_by_relationship(attr: &crate::model::Attribute, class: &str, other: &ClassModel, opts: &MatchOptions) -> bool {
    let key = opts.key(class);
    let attr_key = opts.key(&attr.name);
    let ty_key = attr.ty.base_name().map(|n| opts.key(n));
    other.relationships.iter().any(|r| {
        let peer = if opts.key(&r.left) == key {
            &r.right
        } else if opts.key(&r.right) == key {
            &r.left
        } else {
            return false;
        };
        let pk = opts.key(peer);
        names_class(&attr_key, &pk) || ty_key.as_deref() == Some(pk.as_str())
    })
}

/// `name` equals `class` or a plural of it.
fn names_class(name: &str, class: &str) -> bool {
    name == class || name.strip_prefix(class).is_some_and(|rest| rest == "s" || rest == "es")
}

pub fn match_models(design: &ClassModel, code: &ClassModel, opts: &MatchOptions) -> MatchResult {
    let mut result = MatchResult::default();
    let mut code_used = alloc::vec![false; code.classes.len()];
    for d in &design.classes {
        let key = opts.key(&d.name);
        match code.classes.iter().enumerate().position(|(i, c)| !code_used[i] && opts.key(&c.name) == key) {
            Some(i) => {
                code_used[i] = true;
                result.classes.push(match_class(d, &code.classes[i], design, code, opts));
            }
            None => result.design_only.push(d.name.clone()),
        }
    }
    for (i, c) in code.classes.iter().enumerate() {
        if !code_used[i] {
            result.code_only.push(c.name.clone());
        }
    }
    result
}

fn match_class(d: &ClassDef, c: &ClassDef, design: &ClassModel, code: &ClassModel, opts: &MatchOptions) -> ClassPair {
    let mut pair = ClassPair { design: d.name.clone(), code: c.name.clone(), ..Default::default() };

    // constructors; one declared without parameters stands for the default
    match (d.constructor(), c.constructor()) {
        (Some(_), Some(_)) => pair.pairs.push(MemberPair {
            design: MemberRef::Constructor,
            code: MemberRef::Constructor,
            kind: PairKind::Name,
        }),
        (Some(m), None) if !m.params.is_empty() => pair.design_only.push(MemberRef::Constructor),
        (None, Some(m)) if !m.params.is_empty() => pair.code_only.push(MemberRef::Constructor),
        _ => {}
    }

    let dm: Vec<&Method> = d.methods.iter().filter(|m| !m.is_constructor).collect();
    let cm: Vec<&Method> = c.methods.iter().filter(|m| !m.is_constructor).collect();
    let mut d_used = alloc::vec![false; dm.len()];
    let mut c_used = alloc::vec![false; cm.len()];
    for exact_arity in [true, false] {
        for (i, m) in dm.iter().enumerate() {
            if d_used[i] {
                continue;
            }
            let key = opts.key(&m.name);
            let hit = cm.iter().enumerate().position(|(j, n)| {
                !c_used[j] && opts.key(&n.name) == key && (!exact_arity || n.params.len() == m.params.len())
            });
            if let Some(j) = hit {
                d_used[i] = true;
                c_used[j] = true;
                pair.pairs.push(MemberPair { design: MemberRef::of(m), code: MemberRef::of(cm[j]), kind: PairKind::Name });
            }
        }
    }

    let mut da_used = alloc::vec![false; d.attributes.len()];
    let mut ca_used = alloc::vec![false; c.attributes.len()];
    for (i, a) in d.attributes.iter().enumerate() {
        let key = opts.key(&a.name);
        if let Some(j) = c.attributes.iter().enumerate().position(|(j, b)| !ca_used[j] && opts.key(&b.name) == key) {
            da_used[i] = true;
            ca_used[j] = true;
            pair.pairs.push(MemberPair {
                design: MemberRef::Attribute(a.name.clone()),
                code: MemberRef::Attribute(c.attributes[j].name.clone()),
                kind: PairKind::Name,
            });
        }
    }
    for (i, a) in d.attributes.iter().enumerate() {
        if !da_used[i] && covered_by_relationship(a, &d.name, code, opts) {
            da_used[i] = true;
            pair.design_covered.push(a.name.clone());
        }
    }
    for (j, a) in c.attributes.iter().enumerate() {
        if !ca_used[j] && covered_by_relationship(a, &c.name, design, opts) {
            ca_used[j] = true;
            pair.code_covered.push(a.name.clone());
        }
    }

    // rename candidates among the leftovers
    let mut candidates: Vec<((u64, u64), MemberRef, MemberRef)> = Vec::new();
    for (_, m) in dm.iter().enumerate().filter(|(i, _)| !d_used[*i]) {
        for (_, n) in cm.iter().enumerate().filter(|(j, _)| !c_used[*j]) {
            if m.params.len() != n.params.len() {
                continue;
            }
            let dist = relative_distance(&opts.key(&m.name), &opts.key(&n.name));
            if opts.rename_threshold.admits(dist.0, dist.1) {
                candidates.push((dist, MemberRef::of(m), MemberRef::of(n)));
            }
        }
    }
    for (_, a) in d.attributes.iter().enumerate().filter(|(i, _)| !da_used[*i]) {
        for (_, b) in c.attributes.iter().enumerate().filter(|(j, _)| !ca_used[*j]) {
            let dist = relative_distance(&opts.key(&a.name), &opts.key(&b.name));
            if opts.rename_threshold.admits(dist.0, dist.1) {
                candidates.push((dist, MemberRef::Attribute(a.name.clone()), MemberRef::Attribute(b.name.clone())));
            }
        }
    }
    candidates.sort_by(|a, b| {
        let (x, y) = (a.0, b.0);
        (x.0 * y.1).cmp(&(y.0 * x.1)).then_with(|| a.1.cmp(&b.1)).then_with(|| a.2.cmp(&b.2))
    });
    let mut taken_d: BTreeSet<MemberRef> = BTreeSet::new();
    let mut taken_c: BTreeSet<MemberRef> = BTreeSet::new();
    for (_, dr, cr) in candidates {
        if taken_d.contains(&dr) || taken_c.contains(&cr) {
            continue;
        }
        taken_d.insert(dr.clone());
        taken_c.insert(cr.clone());
        pair.pairs.push(MemberPair { design: dr, code: cr, kind: PairKind::Rename });
    }

    for (i, m) in dm.iter().enumerate() {
        let r = MemberRef::of(m);
        if !d_used[i] && !taken_d.contains(&r) {
            pair.design_only.push(r);
        }
    }
    for (i, a) in d.attributes.iter().enumerate() {
        let r = MemberRef::Attribute(a.name.clone());
        if !da_used[i] && !taken_d.contains(&r) {
            pair.design_only.push(r);
        }
    }
    for (j, m) in cm.iter().enumerate() {
        let r = MemberRef::of(m);
        if !c_used[j] && !taken_c.contains(&r) {
            pair.code_only.push(r);
        }
    }
    for (j, a) in c.attributes.iter().enumerate() {
        let r = MemberRef::Attribute(a.name.clone());
        if !ca_used[j] && !taken_c.contains(&r) {
            pair.code_only.push(r);
        }
    }
    pair
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FindingKind {
    MissingClassInCode,
    MissingClassInModel,
    MissingMethodInCode,
    MissingMethodInModel,
    MissingAttributeInCode,
    MissingAttributeInModel,
    ProbableRename,
    ConstructorArityMismatch,
    ParamTypeMismatch,
    ReturnTypeMismatch,
    AttributeTypeMismatch,
    RelationshipMissingInCode,
    RelationshipMissingInModel,
}

impl FindingKind {
    pub const ALL: [FindingKind; 13] = [
        FindingKind::MissingClassInCode,
        FindingKind::MissingClassInModel,
        FindingKind::MissingMethodInCode,
        FindingKind::MissingMethodInModel,
        FindingKind::MissingAttributeInCode,
        FindingKind::MissingAttributeInModel,
        FindingKind::ProbableRename,
        FindingKind::ConstructorArityMismatch,
        FindingKind::ParamTypeMismatch,
        FindingKind::ReturnTypeMismatch,
        FindingKind::AttributeTypeMismatch,
        FindingKind::RelationshipMissingInCode,
        FindingKind::RelationshipMissingInModel,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FindingKind::MissingClassInCode => "MissingClassInCode",
            FindingKind::MissingClassInModel => "MissingClassInModel",
            FindingKind::MissingMethodInCode => "MissingMethodInCode",
            FindingKind::MissingMethodInModel => "MissingMethodInModel",
            FindingKind::MissingAttributeInCode => "MissingAttributeInCode",
            FindingKind::MissingAttributeInModel => "MissingAttributeInModel",
            FindingKind::ProbableRename => "ProbableRename",
            FindingKind::ConstructorArityMismatch => "ConstructorArityMismatch",
            FindingKind::ParamTypeMismatch => "ParamTypeMismatch",
            FindingKind::ReturnTypeMismatch => "ReturnTypeMismatch",
            FindingKind::AttributeTypeMismatch => "AttributeTypeMismatch",
            FindingKind::RelationshipMissingInCode => "RelationshipMissingInCode",
            FindingKind::RelationshipMissingInModel => "RelationshipMissingInModel",
        }
    }

    pub fn severity(self) -> Severity {
        match self {
            FindingKind::RelationshipMissingInCode | FindingKind::RelationshipMissingInModel => Severity::Advisory,
            _ => Severity::Error,
        }
    }

    /// The kind reported when the two sides are swapped.
    pub fn mirrored(self) -> Self {
        use FindingKind::*;
        match self {
            MissingClassInCode => MissingClassInModel,
            MissingClassInModel => MissingClassInCode,
            MissingMethodInCode => MissingMethodInModel,
            MissingMethodInModel => MissingMethodInCode,
            MissingAttributeInCode => MissingAttributeInModel,
            MissingAttributeInModel => MissingAttributeInCode,
            RelationshipMissingInCode => RelationshipMissingInModel,
            RelationshipMissingInModel => RelationshipMissingInCode,
            other => other,
        }
    }
}

impl fmt::Display for FindingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Error,
    Advisory,
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Error => "error",
            Severity::Advisory => "advisory",
        }
    }
}

/// What a location points at. Variants are ordered the way findings are
/// listed within a class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    Class,
    Constructor,
    Attribute,
    Method,
    Relationship,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Location {
    pub class: String,
    pub element: Element,
    /// Member name; for relationships the class at the other end.
    pub member: Option<String>,
    pub arity: Option<usize>,
    /// Parameter position for parameter type findings.
    pub param: Option<usize>,
    pub span: Option<SourceSpan>,
}

impl Location {
    fn class(c: &ClassDef) -> Self {
        Self { class: c.name.clone(), element: Element::Class, member: None, arity: None, param: None, span: c.span.clone() }
    }

    fn member(c: &ClassDef, r: &MemberRef) -> Self {
        let mut loc = Self::class(c);
        match r {
            MemberRef::Constructor => {
                let m = c.constructor();
                loc.element = Element::Constructor;
                loc.member = Some(c.name.clone());
                loc.arity = m.map(|m| m.params.len());
                loc.span = m.and_then(|m| m.span.clone());
            }
            MemberRef::Method { name, arity } => {
                loc.element = Element::Method;
                loc.member = Some(name.clone());
                loc.arity = Some(*arity);
                loc.span = find_method(c, r).and_then(|m| m.span.clone());
            }
            MemberRef::Attribute(name) => {
                loc.element = Element::Attribute;
                loc.member = Some(name.clone());
                loc.span = c.attributes.iter().find(|a| &a.name == name).and_then(|a| a.span.clone());
            }
        }
        loc
    }

    fn with_param(mut self, index: usize, span: Option<SourceSpan>) -> Self {
        self.param = Some(index);
        if span.is_some() {
            self.span = span;
        }
        self
    }

    /// Stable textual key, independent of spans.
    pub fn key(&self) -> String {
        let mut s = self.class.clone();
        if let Some(m) = &self.member {
            s.push('.');
            s.push_str(m);
        }
        if let Some(a) = self.arity {
            s.push_str(&format!("/{a}"));
        }
        if let Some(p) = self.param {
            s.push_str(&format!("#{p}"));
        }
        s
    }
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.class)?;
        match (self.element, &self.member) {
            (Element::Relationship, Some(m)) => write!(f, " -- {m}")?,
            (Element::Method | Element::Constructor, Some(m)) => write!(f, ".{m}()")?,
            (_, Some(m)) => write!(f, ".{m}")?,
            _ => {}
        }
        if let Some(span) = &self.span {
            write!(f, " at {span}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Finding {
    pub id: String,
    pub kind: FindingKind,
    pub severity: Severity,
    pub model_location: Option<Location>,
    pub code_location: Option<Location>,
    pub detail: String,
}

impl Finding {
    fn new(kind: FindingKind, model: Option<Location>, code: Option<Location>, detail: String) -> Self {
        let key = |l: &Option<Location>| l.as_ref().map(Location::key).unwrap_or_default();
        let seed = format!("{}|{}|{}", kind.as_str(), key(&model), key(&code));
        let mut id = sha256_hex(seed.as_bytes());
        id.truncate(16);
        Self { id, kind, severity: kind.severity(), model_location: model, code_location: code, detail }
    }

    fn sort_key(&self, opts: &MatchOptions) -> (String, Element, String, usize, usize, FindingKind, String) {
        let loc = self.model_location.as_ref().or(self.code_location.as_ref()).expect("finding has a location");
        (
            opts.key(&loc.class),
            loc.element,
            loc.member.as_deref().map(|m| opts.key(m)).unwrap_or_default(),
            loc.arity.unwrap_or(0),
            loc.param.unwrap_or(0),
            self.kind,
            self.id.clone(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub version: u32,
    pub options: MatchOptions,
    /// Digests of the two models the report was computed from.
    pub model_fingerprint: String,
    pub code_fingerprint: String,
    pub findings: Vec<Finding>,
}

impl Report {
    pub fn errors(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.severity == Severity::Error)
    }

    pub fn has_errors(&self) -> bool {
        self.errors().next().is_some()
    }
}

/// Digest identifying a model's full content, spans included.
pub fn fingerprint(model: &ClassModel) -> String {
    sha256_hex(format!("{model:?}").as_bytes())
}

fn describe_type(ty: &TypeRef) -> String {
    crate::plantuml::render_type(ty)
}

fn plural(n: usize, word: &str) -> String {
    if n == 1 {
        format!("1 {word}")
    } else {
        format!("{n} {word}s")
    }
}

fn member_phrase(r: &MemberRef, class: &str) -> String {
    match r {
        MemberRef::Constructor => format!("constructor of `{class}`"),
        MemberRef::Method { name, .. } => format!("method `{class}.{name}()`"),
        MemberRef::Attribute(name) => format!("attribute `{class}.{name}`"),
    }
}

pub fn check(design: &ClassModel, code: &ClassModel, opts: &MatchOptions) -> Report {
    let matched = match_models(design, code, opts);
    let mut findings = Vec::new();
    for name in &matched.design_only {
        let c = design.class(name).expect("matched class exists");
        findings.push(Finding::new(
            FindingKind::MissingClassInCode,
            Some(Location::class(c)),
            None,
            format!("class `{name}` is in the design model but not in the code"),
        ));
    }
    for name in &matched.code_only {
        let c = code.class(name).expect("matched class exists");
        findings.push(Finding::new(
            FindingKind::MissingClassInModel,
            None,
            Some(Location::class(c)),
            format!("class `{name}` is in the code but not in the design model"),
        ));
    }
    for pair in &matched.classes {
        let d = design.class(&pair.design).expect("paired class exists");
        let c = code.class(&pair.code).expect("paired class exists");
        class_findings(pair, d, c, opts, &mut findings);
    }
    if opts.infer_code_relationships {
        relationship_findings(design, code, &matched, opts, &mut findings);
    }
    findings.sort_by_cached_key(|f| f.sort_key(opts));
    findings.dedup_by(|a, b| a.id == b.id);
    Report {
        version: REPORT_VERSION,
        options: opts.clone(),
        model_fingerprint: fingerprint(design),
        code_fingerprint: fingerprint(code),
        findings,
    }
}

fn class_findings(pair: &ClassPair, d: &ClassDef, c: &ClassDef, opts: &MatchOptions, out: &mut Vec<Finding>) {
    for r in &pair.design_only {
        let kind = match r {
            MemberRef::Attribute(_) => FindingKind::MissingAttributeInCode,
            _ => FindingKind::MissingMethodInCode,
        };
        let detail = format!("{} is in the design model but not in the code", member_phrase(r, &d.name));
        out.push(Finding::new(kind, Some(Location::member(d, r)), None, detail));
    }
    for r in &pair.code_only {
        let kind = match r {
            MemberRef::Attribute(_) => FindingKind::MissingAttributeInModel,
            _ => FindingKind::MissingMethodInModel,
        };
        let detail = format!("{} is in the code but not in the design model", member_phrase(r, &c.name));
        out.push(Finding::new(kind, None, Some(Location::member(c, r)), detail));
    }
    for p in &pair.pairs {
        let dl = Location::member(d, &p.design);
        let cl = Location::member(c, &p.code);
        if p.kind == PairKind::Rename {
            let (dn, cn) = (dl.member.clone().unwrap_or_default(), cl.member.clone().unwrap_or_default());
            let what = if matches!(p.design, MemberRef::Attribute(_)) { "attribute" } else { "method" };
            let detail = format!("{what} `{}.{dn}` in the design model is probably `{cn}` in the code", d.name);
            out.push(Finding::new(FindingKind::ProbableRename, Some(dl.clone()), Some(cl.clone()), detail));
        }
        match (&p.design, &p.code) {
            (MemberRef::Attribute(an), MemberRef::Attribute(bn)) => {
                let a = d.attributes.iter().find(|x| &x.name == an).expect("attribute exists");
                let b = c.attributes.iter().find(|x| &x.name == bn).expect("attribute exists");
                if !type_equivalent(&a.ty, &b.ty, &opts.type_table) {
                    let detail = format!(
                        "attribute `{}.{an}` is `{}` in the design model but `{}` in the code",
                        d.name,
                        describe_type(&a.ty),
                        describe_type(&b.ty)
                    );
                    out.push(Finding::new(FindingKind::AttributeTypeMismatch, Some(dl), Some(cl), detail));
                }
            }
            (dr, cr) => {
                let m = find_method(d, dr).expect("method exists");
                let n = find_method(c, cr).expect("method exists");
                method_findings(&d.name, m, n, dl, cl, opts, out);
            }
        }
    }
}

fn method_findings(
    class: &str,
    m: &Method,
    n: &Method,
    dl: Location,
    cl: Location,
    opts: &MatchOptions,
    out: &mut Vec<Finding>,
) {
    let what = if m.is_constructor { format!("constructor of `{class}`") } else { format!("method `{class}.{}()`", m.name) };
    if m.params.len() != n.params.len() {
        let detail = format!(
            "{what} takes {} in the design model but {} in the code",
            plural(m.params.len(), "parameter"),
            plural(n.params.len(), "parameter")
        );
        out.push(Finding::new(FindingKind::ConstructorArityMismatch, Some(dl), Some(cl), detail));
        return;
    }
    for (i, (p, q)) in m.params.iter().zip(&n.params).enumerate() {
        if !type_equivalent(&p.ty, &q.ty, &opts.type_table) {
            let detail = format!(
                "parameter `{}` of {what} is `{}` in the design model but `{}` in the code",
                p.name,
                describe_type(&p.ty),
                describe_type(&q.ty)
            );
            out.push(Finding::new(
                FindingKind::ParamTypeMismatch,
                Some(dl.clone().with_param(i, p.span.clone())),
                Some(cl.clone().with_param(i, q.span.clone())),
                detail,
            ));
        }
    }
    if !m.is_constructor && !type_equivalent(&m.return_type, &n.return_type, &opts.type_table) {
        let detail = format!(
            "{what} returns `{}` in the design model but `{}` in the code",
            describe_type(&m.return_type),
            describe_type(&n.return_type)
        );
        out.push(Finding::new(FindingKind::ReturnTypeMismatch, Some(dl), Some(cl), detail));
    }
}

/// Unordered class links of one side, keyed by normalized names: declared
/// relationships plus links implied by attributes and constructor
/// parameters that name or type another class.
fn links(model: &ClassModel, opts: &MatchOptions) -> BTreeSet<(String, String)> {
    let ordered = |a: String, b: String| if a <= b { (a, b) } else { (b, a) };
    let mut out = BTreeSet::new();
    for r in &model.relationships {
        out.insert(ordered(opts.key(&r.left), opts.key(&r.right)));
    }
    let classes: Vec<String> = model.classes.iter().map(|c| opts.key(&c.name)).collect();
    for c in &model.classes {
        let me = opts.key(&c.name);
        let mut refs: Vec<(String, Option<String>)> =
            c.attributes.iter().map(|a| (opts.key(&a.name), a.ty.base_name().map(|n| opts.key(n)))).collect();
        if let Some(ctor) = c.constructor() {
            refs.extend(ctor.params.iter().map(|p| (opts.key(&p.name), p.ty.base_name().map(|n| opts.key(n)))));
        }
        for (name, ty) in refs {
            for other in classes.iter().filter(|o| **o != me) {
                if names_class(&name, other) || ty.as_deref() == Some(other.as_str()) {
                    out.insert(ordered(me.clone(), other.clone()));
                }
            }
        }
    }
    out
}

fn relationship_findings(
    design: &ClassModel,
    code: &ClassModel,
    matched: &MatchResult,
    opts: &MatchOptions,
    out: &mut Vec<Finding>,
) {
    let paired: BTreeSet<String> = matched.classes.iter().map(|p| opts.key(&p.design)).collect();
    let dl = links(design, opts);
    let cl = links(code, opts);
    let find = |model: &ClassModel, key: &str| model.classes.iter().find(|c| opts.key(&c.name) == key).cloned();
    let mut emit = |link: &(String, String), kind: FindingKind, side: &ClassModel| {
        let (Some(a), Some(b)) = (find(side, &link.0), find(side, &link.1)) else { return };
        let loc = Location {
            class: a.name.clone(),
            element: Element::Relationship,
            member: Some(b.name.clone()),
            arity: None,
            param: None,
            span: None,
        };
        let (model_loc, code_loc, detail) = if kind == FindingKind::RelationshipMissingInCode {
            (Some(loc), None, format!("relationship `{}` -- `{}` has no counterpart in the code", a.name, b.name))
        } else {
            (None, Some(loc), format!("the code links `{}` and `{}` but the design model does not", a.name, b.name))
        };
        out.push(Finding::new(kind, model_loc, code_loc, detail));
    };
    for link in &dl {
        if paired.contains(&link.0) && paired.contains(&link.1) && !cl.contains(link) {
            emit(link, FindingKind::RelationshipMissingInCode, design);
        }
    }
    for link in &cl {
        if paired.contains(&link.0) && paired.contains(&link.1) && !dl.contains(link) {
            emit(link, FindingKind::RelationshipMissingInModel, code);
        }
    }
}

#[cfg(test)]
mod tests;
