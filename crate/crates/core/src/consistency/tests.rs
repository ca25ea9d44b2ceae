use alloc::string::ToString;
use alloc::vec::Vec;

use super::*;
use crate::code::parse_code;
use crate::plantuml::parse_plantuml;

fn pair(model: &str, code: &str) -> (ClassModel, ClassModel) {
    (parse_plantuml(model).unwrap().model, parse_code(code).unwrap().model)
}

fn mutated() -> (ClassModel, ClassModel) {
    pair(
        include_str!("../../../../fixtures/mutated_model.puml"),
        include_str!("../../../../fixtures/mutated_code.py"),
    )
}

fn baseline() -> (ClassModel, ClassModel) {
    pair(
        include_str!("../../../../fixtures/baseline_model.puml"),
        include_str!("../../../../fixtures/baseline_code.py"),
    )
}

fn appendix() -> (ClassModel, ClassModel) {
    pair(
        include_str!("../../../../fixtures/appendix_a_model.puml"),
        include_str!("../../../../fixtures/appendix_a_code.py"),
    )
}

fn kinds(r: &Report) -> Vec<(FindingKind, String)> {
    r.errors()
        .map(|f| (f.kind, f.model_location.as_ref().or(f.code_location.as_ref()).unwrap().key()))
        .collect()
}

#[test]
fn distance_arithmetic() {
    assert_eq!(levenshtein("getnamae", "getname"), 1);
    assert_eq!(relative_distance("getnamae", "getname"), (1, 8));
    assert_eq!(levenshtein("", "abc"), 3);
    assert_eq!(levenshtein("kitten", "sitting"), 3);
}

#[test]
fn ratio_parsing() {
    let r: Ratio = "0.3".parse().unwrap();
    assert_eq!((r.num(), r.den()), (3, 10));
    assert_eq!("6/20".parse::<Ratio>().unwrap(), r);
    assert_eq!("1".parse::<Ratio>().unwrap().to_string(), "1/1");
    for bad in ["", "1.5", "-0.1", "a", "3/0", "0.1.2"] {
        assert!(bad.parse::<Ratio>().is_err(), "{bad}");
    }
    assert!(r.admits(1, 8));
    assert!(r.admits(3, 10));
    assert!(!r.admits(4, 10));
}

#[test]
fn baseline_pairs_every_class_and_member() {
    let (m, c) = baseline();
    let res = match_models(&m, &c, &MatchOptions::default());
    assert_eq!(res.classes.len(), 4);
    assert!(res.design_only.is_empty() && res.code_only.is_empty());
    for p in &res.classes {
        assert!(p.design_only.is_empty(), "{p:?}");
        assert!(p.code_only.is_empty(), "{p:?}");
        assert!(p.pairs.iter().all(|x| x.kind == PairKind::Name));
    }
    let lib = res.classes.iter().find(|p| p.design == "Library").unwrap();
    assert_eq!(lib.code_covered, ["users", "books"]);
    // the baseline constructor quirk is reported, nothing else
    let r = check(&m, &c, &MatchOptions::default());
    assert_eq!(kinds(&r), [(FindingKind::ConstructorArityMismatch, "User.User/1".into())]);
}

#[test]
fn mutated_pair_findings() {
    let (m, c) = mutated();
    let r = check(&m, &c, &MatchOptions::default());
    let got = kinds(&r);
    assert_eq!(
        got,
        [
            (FindingKind::ConstructorArityMismatch, "User.User/1".into()),
            (FindingKind::ProbableRename, "User.namae".into()),
            (FindingKind::ProbableRename, "User.getNamae/0".into()),
            (FindingKind::ParamTypeMismatch, "UserCard.UserCard/1#0".into()),
            (FindingKind::AttributeTypeMismatch, "UserCard.userID".into()),
        ]
    );
    assert_eq!(r.findings.len(), got.len(), "no advisory findings expected");
    let detail = &r.findings[0].detail;
    assert!(detail.contains("1 parameter in the design model but 2 parameters"), "{detail}");
}

#[test]
fn empty_models() {
    let e = ClassModel::new(crate::model::Origin::Synthetic);
    let res = match_models(&e, &e, &MatchOptions::default());
    assert_eq!(res, MatchResult::default());
    assert!(check(&e, &e, &MatchOptions::default()).findings.is_empty());
}

#[test]
fn appendix_missing_members() {
    let (m, c) = appendix();
    let r = check(&m, &c, &MatchOptions::default());
    let of = |k: FindingKind| -> Vec<String> { kinds(&r).into_iter().filter(|x| x.0 == k).map(|x| x.1).collect() };
    assert_eq!(of(FindingKind::MissingClassInCode), ["CounterStaff", "LendingInformation", "UserCard"]);
    let in_code = of(FindingKind::MissingMethodInCode);
    for want in ["User.selectBook/0", "User.returnBook/0", "Book.getBookInfo/0", "Library.openShelf/0", "Library.closeShelf/0"] {
        assert!(in_code.iter().any(|k| k == want), "{want} in {in_code:?}");
    }
    let in_model = of(FindingKind::MissingMethodInModel);
    for want in ["add_book/2", "add_user/2", "lend_book/2", "return_book/2", "check_overdue_books/0"] {
        assert!(in_model.iter().any(|k| *k == alloc::format!("Library.{want}")), "{want} in {in_model:?}");
    }
}

#[test]
fn exact_mode_does_not_fold_conventions() {
    let (m, c) = pair(
        "@startuml\nclass A {\n  +lendBook(x: int)\n}\n@enduml\n",
        "class A:\n    def lend_book(self, x):\n        pass\n",
    );
    assert!(check(&m, &c, &MatchOptions::default()).findings.is_empty());
    let exact = MatchOptions { name_mode: NameMode::Exact, ..Default::default() };
    let r = check(&m, &c, &exact);
    let got: Vec<FindingKind> = r.findings.iter().map(|f| f.kind).collect();
    assert_eq!(got, [FindingKind::ProbableRename]);
}

#[test]
fn advisory_relationships() {
    let (m, c) = pair(
        "@startuml\nclass A {\n}\nclass B {\n  -a: A\n  +B(a: A)\n}\nA -- B\n@enduml\n",
        "class A:\n    pass\nclass B:\n    def __init__(self, a: A):\n        self.a = a\n",
    );
    let r = check(&m, &c, &MatchOptions::default());
    assert!(!r.has_errors(), "{:?}", r.findings);
    assert!(r.findings.is_empty(), "the code links A and B through B.a");
    let (m2, c2) = pair("@startuml\nclass A {\n}\nclass B {\n}\nA -- B\n@enduml\n", "class A:\n    pass\nclass B:\n    pass\n");
    let r = check(&m2, &c2, &MatchOptions::default());
    assert_eq!(r.findings.len(), 1);
    assert_eq!(r.findings[0].severity, Severity::Advisory);
    let off = MatchOptions { infer_code_relationships: false, ..Default::default() };
    assert!(check(&m2, &c2, &off).findings.is_empty());
}

#[test]
fn return_and_method_arity() {
    let (m, c) = pair(
        "@startuml\nclass A {\n  +f(): String\n  +g(x: int)\n}\n@enduml\n",
        "class A:\n    def f(self) -> int:\n        pass\n    def g(self):\n        pass\n",
    );
    let r = check(&m, &c, &MatchOptions::default());
    let got: Vec<FindingKind> = r.findings.iter().map(|f| f.kind).collect();
    assert_eq!(got, [FindingKind::ReturnTypeMismatch, FindingKind::ConstructorArityMismatch]);
    assert!(r.findings[1].detail.starts_with("method `A.g()`"));
}

#[test]
fn reports_are_deterministic() {
    let (m, c) = appendix();
    let a = check(&m, &c, &MatchOptions::default());
    let b = check(&m, &c, &MatchOptions::default());
    assert_eq!(a, b);
    let ids: BTreeSet<&str> = a.findings.iter().map(|f| f.id.as_str()).collect();
    assert_eq!(ids.len(), a.findings.len());
}
