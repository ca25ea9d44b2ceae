use alloc::string::String;
use alloc::vec::Vec;

use super::*;
use crate::code::parse_code;
use crate::consistency::check;
use crate::plantuml::{parse_plantuml, render_plantuml};

const MUTATED_MODEL: &str = include_str!("../../../../fixtures/mutated_model.puml");
const MUTATED_CODE: &str = include_str!("../../../../fixtures/mutated_code.py");
const APPENDIX_MODEL: &str = include_str!("../../../../fixtures/appendix_a_model.puml");
const APPENDIX_CODE: &str = include_str!("../../../../fixtures/appendix_a_code.py");

struct Run {
    model: ClassModel,
    code: String,
    edits: Vec<ChosenEdit>,
}

fn sync(model_text: &str, code_text: &str, policy: Policy) -> Run {
    let design = parse_plantuml(model_text).unwrap().model;
    let doc = parse_code(code_text).unwrap();
    let opts = MatchOptions::default();
    let report = check(&design, &doc.model, &opts);
    let sets = propose(&report, &design, &doc).unwrap();
    let edits = resolve(&sets, policy);
    let (model, code) = apply(&design, &doc, &edits).unwrap();
    Run { model, code, edits }
}

/// Re-check after a round through the text formats.
fn recheck(run: &Run) -> Report {
    let model = parse_plantuml(&render_plantuml(&run.model)).unwrap().model;
    let code = parse_code(&run.code).unwrap().model;
    check(&model, &code, &MatchOptions::default())
}

fn assert_clean(run: &Run) {
    let r = recheck(run);
    let errors: Vec<&Finding> = r.errors().collect();
    assert!(errors.is_empty(), "{errors:#?}\n--- code ---\n{}\n--- model ---\n{}", run.code, render_plantuml(&run.model));
}

#[test]
fn code_wins_fixes_the_model_user_block() {
    let run = sync(MUTATED_MODEL, MUTATED_CODE, Policy::CodeWins);
    assert!(run.edits.iter().all(|e| e.side == Side::Model));
    assert_eq!(run.code, MUTATED_CODE);
    let text = render_plantuml(&run.model);
    assert!(text.contains("  +User(name: String, userCard: UserCard)\n"), "{text}");
    assert!(text.contains("  +getName(): String\n"), "{text}");
    assert!(text.contains("  -name: String\n"), "{text}");
    assert!(text.contains("  -userID: int\n"), "{text}");
    assert!(text.contains("  +UserCard(userID: int)\n"), "{text}");
    assert_clean(&run);
}

#[test]
fn model_wins_fixes_the_code_and_keeps_bodies() {
    let run = sync(MUTATED_MODEL, MUTATED_CODE, Policy::ModelWins);
    assert!(run.edits.iter().all(|e| e.side == Side::Code));
    assert!(run.code.contains("    def __init__(self, userID: str):\n        self.userID = userID\n"), "{}", run.code);
    assert!(run.code.contains("    def getNamae(self):\n        return self.name\n"), "{}", run.code);
    assert!(run.code.contains("    def __init__(self, namae: str):\n"), "{}", run.code);
    // the Library block is untouched byte for byte
    let lib_end = MUTATED_CODE.find("class User:").unwrap();
    assert!(run.code.starts_with(&MUTATED_CODE[..lib_end]));
    assert_clean(&run);
}

#[test]
fn union_prefers_the_model_on_conflicts() {
    let run = sync(MUTATED_MODEL, MUTATED_CODE, Policy::Union { prefer: Side::Model });
    assert!(run.edits.iter().all(|e| e.side == Side::Code));
    assert_clean(&run);
    let run = sync(MUTATED_MODEL, MUTATED_CODE, Policy::Union { prefer: Side::Code });
    assert!(run.edits.iter().all(|e| e.side == Side::Model));
    assert_clean(&run);
}

#[test]
fn report_only_applies_nothing() {
    let run = sync(MUTATED_MODEL, MUTATED_CODE, Policy::ReportOnly);
    assert!(run.edits.is_empty());
    assert_eq!(run.code, MUTATED_CODE);
    assert!(model_equal_text(&run.model, MUTATED_MODEL));
}

fn model_equal_text(m: &ClassModel, text: &str) -> bool {
    crate::model::model_equal(m, &parse_plantuml(text).unwrap().model)
}

#[test]
fn user_id_alternatives_each_clear_the_finding() {
    let design = parse_plantuml(MUTATED_MODEL).unwrap().model;
    let doc = parse_code(MUTATED_CODE).unwrap();
    let report = check(&design, &doc.model, &MatchOptions::default());
    let sets = propose(&report, &design, &doc).unwrap();
    let param = sets.iter().find(|s| s.kind == FindingKind::ParamTypeMismatch).unwrap();
    assert_eq!(param.alternatives.len(), 2);
    let m = param.alternative(Side::Model).unwrap();
    let c = param.alternative(Side::Code).unwrap();
    assert_eq!(
        m.edit,
        Edit::ChangeType {
            class: "UserCard".into(),
            target: TypeTarget::Param { method: MemberRef::Constructor, index: 0 },
            to: TypeRef::named("int")
        }
    );
    assert!(matches!(&c.edit, Edit::ChangeType { to, .. } if *to == TypeRef::named("str")));
    for alt in [m, c] {
        let chosen = [ChosenEdit::from_alternative(param, alt)];
        let (model, code) = apply(&design, &doc, &chosen).unwrap();
        let r = check(&model, &parse_code(&code).unwrap().model, &MatchOptions::default());
        assert!(r.findings.iter().all(|f| f.kind != FindingKind::ParamTypeMismatch), "{:?}", alt.side);
        if alt.side == Side::Code {
            assert!(code.contains("def __init__(self, userID: str):"));
        }
    }
}

#[test]
fn every_alternative_clears_its_own_finding() {
    for (mt, ct) in [(MUTATED_MODEL, MUTATED_CODE), (APPENDIX_MODEL, APPENDIX_CODE)] {
        let design = parse_plantuml(mt).unwrap().model;
        let doc = parse_code(ct).unwrap();
        let report = check(&design, &doc.model, &MatchOptions::default());
        let sets = propose(&report, &design, &doc).unwrap();
        for (set, finding) in sets.iter().zip(report.errors()) {
            assert_eq!(set.finding_id, finding.id);
            for alt in &set.alternatives {
                let (model, code) = apply(&design, &doc, &[ChosenEdit::from_alternative(set, alt)]).unwrap();
                let model = parse_plantuml(&render_plantuml(&model)).unwrap().model;
                let after = check(&model, &parse_code(&code).unwrap().model, &MatchOptions::default());
                assert!(
                    after.findings.iter().all(|f| f.id != finding.id),
                    "{:?} via {:?} left {}",
                    finding.kind,
                    alt.side,
                    finding.detail
                );
            }
        }
    }
}

#[test]
fn appendix_union_merges_both_ways() {
    let run = sync(APPENDIX_MODEL, APPENDIX_CODE, Policy::Union { prefer: Side::Model });
    let lib = run.model.class("Library").unwrap();
    for name in ["addBook", "addUser", "lendBook", "returnBook", "checkOverdueBooks"] {
        assert!(lib.methods.iter().any(|m| m.name == name), "{name}");
    }
    let code = parse_code(&run.code).unwrap();
    for name in ["UserCard", "CounterStaff", "LendingInformation"] {
        assert!(code.model.class(name).is_some(), "{name}");
    }
    assert!(run.code.contains("    def openShelf(self):\n        pass\n"));
    // module-level script survives
    assert!(run.code.contains("library = Library()"));
    assert_clean(&run);
}

#[test]
fn stale_reports_are_rejected() {
    let design = parse_plantuml(MUTATED_MODEL).unwrap().model;
    let doc = parse_code(MUTATED_CODE).unwrap();
    let report = check(&design, &doc.model, &MatchOptions::default());
    let other = parse_code(APPENDIX_CODE).unwrap();
    assert_eq!(propose(&report, &design, &other), Err(CorrectionError::StaleReport));
}

#[test]
fn empty_inputs() {
    let design = parse_plantuml("@startuml\n@enduml\n").unwrap().model;
    let doc = parse_code("").unwrap();
    let report = check(&design, &doc.model, &MatchOptions::default());
    assert!(propose(&report, &design, &doc).unwrap().is_empty());
    let (m, c) = apply(&design, &doc, &[]).unwrap();
    assert!(m.classes.is_empty());
    assert_eq!(c, "");
}

#[test]
fn conflicting_edits_are_rejected() {
    let design = parse_plantuml(MUTATED_MODEL).unwrap().model;
    let doc = parse_code(MUTATED_CODE).unwrap();
    let e = |to: &str| ChosenEdit {
        finding_id: "x".into(),
        side: Side::Code,
        edit: Edit::Rename { class: "User".into(), member: MemberRef::Method { name: "getName".into(), arity: 0 }, to: to.into() },
        description: String::new(),
    };
    assert!(matches!(apply(&design, &doc, &[e("a"), e("b")]), Err(CorrectionError::EditConflict(_))));
}

#[test]
fn removals_leave_valid_blocks() {
    let model = "@startuml\nclass A {\n}\n@enduml\n";
    let code = "class A:\n    def __init__(self, x):\n        self.x = x\n    def f(self):\n        return 1\nprint(1)\n";
    let run = sync(model, code, Policy::ModelWins);
    assert_eq!(run.code, "class A:\n    def __init__(self):\n        pass\nprint(1)\n");
    assert_clean(&run);
}

#[test]
fn additions_into_classes_without_constructor() {
    let model = "@startuml\nclass A {\n  -size: int\n  +A(size: int)\n  +grow(by: int): int\n}\nclass B {\n}\n@enduml\n";
    let code = "class A:\n    def other(self):\n        return 2";
    let run = sync(model, code, Policy::Union { prefer: Side::Model });
    assert_clean(&run);
    assert!(run.code.starts_with("class A:\n    def other(self):\n        return 2\n\n    def __init__(self, size: int):\n        self.size = size\n"), "{}", run.code);
    assert!(run.code.contains("    def grow(self, by: int) -> int:\n        pass\n"));
    assert!(run.code.ends_with("class B:\n    pass\n"));
}
