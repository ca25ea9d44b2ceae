//! JSON and text renderings of a check report.

use std::fmt::Write as _;

use modelsync_core::consistency::Location;
use modelsync_core::{sha256_hex, CorrectionSet, Finding, Report, Severity};
use serde::Serialize;

/// JSON schema the `--format json` output conforms to.
pub const REPORT_SCHEMA: &str = include_str!("../schema/report-v1.schema.json");

pub struct Input<'a> {
    pub path: &'a str,
    pub bytes: &'a [u8],
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct JsonReport<'a> {
    version: u32,
    inputs: Vec<JsonInput<'a>>,
    options: JsonOptions,
    findings: Vec<JsonFinding<'a>>,
}

#[derive(Serialize)]
struct JsonInput<'a> {
    path: &'a str,
    sha256: String,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct JsonOptions {
    name_mode: &'static str,
    rename_threshold: f64,
    type_equivalences: Vec<[String; 2]>,
    infer_code_relationships: bool,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct JsonFinding<'a> {
    id: &'a str,
    kind: &'static str,
    severity: &'static str,
    model_location: Option<JsonLocation<'a>>,
    code_location: Option<JsonLocation<'a>>,
    detail: &'a str,
    suggestions: Vec<JsonSuggestion<'a>>,
}

#[derive(Serialize)]
struct JsonLocation<'a> {
    class: &'a str,
    element: String,
    member: Option<&'a str>,
    arity: Option<usize>,
    param: Option<usize>,
    span: Option<JsonSpan<'a>>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct JsonSpan<'a> {
    artifact: &'a str,
    start_line: usize,
    start_col: usize,
    end_line: usize,
    end_col: usize,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct JsonSuggestion<'a> {
    side: &'static str,
    edit_kind: &'static str,
    description: &'a str,
}

fn location(l: &Location) -> JsonLocation<'_> {
    JsonLocation {
        class: &l.class,
        element: format!("{:?}", l.element).to_lowercase(),
        member: l.member.as_deref(),
        arity: l.arity,
        param: l.param,
        span: l.span.as_ref().map(|s| JsonSpan {
            artifact: &s.artifact,
            start_line: s.start_line,
            start_col: s.start_col,
            end_line: s.end_line,
            end_col: s.end_col,
        }),
    }
}

fn suggestions<'a>(f: &Finding, sets: &'a [CorrectionSet]) -> Vec<JsonSuggestion<'a>> {
    sets.iter()
        .filter(|s| s.finding_id == f.id)
        .flat_map(|s| &s.alternatives)
        .map(|a| JsonSuggestion { side: a.side.as_str(), edit_kind: a.edit.kind_str(), description: &a.description })
        .collect()
}

pub fn to_json(report: &Report, inputs: &[Input<'_>], sets: &[CorrectionSet]) -> String {
    let o = &report.options;
    let json = JsonReport {
        version: report.version,
        inputs: inputs.iter().map(|i| JsonInput { path: i.path, sha256: sha256_hex(i.bytes) }).collect(),
        options: JsonOptions {
            name_mode: o.name_mode.as_str(),
            rename_threshold: o.rename_threshold.num() as f64 / o.rename_threshold.den() as f64,
            type_equivalences: o.type_table.pairs().iter().map(|(m, c)| [m.clone(), c.clone()]).collect(),
            infer_code_relationships: o.infer_code_relationships,
        },
        findings: report
            .findings
            .iter()
            .map(|f| JsonFinding {
                id: &f.id,
                kind: f.kind.as_str(),
                severity: f.severity.as_str(),
                model_location: f.model_location.as_ref().map(location),
                code_location: f.code_location.as_ref().map(location),
                detail: &f.detail,
                suggestions: suggestions(f, sets),
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&json).expect("report serializes");
    out.push('\n');
    out
}

/// Numbered list, one entry per finding, corrections indented below it.
pub fn to_text(report: &Report, sets: &[CorrectionSet]) -> String {
    let errors = report.errors().count();
    let advisory = report.findings.len() - errors;
    let mut out = String::new();
    if report.findings.is_empty() {
        out.push_str("The design model and the code are synchronized.\n");
        return out;
    }
    let _ = writeln!(out, "{errors} inconsistenc{} found, {advisory} advisory note(s):", if errors == 1 { "y" } else { "ies" });
    for (i, f) in report.findings.iter().enumerate() {
        let tag = if f.severity == Severity::Advisory { " (advisory)" } else { "" };
        let _ = writeln!(out, "\n{}. {}{tag}: {}", i + 1, f.kind, f.detail);
        if let Some(l) = &f.model_location {
            let _ = writeln!(out, "   model: {l}");
        }
        if let Some(l) = &f.code_location {
            let _ = writeln!(out, "   code:  {l}");
        }
        for s in sets.iter().filter(|s| s.finding_id == f.id) {
            for a in &s.alternatives {
                let _ = writeln!(out, "   correction on the {} side: {}", a.side.as_str(), a.description);
            }
        }
    }
    out
}
