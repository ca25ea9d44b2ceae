//! Core of modelsync: a class-model IR shared by a PlantUML class-diagram
//! parser and an extractor for a small indentation-based code dialect, a
//! structural consistency checker between the two, and a correction engine
//! that proposes and applies paired repairs on both artifacts.
//!
//! The crate is `no_std` and only needs `alloc`. All IO (files, terminals,
//! HTTP) lives in the `modelsync` companion crate.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod code;
pub mod consistency;
pub mod correction;
mod hash;
pub mod llm;
pub mod model;
pub mod plantuml;
mod text;

pub use code::{apply_code_edits, parse_code, render_code_skeleton, CodeDocument, CodeEdit, CodeEditKind, CodeError};
pub use consistency::{check, match_models, Finding, FindingKind, MatchOptions, MatchResult, Report, Severity};
pub use correction::{apply, propose, resolve, Alternative, ChosenEdit, CorrectionError, CorrectionSet, Edit, Policy, Side};
pub use hash::sha256_hex;
pub use llm::{build_prompt, extract_block, BlockTag, ChatRequest, ChatResponse, ChatSettings, LlmError, PromptInputs, PromptKind, Transport, TransportError};
pub use model::{
    model_equal, normalize_name, type_equivalent, Attribute, ClassDef, ClassModel, Method, NameMode, Origin,
    Parameter, Relationship, SourceSpan, TypeRef, TypeTable, Visibility,
};
pub use plantuml::{parse_plantuml, render_plantuml, PlantUmlDocument, PlantUmlError};
