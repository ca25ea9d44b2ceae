//! Prompt templates, a transport abstraction for chat-completion endpoints,
//! and extraction of diagram/code blocks from free-form responses.
//!
//! Nothing here performs IO; the `modelsync` crate provides the HTTP and
//! fixture-replay transports.

use alloc::borrow::ToOwned;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::code::{parse_code, CodeDocument};
use crate::hash::sha256_hex;
use crate::plantuml::{parse_plantuml, PlantUmlDocument};

pub const DEFAULT_MODEL: &str = "gpt-4-0613";

const GEN_MODEL_AND_CODE: &str = "For the above #problem, create the design model in PlantUML format and the code in Python language in detail and present a method by using ChatGPT to ensure bidirectional traceability between them. The traceability refers to the situation where when the model is changed, the corresponding code is changed in sync, and vice versa.";
const GEN_CLASS_DIAGRAM: &str = "For the above #problem, create the class diagram in PlantUML format in detail.";
const GEN_CODE: &str = "For the above #problem, create the code in python language in detail.";
const SYNC_CHECK: &str = "Check if the changes between design models and Python code are synchronized, and if there are inconsistencies, propose corrections for both the design models and Python code.";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PromptKind {
    GenModelAndCode,
    GenClassDiagram,
    GenCode,
    SyncCheck,
}

impl PromptKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PromptKind::GenModelAndCode => "gen-model-and-code",
            PromptKind::GenClassDiagram => "gen-class-diagram",
            PromptKind::GenCode => "gen-code",
            PromptKind::SyncCheck => "sync-check",
        }
    }
}

/// Named inputs a template may use.
#[derive(Debug, Clone, Copy, Default)]
pub struct PromptInputs<'a> {
    pub problem: Option<&'a str>,
    pub model: Option<&'a str>,
    pub code: Option<&'a str>,
}

fn required<'a>(v: Option<&'a str>, name: &'static str) -> Result<&'a str, LlmError> {
    match v {
        Some(s) if !s.trim().is_empty() => Ok(s),
        _ => Err(LlmError::MissingInput(name)),
    }
}

fn trim_newlines(s: &str) -> &str {
    s.trim_matches(|c| c == '\n' || c == '\r')
}

pub fn build_prompt(kind: PromptKind, inputs: &PromptInputs<'_>) -> Result<String, LlmError> {
    let instruction = match kind {
        PromptKind::GenModelAndCode => GEN_MODEL_AND_CODE,
        PromptKind::GenClassDiagram => GEN_CLASS_DIAGRAM,
        PromptKind::GenCode => GEN_CODE,
        PromptKind::SyncCheck => {
            let model = trim_newlines(required(inputs.model, "model")?);
            let code = trim_newlines(required(inputs.code, "code")?);
            return Ok(format!("{SYNC_CHECK}\n----\n#Design Model in PlantUML:\n{model}\n\n#Python Code:\n{code}\n"));
        }
    };
    let problem = required(inputs.problem, "problem")?.trim();
    Ok(format!("#Problem:\n{problem}\n\n#Instruction:\n{instruction}\n"))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChatMessage {
    pub role: String,
    pub content: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChatRequest {
    pub model: String,
    pub temperature: f64,
    pub messages: Vec<ChatMessage>,
}

impl ChatRequest {
    pub fn user(settings: &ChatSettings, prompt: String) -> Self {
        Self {
            model: settings.model.clone(),
            temperature: settings.temperature,
            messages: vec![ChatMessage { role: "user".to_owned(), content: prompt }],
        }
    }

    /// Content hash of the whole request; fixture files are keyed by it.
    pub fn fingerprint(&self) -> String {
        let mut dump = format!("model={}\ntemperature={:?}\n", self.model, self.temperature);
        for m in &self.messages {
            dump.push_str(&format!("{}:{}:{}\n", m.role, m.content.len(), m.content));
        }
        sha256_hex(dump.as_bytes())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChatResponse {
    pub content: String,
}

/// A recorded prompt/response pair.
#[derive(Debug, Clone, PartialEq)]
pub struct ChatExchange {
    pub key: String,
    pub request: ChatRequest,
    pub response: ChatResponse,
}

impl ChatExchange {
    pub fn new(request: ChatRequest, response: ChatResponse) -> Self {
        Self { key: request.fingerprint(), request, response }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChatSettings {
    pub model: String,
    pub temperature: f64,
}

impl Default for ChatSettings {
    fn default() -> Self {
        Self { model: DEFAULT_MODEL.to_owned(), temperature: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransportError {
    #[error("request timed out after {attempts} attempt(s)")]
    Timeout { attempts: u32 },
    #[error("no recorded exchange for request {key}")]
    NoFixture { key: String },
    #[error("{0}")]
    Failed(String),
}

/// Something that answers chat requests.
pub trait Transport {
    fn send(&self, request: &ChatRequest) -> Result<ChatResponse, TransportError>;
}

impl<T: Transport + ?Sized> Transport for &T {
    fn send(&self, request: &ChatRequest) -> Result<ChatResponse, TransportError> {
        (**self).send(request)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockTag {
    PlantUml,
    Code,
}

impl fmt::Display for BlockTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BlockTag::PlantUml => "plantuml",
            BlockTag::Code => "code",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LlmError {
    #[error("required prompt input `{0}` is missing or empty")]
    MissingInput(&'static str),
    #[error("the response contains no {0} block")]
    NoBlockFound(BlockTag),
    #[error("generated {what} does not parse: {reason}")]
    GenerationUnparsable { what: BlockTag, raw: String, reason: String },
    #[error(transparent)]
    Transport(#[from] TransportError),
}

struct Fence<'a> {
    info: &'a str,
    body: String,
}

fn fences(text: &str) -> Vec<Fence<'_>> {
    let mut out = Vec::new();
    let mut open: Option<(&str, Vec<&str>)> = None;
    for line in text.lines() {
        let t = line.trim();
        match &mut open {
            None => {
                if let Some(info) = t.strip_prefix("```") {
                    open = Some((info.trim(), Vec::new()));
                }
            }
            Some((info, body)) => {
                if t == "```" {
                    let mut joined = body.join("\n");
                    joined.push('\n');
                    out.push(Fence { info, body: joined });
                    open = None;
                } else {
                    body.push(line);
                }
            }
        }
    }
    out
}

/// Returns the first block of the requested kind, without surrounding prose.
pub fn extract_block(response: &str, tag: BlockTag) -> Result<String, LlmError> {
    let all = fences(response);
    let tagged = |f: &&Fence<'_>| match tag {
        BlockTag::PlantUml => matches!(f.info, "plantuml" | "puml" | "uml"),
        BlockTag::Code => matches!(f.info, "python" | "py" | "python3"),
    };
    if let Some(f) = all.iter().find(tagged) {
        return Ok(f.body.clone());
    }
    match tag {
        BlockTag::PlantUml => {
            let start = response.find("@startuml");
            let end = start.and_then(|s| response[s..].find("@enduml").map(|e| s + e + "@enduml".len()));
            if let (Some(s), Some(e)) = (start, end) {
                let mut block = response[s..e].to_owned();
                block.push('\n');
                return Ok(block);
            }
        }
        BlockTag::Code => {
            if let Some(f) = all.iter().find(|f| f.info.is_empty() && !f.body.contains("@startuml")) {
                return Ok(f.body.clone());
            }
        }
    }
    Err(LlmError::NoBlockFound(tag))
}

#[derive(Debug, Clone)]
pub struct GeneratedModel {
    pub text: String,
    pub document: PlantUmlDocument,
}

#[derive(Debug, Clone)]
pub struct GeneratedCode {
    pub text: String,
    pub document: CodeDocument,
}

fn ask(kind: PromptKind, inputs: &PromptInputs<'_>, transport: &dyn Transport, settings: &ChatSettings) -> Result<String, LlmError> {
    let prompt = build_prompt(kind, inputs)?;
    Ok(transport.send(&ChatRequest::user(settings, prompt))?.content)
}

fn model_from(response: &str) -> Result<GeneratedModel, LlmError> {
    let text = extract_block(response, BlockTag::PlantUml)?;
    match parse_plantuml(&text) {
        Ok(document) => Ok(GeneratedModel { text, document }),
        Err(e) => Err(LlmError::GenerationUnparsable { what: BlockTag::PlantUml, raw: response.to_owned(), reason: format!("{e}") }),
    }
}

fn code_from(response: &str) -> Result<GeneratedCode, LlmError> {
    let text = extract_block(response, BlockTag::Code)?;
    match parse_code(&text) {
        Ok(document) => Ok(GeneratedCode { text, document }),
        Err(e) => Err(LlmError::GenerationUnparsable { what: BlockTag::Code, raw: response.to_owned(), reason: format!("{e}") }),
    }
}

pub fn gen_model(requirements: &str, transport: &dyn Transport, settings: &ChatSettings) -> Result<GeneratedModel, LlmError> {
    let inputs = PromptInputs { problem: Some(requirements), ..Default::default() };
    model_from(&ask(PromptKind::GenClassDiagram, &inputs, transport, settings)?)
}

pub fn gen_code(requirements: &str, transport: &dyn Transport, settings: &ChatSettings) -> Result<GeneratedCode, LlmError> {
    let inputs = PromptInputs { problem: Some(requirements), ..Default::default() };
    code_from(&ask(PromptKind::GenCode, &inputs, transport, settings)?)
}

/// One request asking for both artifacts at once.
pub fn gen_model_and_code(
    requirements: &str,
    transport: &dyn Transport,
    settings: &ChatSettings,
) -> Result<(GeneratedModel, GeneratedCode), LlmError> {
    let inputs = PromptInputs { problem: Some(requirements), ..Default::default() };
    let response = ask(PromptKind::GenModelAndCode, &inputs, transport, settings)?;
    Ok((model_from(&response)?, code_from(&response)?))
}

/// The endpoint's free-form opinion on the pair, returned verbatim.
pub fn llm_sync_suggest(model_text: &str, code_text: &str, transport: &dyn Transport, settings: &ChatSettings) -> Result<String, LlmError> {
    let inputs = PromptInputs { model: Some(model_text), code: Some(code_text), ..Default::default() };
    ask(PromptKind::SyncCheck, &inputs, transport, settings)
}
