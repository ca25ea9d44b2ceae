//! Rebuilds `fixtures/llm/exchanges/*.json` from the prompt inputs and the
//! recorded response texts next to them.
//!
//!     cargo run -p modelsync --example record_fixtures
//!
//! With `--live` each prompt is sent to the configured endpoint first and the
//! response text files are overwritten with the answers.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use modelsync::transport::{exchange_to_json, HttpTransport, RetryPolicy, Retrying};
use modelsync_core::llm::{build_prompt, ChatExchange, PromptInputs, PromptKind};
use modelsync_core::{ChatRequest, ChatResponse, ChatSettings, Transport};

struct Entry {
    name: &'static str,
    kind: PromptKind,
    model: Option<&'static str>,
    code: Option<&'static str>,
    response: &'static str,
}

const ENTRIES: &[Entry] = &[
    Entry { name: "gen_class_diagram", kind: PromptKind::GenClassDiagram, model: None, code: None, response: "gen_class_diagram_response.txt" },
    Entry { name: "gen_code", kind: PromptKind::GenCode, model: None, code: None, response: "gen_code_response.txt" },
    Entry { name: "gen_model_and_code", kind: PromptKind::GenModelAndCode, model: None, code: None, response: "gen_model_and_code_response.txt" },
    Entry {
        name: "sync_check_mutated",
        kind: PromptKind::SyncCheck,
        model: Some("mutated_model.puml"),
        code: Some("mutated_code.py"),
        response: "sync_check_response.txt",
    },
];

fn read(p: &Path) -> String {
    fs::read_to_string(p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

fn main() {
    let live = std::env::args().any(|a| a == "--live");
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    let llm = root.join("llm");
    let out = llm.join("exchanges");
    fs::create_dir_all(&out).expect("create exchanges dir");
    let problem = read(&root.join("library_problem.txt"));
    let transport = live.then(|| {
        let policy = RetryPolicy { timeout: Duration::from_secs(120), ..RetryPolicy::default() };
        let http = HttpTransport::from_env(modelsync::config::DEFAULT_ENDPOINT, policy.timeout).expect("live transport");
        Retrying::new(http, policy)
    });
    for e in ENTRIES {
        let model = e.model.map(|f| read(&root.join(f)));
        let code = e.code.map(|f| read(&root.join(f)));
        let inputs = PromptInputs { problem: Some(&problem), model: model.as_deref(), code: code.as_deref() };
        let prompt = build_prompt(e.kind, &inputs).expect("fixture inputs are complete");
        let request = ChatRequest::user(&ChatSettings::default(), prompt);
        let response_path = llm.join(e.response);
        let response = match &transport {
            Some(t) => {
                let r = t.send(&request).expect("live request");
                fs::write(&response_path, &r.content).expect("write response");
                r
            }
            None => ChatResponse { content: read(&response_path) },
        };
        let x = ChatExchange::new(request, response);
        let path = out.join(format!("{}.json", e.name));
        fs::write(&path, exchange_to_json(&x)).expect("write exchange");
        println!("{} {}", x.key, path.display());
    }
}
