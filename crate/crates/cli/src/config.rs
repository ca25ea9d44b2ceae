//! Flat `key = value` configuration file.

use std::fs;
use std::path::{Path, PathBuf};

use modelsync_core::consistency::Ratio;
use modelsync_core::llm::DEFAULT_MODEL;
use modelsync_core::{MatchOptions, NameMode, Policy, Side, TypeTable};

use crate::error::CliError;

pub const DEFAULT_CONFIG: &str = "modelsync.conf";
pub const DEFAULT_ENDPOINT: &str = "https://api.openai.com/v1/chat/completions";

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub name_mode: NameMode,
    pub rename_threshold: Ratio,
    /// Extra (design spelling, code spelling) pairs on top of the built-in table.
    pub type_equivalences: Vec<(String, String)>,
    pub infer_relationships: bool,
    pub policy: Policy,
    pub fixtures_dir: PathBuf,
    pub llm_endpoint: String,
    pub llm_model: String,
}

impl Default for Config {
    fn default() -> Self {
        let opts = MatchOptions::default();
        Self {
            name_mode: opts.name_mode,
            rename_threshold: opts.rename_threshold,
            type_equivalences: Vec::new(),
            infer_relationships: opts.infer_code_relationships,
            policy: Policy::Union { prefer: Side::Model },
            fixtures_dir: PathBuf::from("fixtures/llm/exchanges"),
            llm_endpoint: DEFAULT_ENDPOINT.to_owned(),
            llm_model: DEFAULT_MODEL.to_owned(),
        }
    }
}

pub fn parse_name_mode(s: &str) -> Option<NameMode> {
    match s {
        "exact" => Some(NameMode::Exact),
        "canonical" => Some(NameMode::Canonical),
        _ => None,
    }
}

/// `model-wins`, `code-wins`, `union` (model preferred), `union-code`,
/// `report-only`. `ask` is handled by the caller.
pub fn parse_policy(s: &str) -> Option<Policy> {
    match s {
        "model-wins" => Some(Policy::ModelWins),
        "code-wins" => Some(Policy::CodeWins),
        "union" | "union-model" => Some(Policy::Union { prefer: Side::Model }),
        "union-code" => Some(Policy::Union { prefer: Side::Code }),
        "report-only" => Some(Policy::ReportOnly),
        _ => None,
    }
}

fn parse_bool(s: &str) -> Option<bool> {
    match s {
        "true" | "yes" | "on" => Some(true),
        "false" | "no" | "off" => Some(false),
        _ => None,
    }
}

impl Config {
    pub fn parse(text: &str, origin: &Path) -> Result<Self, CliError> {
        let mut cfg = Config::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |msg: String| CliError::Config(format!("{}:{}: {msg}", origin.display(), i + 1));
            let Some((key, value)) = line.split_once('=') else {
                return Err(bad(format!("expected `key = value`, got `{line}`")));
            };
            let (key, value) = (key.trim(), value.trim());
            let invalid = || bad(format!("invalid value `{value}` for `{key}`"));
            match key {
                "name-mode" => cfg.name_mode = parse_name_mode(value).ok_or_else(invalid)?,
                "rename-threshold" => cfg.rename_threshold = value.parse().map_err(|_| invalid())?,
                "type-equivalence" => {
                    let (m, c) = value.split_once(':').ok_or_else(invalid)?;
                    let (m, c) = (m.trim(), c.trim());
                    if m.is_empty() || c.is_empty() {
                        return Err(invalid());
                    }
                    cfg.type_equivalences.push((m.to_owned(), c.to_owned()));
                }
                "infer-relationships" => cfg.infer_relationships = parse_bool(value).ok_or_else(invalid)?,
                "policy" => cfg.policy = parse_policy(value).ok_or_else(invalid)?,
                "fixtures-dir" => cfg.fixtures_dir = PathBuf::from(value),
                "llm-endpoint" => cfg.llm_endpoint = value.to_owned(),
                "llm-model" => cfg.llm_model = value.to_owned(),
                _ => return Err(bad(format!("unknown key `{key}`"))),
            }
        }
        Ok(cfg)
    }

    /// Reads `path`, or `./modelsync.conf` when it exists and no path was given.
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let path = match path {
            Some(p) => p.to_path_buf(),
            None => {
                let p = PathBuf::from(DEFAULT_CONFIG);
                if !p.is_file() {
                    return Ok(Config::default());
                }
                p
            }
        };
        let text = fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
        Config::parse(&text, &path)
    }

    pub fn match_options(&self) -> MatchOptions {
        let mut table = TypeTable::builtin();
        for (m, c) in &self.type_equivalences {
            table.add(m, c);
        }
        MatchOptions {
            name_mode: self.name_mode,
            rename_threshold: self.rename_threshold,
            type_table: table,
            infer_code_relationships: self.infer_relationships,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_overrides() {
        let c = Config::parse("", Path::new("x")).unwrap();
        assert_eq!(c, Config::default());
        let text = "# comment\nname-mode = exact\nrename-threshold = 1/4\ntype-equivalence = Date : date\npolicy = code-wins\ninfer-relationships = no\n";
        let c = Config::parse(text, Path::new("x")).unwrap();
        assert_eq!(c.name_mode, NameMode::Exact);
        assert_eq!(c.rename_threshold, Ratio::new(1, 4).unwrap());
        assert_eq!(c.policy, Policy::CodeWins);
        assert!(!c.infer_relationships);
        assert!(c.match_options().type_table.names_equivalent("Date", "date"));
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        let e = Config::parse("colour = red\n", Path::new("m.conf")).unwrap_err();
        assert!(e.to_string().contains("m.conf:1: unknown key `colour`"), "{e}");
        assert!(Config::parse("rename-threshold = 2\n", Path::new("x")).is_err());
        assert!(Config::parse("just words\n", Path::new("x")).is_err());
        assert_eq!(Config::parse("name-mode = loose", Path::new("x")).unwrap_err().exit_code(), 3);
    }
}
