//! Argument parsing and the subcommands.

use std::ffi::OsString;
use std::fs;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use modelsync_core::llm::{gen_code, gen_model, gen_model_and_code, llm_sync_suggest};
use modelsync_core::plantuml::parse_plantuml_named;
use modelsync_core::{
    apply, check, propose, render_code_skeleton, render_plantuml, resolve, ChatSettings, ChosenEdit, CodeDocument,
    CorrectionSet, MatchOptions, PlantUmlDocument, Report, Side, Transport,
};

use crate::config::{parse_name_mode, parse_policy, Config};
use crate::error::{CliError, EXIT_FINDINGS, EXIT_IO, EXIT_OK};
use crate::report::{to_json, to_text, Input};
use crate::transport::{FixtureTransport, HttpTransport, RetryPolicy, Retrying};

#[derive(Parser, Debug)]
#[command(name = "modelsync", version, about = "Keep a PlantUML class diagram and its code in step")]
struct Cli {
    /// Configuration file (default: ./modelsync.conf when present).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// `exact` or `canonical` member-name comparison.
    #[arg(long, global = true)]
    name_mode: Option<String>,
    /// Largest relative edit distance still reported as a rename, e.g. 0.3 or 3/10.
    #[arg(long, global = true)]
    threshold: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum What {
    Model,
    Code,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TransportKind {
    Live,
    Fixtures,
}

#[derive(Args, Debug)]
struct TransportArgs {
    #[arg(long, value_enum, default_value = "fixtures")]
    transport: TransportKind,
    /// Directory of recorded exchanges for `--transport fixtures`.
    #[arg(long)]
    fixtures: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compare a model with code and report inconsistencies.
    Check {
        model: PathBuf,
        code: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Repair both artifacts so they agree.
    Sync {
        model: PathBuf,
        code: PathBuf,
        /// model-wins, code-wins, union, union-code, report-only or ask.
        #[arg(long)]
        policy: Option<String>,
        #[arg(long, conflicts_with = "in_place", required_unless_present = "in_place")]
        out_dir: Option<PathBuf>,
        #[arg(long)]
        in_place: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Print the class diagram of a code file.
    ExtractModel {
        code: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print a code skeleton for a class diagram.
    GenCode {
        model: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print a class diagram in canonical form.
    RenderModel {
        model: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Generate a model and/or code from a problem statement.
    Gen {
        requirements: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        what: What,
        #[command(flatten)]
        transport: TransportArgs,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// Ask for both artifacts in one request.
        #[arg(long)]
        single_prompt: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Ask the chat endpoint for its own synchronization advice.
    Suggest {
        model: PathBuf,
        code: PathBuf,
        #[command(flatten)]
        transport: TransportArgs,
    },
}

pub const MODEL_FILE: &str = "model.puml";
pub const CODE_FILE: &str = "code.py";

struct Io<'a> {
    stdin: &'a mut dyn BufRead,
    stdout: &'a mut dyn Write,
}

/// Runs one invocation and returns the process exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn BufRead, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_IO } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(stderr, "{e}") } else { write!(stdout, "{e}") };
            return code;
        }
    };
    let mut io = Io { stdin, stdout };
    match dispatch(cli, &mut io) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn settings(cli: &Cli) -> Result<Config, CliError> {
    let mut cfg = Config::load(cli.config.as_deref())?;
    if let Some(m) = &cli.name_mode {
        cfg.name_mode = parse_name_mode(m).ok_or_else(|| CliError::Usage(format!("unknown name mode `{m}`")))?;
    }
    if let Some(t) = &cli.threshold {
        cfg.rename_threshold = t.parse().map_err(|e| CliError::Usage(format!("{e}")))?;
    }
    Ok(cfg)
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn write_out(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
    }
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn emit(io: &mut Io<'_>, output: Option<&Path>, text: &str) -> Result<(), CliError> {
    match output {
        Some(p) => write_out(p, text),
        None => io.stdout.write_all(text.as_bytes()).map_err(|e| CliError::io(Path::new("<stdout>"), e)),
    }
}

fn load_model(path: &Path) -> Result<(String, PlantUmlDocument), CliError> {
    let text = read(path)?;
    let name = path.display().to_string();
    let doc = parse_plantuml_named(&text, &name).map_err(|source| CliError::Model { path: name, source: Box::new(source) })?;
    Ok((text, doc))
}

fn load_code(path: &Path) -> Result<CodeDocument, CliError> {
    let text = read(path)?;
    let name = path.display().to_string();
    CodeDocument::parse_named(&text, &name).map_err(|source| CliError::Code { path: name, source: Box::new(source) })
}

struct Checked {
    model_text: String,
    model: PlantUmlDocument,
    code: CodeDocument,
    report: Report,
    sets: Vec<CorrectionSet>,
}

fn check_pair(model_path: &Path, code_path: &Path, opts: &MatchOptions) -> Result<Checked, CliError> {
    let (model_text, model) = load_model(model_path)?;
    let code = load_code(code_path)?;
    let report = check(&model.model, &code.model, opts);
    let sets = propose(&report, &model.model, &code)?;
    Ok(Checked { model_text, model, code, report, sets })
}

fn render_report(format: Format, c: &Checked, model_path: &Path, code_path: &Path) -> String {
    match format {
        Format::Text => to_text(&c.report, &c.sets),
        Format::Json => {
            let (m, k) = (model_path.display().to_string(), code_path.display().to_string());
            let inputs = [
                Input { path: &m, bytes: c.model_text.as_bytes() },
                Input { path: &k, bytes: c.code.raw_text.as_bytes() },
            ];
            to_json(&c.report, &inputs, &c.sets)
        }
    }
}

fn transport(args: &TransportArgs, cfg: &Config) -> Result<Box<dyn Transport>, CliError> {
    Ok(match args.transport {
        TransportKind::Fixtures => {
            let dir = args.fixtures.clone().unwrap_or_else(|| cfg.fixtures_dir.clone());
            Box::new(FixtureTransport::open(&dir)?)
        }
        TransportKind::Live => {
            let policy = RetryPolicy::default();
            let http = HttpTransport::from_env(&cfg.llm_endpoint, policy.timeout).map_err(modelsync_core::LlmError::from)?;
            Box::new(Retrying::new(http, policy))
        }
    })
}

fn dispatch(cli: Cli, io: &mut Io<'_>) -> Result<i32, CliError> {
    let cfg = settings(&cli)?;
    let opts = cfg.match_options();
    let chat = ChatSettings { model: cfg.llm_model.clone(), ..ChatSettings::default() };
    match cli.command {
        Command::Check { model, code, format } => {
            let c = check_pair(&model, &code, &opts)?;
            emit(io, None, &render_report(format, &c, &model, &code))?;
            Ok(if c.report.has_errors() { EXIT_FINDINGS } else { EXIT_OK })
        }
        Command::Sync { model, code, policy, out_dir, in_place, format } => {
            let c = check_pair(&model, &code, &opts)?;
            let chosen = match policy.as_deref() {
                Some("ask") => ask(io, &c.sets)?,
                Some(p) => resolve(&c.sets, parse_policy(p).ok_or_else(|| CliError::Usage(format!("unknown policy `{p}`")))?),
                None => resolve(&c.sets, cfg.policy),
            };
            let (new_model, new_code) = apply(&c.model.model, &c.code, &chosen)?;
            let model_text =
                if chosen.iter().any(|e| e.side == Side::Model) { c.model.render_with(&new_model) } else { c.model_text.clone() };
            let (model_out, code_out) = if in_place {
                (model.clone(), code.clone())
            } else {
                let dir = out_dir.expect("clap requires --out-dir without --in-place");
                let name = |p: &Path, d: &str| p.file_name().map_or_else(|| PathBuf::from(d), PathBuf::from);
                (dir.join(name(&model, MODEL_FILE)), dir.join(name(&code, CODE_FILE)))
            };
            write_out(&model_out, &model_text)?;
            write_out(&code_out, &new_code)?;
            let after = check_pair(&model_out, &code_out, &opts);
            let mut summary = format!("Applied {} edit(s).\n", chosen.len());
            for e in &chosen {
                summary.push_str(&format!("  [{}] {}\n", e.side.as_str(), e.description));
            }
            match after {
                Ok(after) => {
                    let clean = !after.report.has_errors();
                    match format {
                        Format::Text => {
                            summary.push_str(if clean { "Re-check: clean.\n" } else { "Re-check still reports errors:\n" });
                            if !clean {
                                summary.push_str(&to_text(&after.report, &after.sets));
                            }
                            emit(io, None, &summary)?;
                        }
                        Format::Json => emit(io, None, &render_report(Format::Json, &after, &model_out, &code_out))?,
                    }
                    Ok(if clean { EXIT_OK } else { EXIT_FINDINGS })
                }
                Err(e) => {
                    summary.push_str(&format!("Re-check failed: {e}\n"));
                    emit(io, None, &summary)?;
                    Ok(EXIT_FINDINGS)
                }
            }
        }
        Command::ExtractModel { code, output } => {
            let doc = load_code(&code)?;
            let model = opts.type_table.code_to_model(&doc.model);
            emit(io, output.as_deref(), &render_plantuml(&model))?;
            Ok(EXIT_OK)
        }
        Command::GenCode { model, output } => {
            let (_, doc) = load_model(&model)?;
            emit(io, output.as_deref(), &render_code_skeleton(&opts.type_table.model_to_code(&doc.model)))?;
            Ok(EXIT_OK)
        }
        Command::RenderModel { model, output } => {
            let (_, doc) = load_model(&model)?;
            emit(io, output.as_deref(), &render_plantuml(&doc.model))?;
            Ok(EXIT_OK)
        }
        Command::Gen { requirements, what, transport: targs, out_dir, single_prompt, format } => {
            let problem = read(&requirements)?;
            let t = transport(&targs, &cfg)?;
            let model_path = out_dir.join(MODEL_FILE);
            let code_path = out_dir.join(CODE_FILE);
            let (model_text, code_text) = match what {
                What::Model => (Some(gen_model(&problem, &*t, &chat)?.text), None),
                What::Code => (None, Some(gen_code(&problem, &*t, &chat)?.text)),
                What::Both if single_prompt => {
                    let (m, c) = gen_model_and_code(&problem, &*t, &chat)?;
                    (Some(m.text), Some(c.text))
                }
                What::Both => (Some(gen_model(&problem, &*t, &chat)?.text), Some(gen_code(&problem, &*t, &chat)?.text)),
            };
            let mut note = String::new();
            if let Some(m) = &model_text {
                write_out(&model_path, m)?;
                note.push_str(&format!("wrote {}\n", model_path.display()));
            }
            if let Some(c) = &code_text {
                write_out(&code_path, c)?;
                note.push_str(&format!("wrote {}\n", code_path.display()));
            }
            if what == What::Both {
                let c = check_pair(&model_path, &code_path, &opts)?;
                let report = render_report(format, &c, &model_path, &code_path);
                if format == Format::Text {
                    note.push('\n');
                    note.push_str(&report);
                } else {
                    note = report;
                }
            }
            emit(io, None, &note)?;
            Ok(EXIT_OK)
        }
        Command::Suggest { model, code, transport: targs } => {
            let (m, c) = (read(&model)?, read(&code)?);
            let t = transport(&targs, &cfg)?;
            let advice = llm_sync_suggest(&m, &c, &*t, &chat)?;
            emit(io, None, &advice)?;
            if !advice.ends_with('\n') {
                emit(io, None, "\n")?;
            }
            Ok(EXIT_OK)
        }
    }
}

/// Presents each correction set and reads a choice from the terminal.
fn ask(io: &mut Io<'_>, sets: &[CorrectionSet]) -> Result<Vec<ChosenEdit>, CliError> {
    let mut chosen = Vec::new();
    let out_err = |e| CliError::io(Path::new("<stdout>"), e);
    for (i, set) in sets.iter().enumerate() {
        writeln!(io.stdout, "\n[{}/{}] {}", i + 1, sets.len(), set.kind).map_err(out_err)?;
        let many = set.alternatives.len() > 1;
        writeln!(io.stdout, "{}", if many { "Choose either:" } else { "Proposed correction:" }).map_err(out_err)?;
        for (n, alt) in set.alternatives.iter().enumerate() {
            writeln!(io.stdout, "  {}) change the {}: {}", n + 1, alt.side.as_str(), alt.description).map_err(out_err)?;
        }
        writeln!(io.stdout, "  s) skip").map_err(out_err)?;
        loop {
            write!(io.stdout, "> ").map_err(out_err)?;
            io.stdout.flush().map_err(out_err)?;
            let mut line = String::new();
            let n = io.stdin.read_line(&mut line).map_err(|e| CliError::io(Path::new("<stdin>"), e))?;
            let answer = line.trim();
            if n == 0 || answer == "s" {
                break;
            }
            if let Some(alt) = answer.parse::<usize>().ok().and_then(|k| k.checked_sub(1)).and_then(|k| set.alternatives.get(k)) {
                chosen.push(ChosenEdit::from_alternative(set, alt));
                break;
            }
            writeln!(io.stdout, "enter 1-{} or s", set.alternatives.len()).map_err(out_err)?;
        }
    }
    Ok(chosen)
}
