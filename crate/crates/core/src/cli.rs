//! Command-line driver. Exit status: 0 on success, 1 on a corpus mismatch or a
//! numerical failure, 2 on bad arguments.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::{analyze, classify_input, ConstructionSpec, InputDescriptor, Settings, Subject};
use crate::constructions::ConstructionKind;
use crate::corpus::ParamMap;
use crate::corpus_file::{run_corpus, CorpusFile, SHIPPED_CORPUS};
use crate::error::Error;
use crate::patch::Grid;
use crate::report::to_json;

pub const SEED_ENV: &str = "LSK_SEED";

#[derive(Parser, Debug)]
#[command(name = "lsk", version, about = "Lie sphere geometry toolkit for Dupin hypersurfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Curvature, Dupin and Lie curvature report for a named patch.
    Analyze {
        #[arg(long)]
        patch: String,
        #[command(flatten)]
        common: Common,
    },
    /// Apply a construction to a profile and analyze the result.
    Construct {
        kind: Kind,
        #[arg(long)]
        profile: String,
        /// Fiber dimension of a revolution.
        #[arg(long)]
        m: Option<usize>,
        /// Fiber dimension of a tube or cylinder.
        #[arg(long)]
        k: Option<usize>,
        /// Tube radius.
        #[arg(long)]
        eps: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Reducibility, construction type, witness and immersion searches.
    Classify {
        #[arg(long, conflicts_with = "from", required_unless_present = "from")]
        patch: Option<String>,
        /// Reuse the input of a stored analyze or construct report.
        #[arg(long)]
        from: Option<PathBuf>,
        /// Skip the immersing-transform search.
        #[arg(long)]
        no_immersion: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Run corpus entries and compare against their expected fields.
    Corpus {
        #[arg(long, conflicts_with = "name")]
        all: bool,
        /// Run only the named entries.
        #[arg(long)]
        name: Vec<String>,
        /// Corpus file to use instead of the shipped one.
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Also write all reports as one JSON array.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pretty-print a stored JSON report.
    Report { path: PathBuf },
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Kind {
    Revolve,
    Tube,
    Cylinder,
}

#[derive(Args, Debug)]
struct Common {
    /// Samples per axis, e.g. `64x64`.
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Generator parameters as `--key value` pairs.
    #[arg(trailing_var_arg = true, allow_hyphen_values = true, hide = true)]
    params: Vec<String>,
}

enum Failure {
    Usage(String),
    Runtime(String),
    Mismatch,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_) | Error::UnknownGenerator(_) | Error::DimensionMismatch { .. } | Error::Corpus(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

/// Options pulled out of the trailing `--key value` list.
#[derive(Default)]
struct Extracted {
    params: ParamMap,
    grid: Option<String>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    m: Option<usize>,
    k: Option<usize>,
    eps: Option<f64>,
}

fn parse_pairs(raw: &[String], construction_keys: bool) -> Result<Extracted, Failure> {
    let mut ex = Extracted::default();
    let mut it = raw.iter();
    while let Some(flag) = it.next() {
        let key = flag
            .strip_prefix("--")
            .filter(|k| !k.is_empty())
            .ok_or_else(|| Failure::Usage(format!("expected `--key value`, found `{flag}`")))?;
        let value = it.next().ok_or_else(|| Failure::Usage(format!("missing value for `--{key}`")))?;
        let number = || value.parse::<f64>().map_err(|_| Failure::Usage(format!("`--{key}` expects a number, got `{value}`")));
        let count = || value.parse::<usize>().map_err(|_| Failure::Usage(format!("`--{key}` expects a count, got `{value}`")));
        match key {
            "grid" => ex.grid = Some(value.clone()),
            "seed" => ex.seed = Some(value.parse().map_err(|_| Failure::Usage(format!("bad seed `{value}`")))?),
            "out" => ex.out = Some(PathBuf::from(value)),
            "m" if construction_keys => ex.m = Some(count()?),
            "k" if construction_keys => ex.k = Some(count()?),
            "eps" if construction_keys => ex.eps = Some(number()?),
            _ => ex.params.insert(key, number()?),
        }
    }
    Ok(ex)
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, Failure> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| Failure::Usage(format!("{SEED_ENV} must be an unsigned integer, got `{v}`"))),
        Err(_) => Ok(0),
    }
}

struct Resolved {
    params: ParamMap,
    settings: Settings,
    out: Option<PathBuf>,
}

fn resolve(common: Common, ex: Extracted) -> Result<Resolved, Failure> {
    let grid = match common.grid.or(ex.grid) {
        Some(g) => Some(Grid::parse(&g)?),
        None => None,
    };
    let settings = Settings { grid, seed: resolve_seed(common.seed.or(ex.seed))?, ..Settings::default() };
    Ok(Resolved { params: ex.params, settings, out: common.out.or(ex.out) })
}

fn emit(text: &str, out: Option<&Path>, stdout: &mut dyn Write) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Runtime(format!("{}: {e}", p.display()))),
        None => match stdout.write_all(text.as_bytes()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure::Runtime(e.to_string())),
            _ => Ok(()),
        },
    }
}

fn read_input(path: &Path) -> Result<InputDescriptor, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let input = value
        .get("input")
        .cloned()
        .ok_or_else(|| Failure::Usage(format!("{} has no `input` field", path.display())))?;
    serde_json::from_value(input).map_err(|e| Failure::Usage(format!("{}: bad input descriptor: {e}", path.display())))
}

fn execute(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Analyze { patch, mut common } => {
            let ex = parse_pairs(&std::mem::take(&mut common.params), false)?;
            let r = resolve(common, ex)?;
            let subject = Subject::build(InputDescriptor::named(&patch, r.params))?;
            let report = analyze(&subject, &r.settings)?;
            emit(&to_json(&report)?, r.out.as_deref(), stdout)
        }
        Command::Construct { kind, profile, m, k, eps, mut common } => {
            let ex = parse_pairs(&std::mem::take(&mut common.params), true)?;
            let (m, k, eps) = (m.or(ex.m), k.or(ex.k), eps.or(ex.eps));
            let spec = match kind {
                Kind::Revolve => {
                    if k.is_some() || eps.is_some() {
                        return Err(Failure::Usage("revolve takes --m only".into()));
                    }
                    ConstructionSpec { kind: ConstructionKind::Revolution, fiber_dim: m.unwrap_or(1), eps: None }
                }
                Kind::Tube => {
                    if m.is_some() {
                        return Err(Failure::Usage("tube takes --k and --eps".into()));
                    }
                    let eps = eps.ok_or_else(|| Failure::Usage("tube needs --eps".into()))?;
                    ConstructionSpec { kind: ConstructionKind::Tube, fiber_dim: k.unwrap_or(1), eps: Some(eps) }
                }
                Kind::Cylinder => {
                    if m.is_some() || eps.is_some() {
                        return Err(Failure::Usage("cylinder takes --k only".into()));
                    }
                    ConstructionSpec { kind: ConstructionKind::Cylinder, fiber_dim: k.unwrap_or(1), eps: None }
                }
            };
            let r = resolve(common, ex)?;
            let input = InputDescriptor { generator: profile, params: r.params, construction: Some(spec) };
            let report = analyze(&Subject::build(input)?, &r.settings)?;
            emit(&to_json(&report)?, r.out.as_deref(), stdout)
        }
        Command::Classify { patch, from, no_immersion, mut common } => {
            let ex = parse_pairs(&std::mem::take(&mut common.params), false)?;
            let mut r = resolve(common, ex)?;
            if no_immersion {
                r.settings.immersion = None;
            }
            let input = match (patch, from) {
                (Some(name), None) => InputDescriptor::named(&name, r.params),
                (None, Some(path)) => {
                    if !r.params.is_empty() {
                        return Err(Failure::Usage("parameters come from the stored report with --from".into()));
                    }
                    read_input(&path)?
                }
                _ => return Err(Failure::Usage("pass exactly one of --patch and --from".into())),
            };
            let report = classify_input(input, &r.settings)?;
            emit(&to_json(&report)?, r.out.as_deref(), stdout)
        }
        Command::Corpus { all, name, file, seed, out } => {
            let corpus = match &file {
                Some(p) => CorpusFile::load(p)?,
                None => CorpusFile::parse(SHIPPED_CORPUS)?,
            };
            if !all && name.is_empty() {
                return Err(Failure::Usage("pass --all or at least one --name".into()));
            }
            let seed = resolve_seed(seed)?;
            let outcome = run_corpus(&corpus, if all { None } else { Some(&name) }, seed)?;
            for line in &outcome.lines {
                writeln!(stdout, "{line}").map_err(|e| Failure::Runtime(e.to_string()))?;
            }
            if let Some(p) = out {
                emit(&to_json(&outcome.reports)?, Some(&p), stdout)?;
            }
            if outcome.failures > 0 {
                writeln!(stderr, "{} of {} corpus entries mismatched", outcome.failures, outcome.lines.len()).ok();
                return Err(Failure::Mismatch);
            }
            Ok(())
        }
        Command::Report { path } => {
            let text = fs::read_to_string(&path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            let value: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            emit(&to_json(&value)?, None, stdout)
        }
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            sink.write_all(text.as_bytes()).ok();
            return code;
        }
    };
    match execute(cli.command, stdout, stderr) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            writeln!(stderr, "error: {msg}").ok();
            2
        }
        Err(Failure::Runtime(msg)) => {
            writeln!(stderr, "error: {msg}").ok();
            1
        }
        Err(Failure::Mismatch) => 1,
    }
}
