mod render;

use std::fmt;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use orthologic::checks::{full_report, CheckOptions, Property, WitnessPolicy};
use orthologic::hilbert::{verify_embedding, DEFAULT_TOLERANCE};
use orthologic::model::{distributivity_witness_sets, equivalence_classes, proposition_lattice};
use orthologic::text::{load_lattice, parse_assignment, parse_model, write_lattice, TextError};

/// Default `check` profile. Distributivity is informational.
const DEFAULT_REQUIRED: [Property; 6] = [
    Property::Poset,
    Property::Lattice,
    Property::Orthocomplementation,
    Property::Orthomodular,
    Property::Atomic,
    Property::Covering,
];

#[derive(Parser, Debug)]
#[command(
    name = "orthologic",
    version,
    about = "Build and verify finite orthocomplemented lattices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format; `dot` only applies to `hasse`.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Rank tolerance for subspace computations.
    #[arg(long, global = true, allow_negative_numbers = true, default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,

    /// Report the first witness per property, or all of them.
    #[arg(long, global = true, value_enum, default_value_t = Witnesses::First)]
    witnesses: Witnesses,

    /// Properties that must pass for `check` to exit 0 (comma separated).
    #[arg(long, global = true, value_delimiter = ',')]
    require: Vec<String>,

    /// Worker threads for the checker scans.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
}

#[derive(Subcommand, Debug, Clone)]
enum Command {
    /// Check a lattice (or model) and exit 1 if a required property fails.
    Check { input: PathBuf },
    /// Compile a model into lattice text.
    Model {
        input: PathBuf,
        /// Also write the lattice text to this file.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Emit the Hasse diagram.
    Hasse { input: PathBuf },
    /// Verify a subspace embedding of a lattice.
    Embed {
        lattice: PathBuf,
        assignment: PathBuf,
    },
    /// Print every checker result without gating the exit code.
    Report { input: PathBuf },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Witnesses {
    First,
    All,
}

/// Validated settings for one invocation.
#[derive(Debug, Clone)]
struct RunConfig {
    command: Command,
    format: Format,
    tolerance: f64,
    options: CheckOptions,
    require: Vec<Property>,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Input { path: PathBuf, message: String },
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Input { path, message } => write!(f, "{}: {message}", path.display()),
        }
    }
}

fn input_error(path: &Path, e: impl fmt::Display) -> CliError {
    CliError::Input {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

impl RunConfig {
    fn from_cli(cli: Cli) -> Result<Self, CliError> {
        if !cli.tolerance.is_finite() || cli.tolerance <= 0.0 {
            return Err(CliError::Usage(format!(
                "--tolerance must be a positive number, got {}",
                cli.tolerance
            )));
        }
        if cli.jobs == 0 {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }
        let default_format = match cli.command {
            Command::Hasse { .. } => Format::Dot,
            _ => Format::Text,
        };
        let format = cli.format.unwrap_or(default_format);
        if format == Format::Dot && !matches!(cli.command, Command::Hasse { .. }) {
            return Err(CliError::Usage(
                "--format dot only applies to `hasse`".into(),
            ));
        }
        let require = if cli.require.is_empty() {
            DEFAULT_REQUIRED.to_vec()
        } else {
            cli.require
                .iter()
                .filter(|s| !s.trim().is_empty())
                .map(|s| s.parse::<Property>().map_err(CliError::Usage))
                .collect::<Result<Vec<_>, _>>()?
        };
        Ok(RunConfig {
            command: cli.command,
            format,
            tolerance: cli.tolerance,
            options: CheckOptions {
                witnesses: match cli.witnesses {
                    Witnesses::First => WitnessPolicy::First,
                    Witnesses::All => WitnessPolicy::All,
                },
                jobs: cli.jobs,
            },
            require,
        })
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| input_error(path, e))
}

fn load(path: &Path) -> Result<orthologic::OrthoLattice, CliError> {
    load_lattice(&read(path)?).map_err(|e: TextError| input_error(path, e))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let outcome = RunConfig::from_cli(cli).and_then(|cfg| run(&cfg, &mut out));
    // a closed pipe downstream is not an error worth reporting
    let _ = io::stdout().lock().write_all(out.as_bytes());
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// Runs the command; `Ok(false)` means a property failed.
fn run(cfg: &RunConfig, out: &mut String) -> Result<bool, CliError> {
    match &cfg.command {
        Command::Check { input } => cmd_check(cfg, out, input, true),
        Command::Report { input } => cmd_check(cfg, out, input, false),
        Command::Model { input, output } => cmd_model(cfg, out, input, output.as_deref()),
        Command::Hasse { input } => cmd_hasse(cfg, out, input),
        Command::Embed {
            lattice,
            assignment,
        } => cmd_embed(cfg, out, lattice, assignment),
    }
}

// Writing into a `String` cannot fail, so the `fmt::Result`s below are ignored.

fn cmd_check(
    cfg: &RunConfig,
    out: &mut String,
    input: &Path,
    gate: bool,
) -> Result<bool, CliError> {
    let l = load(input)?;
    let report = full_report(&l, &cfg.options);
    let failed: Vec<Property> = cfg
        .require
        .iter()
        .copied()
        .filter(|&p| p != Property::Embedding && !report.passed(p))
        .collect();
    let ok = !gate || failed.is_empty();
    if cfg.format == Format::Json {
        let doc = render::CheckOutput {
            schema: render::SCHEMA,
            command: if gate { "check" } else { "report" },
            report: &report,
            required: gate.then_some(&cfg.require[..]),
            ok,
        };
        let _ = writeln!(out, "{}", render::json(&doc));
        return Ok(ok);
    }
    let _ = writeln!(out, "{report}");
    if gate {
        let names: Vec<&str> = cfg.require.iter().map(|p| p.name()).collect();
        if failed.is_empty() {
            let _ = writeln!(out, "required [{}]: pass", names.join(", "));
        } else {
            let bad: Vec<&str> = failed.iter().map(|p| p.name()).collect();
            let _ = writeln!(
                out,
                "required [{}]: FAIL ({})",
                names.join(", "),
                bad.join(", ")
            );
        }
    }
    Ok(ok)
}

fn cmd_model(
    cfg: &RunConfig,
    out: &mut String,
    input: &Path,
    output: Option<&Path>,
) -> Result<bool, CliError> {
    let model = parse_model(&read(input)?).map_err(|e| input_error(input, e))?;
    let l = proposition_lattice(&model).map_err(|e| input_error(input, e))?;
    let classes = equivalence_classes(&model).map_err(|e| input_error(input, e))?;
    let sets = (model.experiments.len() >= 2)
        .then(|| distributivity_witness_sets(&model))
        .transpose()
        .map_err(|e| input_error(input, e))?;
    let lattice_text = write_lattice(&l);
    if let Some(path) = output {
        fs::write(path, &lattice_text).map_err(|e| input_error(path, e))?;
    }
    if cfg.format == Format::Json {
        let _ = writeln!(
            out,
            "{}",
            render::json(&render::model_output(&l, &classes, sets.as_ref()))
        );
        return Ok(true);
    }
    out.push_str(&lattice_text);
    match &sets {
        Some(s) => {
            out.push_str("# set-level distributivity check:\n");
            for line in s.to_string().lines() {
                let _ = writeln!(out, "#   {line}");
            }
        }
        None => out.push_str("# classical: distributive\n"),
    }
    Ok(true)
}

fn cmd_hasse(cfg: &RunConfig, out: &mut String, input: &Path) -> Result<bool, CliError> {
    let l = load(input)?;
    match cfg.format {
        Format::Json => {
            let _ = writeln!(out, "{}", render::json(&render::hasse_output(&l)));
        }
        Format::Text => {
            for (a, b) in l.covers().pairs {
                let _ = writeln!(out, "{} < {}", l.label(a), l.label(b));
            }
        }
        Format::Dot => out.push_str(&render::dot(&l)),
    }
    Ok(true)
}

fn cmd_embed(
    cfg: &RunConfig,
    out: &mut String,
    lattice: &Path,
    assignment: &Path,
) -> Result<bool, CliError> {
    let l = load(lattice)?;
    let asgn = parse_assignment(&read(assignment)?).map_err(|e| input_error(assignment, e))?;
    let mut report =
        verify_embedding(&l, &asgn, cfg.tolerance).map_err(|e| input_error(assignment, e))?;
    if cfg.options.witnesses == WitnessPolicy::First {
        report.witnesses.truncate(1);
    }
    if cfg.format == Format::Json {
        let doc = render::EmbedOutput {
            schema: render::SCHEMA,
            command: "embed",
            lattice: l.name(),
            dim: asgn.dim,
            tolerance: cfg.tolerance,
            report: &report,
        };
        let _ = writeln!(out, "{}", render::json(&doc));
    } else {
        let _ = writeln!(
            out,
            "lattice {} into dimension {} (tolerance {:e})",
            l.name(),
            asgn.dim,
            cfg.tolerance
        );
        let _ = writeln!(out, "{report}");
    }
    Ok(report.passed())
}
