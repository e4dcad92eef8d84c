//! Command-line front end: decide, batch, probe, analyze.
//!
//! Exit codes: 0 embeds, 1 does not embed, 2 undecided; 64 parse error,
//! 65 not expansive, 66 eigensolver failure, 67 other analysis errors,
//! 70 batch with case errors, 74 I/O error.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use besov_embed::{spectral_analyze, ExtReal, Variant};
use besov_embed_cli::cases::{
    alpha_from_value, exponent_from_value, load_matrix_arg, RouteChoice,
};
use besov_embed_cli::config::{OutputFormat, RunConfig};
use besov_embed_cli::report::{
    outcome_exit_code, render_case_csv, render_case_text, render_summary_text,
    spectral_report_json, CaseReport, CSV_HEADER,
};
use besov_embed_cli::run::{decide_routes, emit_probe_trace, run_batch, SequenceChoice};
use besov_embed_cli::CliError;

#[derive(Parser)]
#[command(
    name = "besov-embed",
    version,
    about = "Decides embeddings of anisotropic Besov spaces into Sobolev spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide one embedding question.
    Decide(DecideArgs),
    /// Process a line-delimited JSON file of cases.
    Batch(BatchArgs),
    /// Emit the partial-sum trace of a criterion sequence as CSV.
    Probe(ProbeArgs),
    /// Print the spectral analysis of a matrix.
    Analyze(AnalyzeArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VariantArg {
    Homogeneous,
    Inhomogeneous,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Homogeneous => Variant::Homogeneous,
            VariantArg::Inhomogeneous => Variant::Inhomogeneous,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RouteArg {
    ClosedForm,
    Summability,
    Both,
}

impl From<RouteArg> for RouteChoice {
    fn from(r: RouteArg) -> RouteChoice {
        match r {
            RouteArg::ClosedForm => RouteChoice::ClosedForm,
            RouteArg::Summability => RouteChoice::Summability,
            RouteArg::Both => RouteChoice::Both,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Text,
    Csv,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> OutputFormat {
        match f {
            FormatArg::Json => OutputFormat::Json,
            FormatArg::Text => OutputFormat::Text,
            FormatArg::Csv => OutputFormat::Csv,
        }
    }
}

#[derive(Args)]
struct QueryArgs {
    /// Matrix: path to a JSON file, or an inline JSON object.
    #[arg(long)]
    matrix: String,
    /// Integrability exponent p ("inf", "p/q", or a decimal).
    #[arg(long)]
    p: String,
    /// Integrability exponent q.
    #[arg(long)]
    q: String,
    /// Summation exponent r.
    #[arg(long)]
    r: String,
    /// Smoothness parameter alpha (rational, decimal, or "[-]sqrt(k)").
    #[arg(long)]
    alpha: String,
    /// Derivative order n.
    #[arg(long)]
    n: u32,
    #[arg(long, value_enum, default_value_t = VariantArg::Inhomogeneous)]
    variant: VariantArg,
}

#[derive(Args)]
struct DecideArgs {
    #[command(flatten)]
    query: QueryArgs,
    #[arg(long, value_enum, default_value_t = RouteArg::ClosedForm)]
    route: RouteArg,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct BatchArgs {
    /// Line-delimited JSON file of case records.
    cases: PathBuf,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct ProbeArgs {
    #[command(flatten)]
    query: QueryArgs,
    /// Summability exponent s for the partial sums ("inf" allowed).
    #[arg(long)]
    s: String,
    /// Which sequence to probe: "q", "p", or an explicit exponent.
    #[arg(long, default_value = "q")]
    t: String,
    /// Truncation index (defaults to the configured probe_j_max).
    #[arg(long)]
    j_max: Option<u32>,
    /// Output CSV path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Matrix: path to a JSON file, or an inline JSON object.
    #[arg(long)]
    matrix: String,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    #[arg(long)]
    config: Option<PathBuf>,
}

fn load_config(path: &Option<PathBuf>, format: Option<FormatArg>) -> Result<RunConfig, CliError> {
    let mut config = match path {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(f) = format {
        config.output_format = f.into();
    }
    Ok(config)
}

fn parse_query(query: &QueryArgs) -> Result<(besov_embed::InputMatrix, besov_embed::EmbeddingParams, Variant), CliError> {
    let matrix = load_matrix_arg(&query.matrix)?;
    let params = besov_embed::EmbeddingParams {
        p: exponent_from_value(&serde_json::Value::String(query.p.clone()))?,
        q: exponent_from_value(&serde_json::Value::String(query.q.clone()))?,
        r: exponent_from_value(&serde_json::Value::String(query.r.clone()))?,
        alpha: alpha_from_value(&serde_json::Value::String(query.alpha.clone()))?,
        n: query.n,
    };
    Ok((matrix, params, query.variant.into()))
}

fn cmd_decide(args: DecideArgs) -> Result<i32, CliError> {
    let config = load_config(&args.config, args.format)?;
    let (matrix, params, variant) = parse_query(&args.query)?;
    let analyzed = spectral_analyze(&matrix, config.cluster_tol)?;
    let routes = decide_routes(&config, &analyzed, &params, variant, args.route.into())?;
    let outcome = routes.outcome;
    let report = CaseReport {
        id: "cli".to_string(),
        outcome: Some(outcome),
        closed_form: routes.closed_form,
        summability: routes.summability,
        consistency: routes.consistency,
        error: None,
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match config.output_format {
        OutputFormat::Json => writeln!(out, "{}", serde_json::to_string(&report).unwrap())?,
        OutputFormat::Text => write!(out, "{}", render_case_text(&report))?,
        OutputFormat::Csv => {
            writeln!(out, "{CSV_HEADER}")?;
            writeln!(out, "{}", render_case_csv(&report))?;
        }
    }
    Ok(outcome_exit_code(outcome))
}

fn cmd_batch(args: BatchArgs) -> Result<i32, CliError> {
    let config = load_config(&args.config, args.format)?;
    let (reports, summary) = run_batch(&config, &args.cases)?;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match config.output_format {
        OutputFormat::Json => {
            for report in &reports {
                writeln!(out, "{}", serde_json::to_string(report).unwrap())?;
            }
            writeln!(
                out,
                "{}",
                serde_json::to_string(&serde_json::json!({ "summary": summary })).unwrap()
            )?;
        }
        OutputFormat::Text => {
            for report in &reports {
                write!(out, "{}", render_case_text(report))?;
            }
            write!(out, "{}", render_summary_text(&summary))?;
        }
        OutputFormat::Csv => {
            writeln!(out, "{CSV_HEADER}")?;
            for report in &reports {
                writeln!(out, "{}", render_case_csv(report))?;
            }
        }
    }
    Ok(if summary.errors > 0 { 70 } else { 0 })
}

fn cmd_probe(args: ProbeArgs) -> Result<i32, CliError> {
    let config = load_config(&args.config, None)?;
    let (matrix, params, variant) = parse_query(&args.query)?;
    let analyzed = spectral_analyze(&matrix, config.cluster_tol)?;
    let s = ExtReal::parse(&args.s).map_err(|e| CliError::parse(e.to_string()))?;
    let choice = SequenceChoice::parse(&args.t)?;
    let j_max = args.j_max.unwrap_or(config.probe_j_max);
    match &args.out {
        Some(path) => {
            let file = std::fs::File::create(path)
                .map_err(|e| CliError::io(format!("cannot create {}: {e}", path.display())))?;
            emit_probe_trace(&analyzed, &params, variant, &choice, &s, j_max, file)?;
        }
        None => {
            let stdout = std::io::stdout();
            emit_probe_trace(&analyzed, &params, variant, &choice, &s, j_max, stdout.lock())?;
        }
    }
    Ok(0)
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<i32, CliError> {
    let config = load_config(&args.config, args.format)?;
    let matrix = load_matrix_arg(&args.matrix)?;
    let analyzed = spectral_analyze(&matrix, config.cluster_tol)?;
    let report = spectral_report_json(&analyzed);
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match config.output_format {
        OutputFormat::Text => {
            writeln!(out, "dim: {}", report["dim"])?;
            writeln!(out, "|det|: {}", report["det_abs"])?;
            writeln!(out, "lambda_max: {}", report["lambda_max"])?;
            writeln!(out, "expansive: {}", report["is_expansive"])?;
            if let Some(and) = report.get("is_and") {
                writeln!(out, "AND: {and}")?;
                writeln!(out, "isotropy degree: {}", report["isotropy_degree"])?;
            }
            writeln!(out, "clusters: {}", serde_json::to_string_pretty(&report["clusters"]).unwrap())?;
        }
        _ => writeln!(out, "{}", serde_json::to_string(&report).unwrap())?,
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Decide(args) => cmd_decide(args),
        Command::Batch(args) => cmd_batch(args),
        Command::Probe(args) => cmd_probe(args),
        Command::Analyze(args) => cmd_analyze(args),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("{}", serde_json::to_string(&e.json()).unwrap());
            ExitCode::from(e.kind.exit_code() as u8)
        }
    }
}
