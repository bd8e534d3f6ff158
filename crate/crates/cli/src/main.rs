use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use sgzs_core::catalog::{self, CatalogError};
use sgzs_core::verify::{self, ClaimId, InvariantReport, RunConfig, RunReport, RunSource};
use sgzs_core::EgzValue;

const EXIT_USAGE_OR_IO: u8 = 1;
const EXIT_INVALID_INPUT: u8 = 2;
const EXIT_THEOREM_FAILED: u8 = 3;

/// Zero-sum invariants of finite commutative semigroups.
#[derive(Parser)]
#[command(name = "sgzs", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one Cayley-table file.
    Analyze {
        file: PathBuf,
        /// Upper bound for the E(S) search (default D + κ + 2).
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long, value_enum, default_value_t = AnalyzeFormat::Text)]
        format: AnalyzeFormat,
    },
    /// Write one file per isomorphism class of the given order.
    Generate {
        #[arg(long)]
        order: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check every claim over a generated catalog or a directory of tables.
    Verify(VerifyArgs),
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("input").required(true).args(["order", "dir"])))]
struct VerifyArgs {
    #[arg(long)]
    order: Option<usize>,
    #[arg(long)]
    dir: Option<PathBuf>,
    #[arg(long)]
    cap: Option<usize>,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, value_enum, default_value_t = VerifyFormat::Json)]
    format: VerifyFormat,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum AnalyzeFormat {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyFormat {
    Json,
    Csv,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE_OR_IO)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Analyze { file, cap, format } => analyze(&file, cap, format),
        Command::Generate { order, out } => generate(order, &out),
        Command::Verify(args) => run_verify(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let invalid = e
                .downcast_ref::<CatalogError>()
                .is_some_and(CatalogError::is_validation);
            ExitCode::from(if invalid {
                EXIT_INVALID_INPUT
            } else {
                EXIT_USAGE_OR_IO
            })
        }
    }
}

fn analyze(file: &Path, cap: Option<usize>, format: AnalyzeFormat) -> anyhow::Result<u8> {
    let s = catalog::read_file(file)?;
    let report = verify::analyze(&s, cap);
    match format {
        AnalyzeFormat::Json => println!("{}", serde_json::to_string_pretty(&report)?),
        AnalyzeFormat::Text => print!("{}", render_text(&report)),
    }
    warn_conjectures(
        report
            .checks
            .iter()
            .filter(|v| v.failed() && v.claim.is_conjecture())
            .map(|v| {
                (
                    file.display().to_string(),
                    v.claim,
                    v.witness.clone().unwrap_or_default(),
                )
            }),
    );
    Ok(if report.theorem_failures() > 0 {
        EXIT_THEOREM_FAILED
    } else {
        0
    })
}

fn render_text(r: &InvariantReport) -> String {
    let mut out = String::new();
    let egz = match r.egz {
        EgzValue::Exact(v) => v.to_string(),
        EgzValue::CapExceeded(cap) => format!("> {cap} (cap exceeded)"),
    };
    out.push_str(&format!("order      {}\n", r.order));
    if let Some(c) = &r.canonical {
        out.push_str(&format!("canonical  {c}\n"));
    }
    out.push_str(&format!("flags      {}\n", r.flags.names().join(", ")));
    out.push_str(&format!("exp        {}\n", r.exp));
    out.push_str(&format!("kappa      {}\n", r.kappa));
    out.push_str(&format!("d          {}\n", r.small_d));
    out.push_str(&format!("D          {}\n", r.big_d));
    out.push_str(&format!("E          {egz}\n"));
    if let Some(l) = r.nilpotency_index {
        out.push_str(&format!("L          {l}\n"));
    }
    for v in r.checks.iter().filter(|v| v.applicable) {
        let status = if v.holds == Some(true) {
            "holds"
        } else {
            "FAILS"
        };
        out.push_str(&format!("{:<10} {status}", v.claim.code()));
        if let Some(w) = &v.witness {
            out.push_str(&format!("  ({w})"));
        }
        out.push('\n');
    }
    out
}

fn warn_conjectures(found: impl IntoIterator<Item = (String, ClaimId, String)>) {
    for (source, claim, witness) in found {
        eprintln!(
            "!!! CONJECTURE COUNTEREXAMPLE: {} fails for {source}: {witness}",
            claim.code()
        );
    }
}

fn generate(order: usize, out: &Path) -> anyhow::Result<u8> {
    let entries = catalog::generate_commutative(order)?;
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    for entry in &entries {
        let path = out.join(format!("{}.txt", entry.canonical.short_hash()));
        fs::write(&path, catalog::serialize(&entry.semigroup))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    eprintln!(
        "wrote {} tables of order {order} to {}",
        entries.len(),
        out.display()
    );
    Ok(0)
}

fn run_verify(args: VerifyArgs) -> anyhow::Result<u8> {
    let source = match (args.order, args.dir) {
        (Some(n), _) => RunSource::Order(n),
        (None, Some(dir)) => RunSource::Dir(dir),
        (None, None) => unreachable!("clap enforces one input"),
    };
    let jobs = args
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let report = verify::run_verification(&RunConfig {
        source,
        cap: args.cap,
        jobs,
    })?;
    let rendered = match args.format {
        VerifyFormat::Json => serde_json::to_string_pretty(&report)? + "\n",
        VerifyFormat::Csv => render_csv(&report)?,
    };
    match &args.out {
        Some(path) => {
            fs::write(path, rendered).with_context(|| format!("writing {}", path.display()))?
        }
        None => std::io::stdout().write_all(rendered.as_bytes())?,
    }
    let agg = &report.aggregate;
    eprintln!(
        "{} entries, {} analyzed, {} input errors, {}/{} claims held, {} theorem failures, {} conjecture failures",
        agg.entries,
        agg.analyzed,
        agg.input_errors,
        agg.claims_held,
        agg.claims_applicable,
        agg.theorem_failures,
        agg.conjecture_failures
    );
    for entry in report.entries.iter().filter(|e| e.error.is_some()) {
        eprintln!(
            "input error: {}",
            entry.error.as_deref().unwrap_or_default()
        );
    }
    warn_conjectures(
        report
            .conjecture_counterexamples()
            .into_iter()
            .map(|(s, c, w)| (s.to_string(), c, w.to_string())),
    );
    Ok(report.exit_code() as u8)
}

fn render_csv(report: &RunReport) -> anyhow::Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<&str> = vec![
        "canonical",
        "source",
        "order",
        "flags",
        "exp",
        "kappa",
        "d",
        "D",
        "E",
    ];
    header.extend(ClaimId::ALL.iter().map(|c| c.code()));
    header.push("error");
    writer.write_record(&header)?;
    for entry in &report.entries {
        let mut row: Vec<String> = Vec::with_capacity(header.len());
        match &entry.report {
            Some(r) => {
                row.push(r.canonical.clone().unwrap_or_default());
                row.push(entry.source.clone());
                row.push(r.order.to_string());
                row.push(r.flags.names().join(";"));
                row.extend([r.exp, r.kappa, r.small_d, r.big_d].map(|v| v.to_string()));
                row.push(match r.egz {
                    EgzValue::Exact(v) => v.to_string(),
                    EgzValue::CapExceeded(cap) => format!(">{cap}"),
                });
                row.extend(ClaimId::ALL.iter().map(|&c| match r.verdict(c).holds {
                    Some(true) => "1".to_string(),
                    Some(false) => "0".to_string(),
                    None => String::new(),
                }));
                row.push(String::new());
            }
            None => {
                row.push(String::new());
                row.push(entry.source.clone());
                row.resize(header.len() - 1, String::new());
                row.push(entry.error.clone().unwrap_or_default());
            }
        }
        writer.write_record(&row)?;
    }
    Ok(String::from_utf8(writer.into_inner()?)?)
}
