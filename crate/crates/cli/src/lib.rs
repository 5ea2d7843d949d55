//! Command-line front end: parses problems, runs the engines, prints a report
//! and optionally writes a JSON certificate.
//!
//! Exit codes: 0 for a definitive answer, 2 for an inconclusive one (an
//! exhausted search or a clean refutation scan), 1 for errors and for
//! certificates that fail verification.

pub mod certificate;

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use parreg::coloring_families::ColoringError;
use parreg::linear_rado::{LinearSystem, RadoError, DEFAULT_MAX_COLUMNS};
use parreg::poly::PolyError;
use parreg::reductions::ReductionError;
use parreg::ring::{Domain, RingError};
use parreg::window::{WindowError, TOOL_VERSION};
use thiserror::Error;

use certificate::{
    derive_outcome, diagnose_certificate, parse_poly_text, parse_ratio, CertificateFile, Outcome, Parameters,
    PolyRecord, Problem, WindowRecord, SCHEMA_VERSION,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Rado(#[from] RadoError),
    #[error(transparent)]
    Window(#[from] WindowError),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error("bad density `{0}` (expected P/Q or a decimal)")]
    BadDelta(String),
    #[error("unsupported certificate schema version {0} (this tool reads version {SCHEMA_VERSION})")]
    Schema(u32),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed certificate: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Parser, Debug)]
#[command(name = "parreg", version, about = "Partition regularity of polynomial equations over Z and F_q[t]")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Z, GF(q)[t] or F_q[t]
    #[arg(long, default_value = "Z")]
    domain: String,
    /// Write a JSON certificate here
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Columns condition of a linear system
    Linear {
        #[command(flatten)]
        common: Common,
        /// Rows separated by `;`, entries by spaces or commas
        #[arg(long)]
        matrix: String,
        /// Largest column count searched (default 9)
        #[arg(long)]
        max_columns: Option<usize>,
    },
    /// Search enumeration prefixes for a window forcing monochromatic roots
    Search {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        poly: String,
        #[arg(long, default_value_t = 2)]
        colors: usize,
        #[arg(long, default_value_t = 30)]
        budget: usize,
        #[arg(long)]
        injective: bool,
    },
    /// Check one window for partition regularity
    Window {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        poly: String,
        #[arg(long, default_value_t = 2)]
        colors: usize,
        /// a..b, prefix:N, deg:D or a comma list
        #[arg(long)]
        window: String,
        #[arg(long)]
        injective: bool,
    },
    /// Maximum root-free subset of a window against a density threshold
    Density {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        poly: String,
        #[arg(long)]
        window: String,
        /// P/Q or a decimal in (0, 1]
        #[arg(long)]
        delta: String,
        /// add or mul
        #[arg(long, default_value = "add")]
        mode: String,
        #[arg(long)]
        injective: bool,
    },
    /// List roots in a window, or find pairwise disjoint ones with --count
    Roots {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        poly: String,
        #[arg(long)]
        window: String,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        injective: bool,
    },
    /// Scan a window for a root that an explicit coloring paints in one color
    Refute {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        poly: String,
        /// basep:P[:msd][:signed] or ordmod:PRIME:M
        #[arg(long)]
        coloring: String,
        #[arg(long)]
        window: String,
        #[arg(long)]
        injective: bool,
    },
    /// Apply a polynomial transform: shift, q3, dq4, gate:mul, gate:add
    Reduce {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        poly: String,
        #[arg(long)]
        transform: String,
        /// Random points for the identity check
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Re-check a certificate file
    Verify { file: PathBuf },
}

/// Runs one command line (without the program name) and returns the exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(std::iter::once("parreg".to_string()).chain(args.iter().cloned())) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match dispatch(cli.command, &args, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

struct Request {
    operation: &'static str,
    common: Common,
    poly: Option<String>,
    matrix: Option<String>,
    params: Parameters,
}

fn dispatch(command: Command, argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let req = match command {
        Command::Verify { file } => return verify_file(&file, out),
        Command::Linear { common, matrix, max_columns } => {
            if max_columns.is_some_and(|m| m > DEFAULT_MAX_COLUMNS) {
                let _ = writeln!(err, "warning: searching beyond {DEFAULT_MAX_COLUMNS} columns can be slow");
            }
            let params = Parameters { max_columns, ..Default::default() };
            Request { operation: "linear", common, poly: None, matrix: Some(matrix), params }
        }
        Command::Search { common, poly, colors, budget, injective } => {
            let params = Parameters { colors: Some(colors), budget: Some(budget), injective, ..Default::default() };
            Request { operation: "search", common, poly: Some(poly), matrix: None, params }
        }
        Command::Window { common, poly, colors, window, injective } => {
            let params = Parameters { colors: Some(colors), window: Some(window), injective, ..Default::default() };
            Request { operation: "window", common, poly: Some(poly), matrix: None, params }
        }
        Command::Density { common, poly, window, delta, mode, injective } => {
            parse_ratio(&delta)?;
            let params =
                Parameters { window: Some(window), delta: Some(delta), mode: Some(mode), injective, ..Default::default() };
            Request { operation: "density", common, poly: Some(poly), matrix: None, params }
        }
        Command::Roots { common, poly, window, count, injective } => {
            let params = Parameters { window: Some(window), count, injective, ..Default::default() };
            Request { operation: "roots", common, poly: Some(poly), matrix: None, params }
        }
        Command::Refute { common, poly, coloring, window, injective } => {
            let params = Parameters { coloring: Some(coloring), window: Some(window), injective, ..Default::default() };
            Request { operation: "refute", common, poly: Some(poly), matrix: None, params }
        }
        Command::Reduce { common, poly, transform, samples, seed } => {
            let params =
                Parameters { transform: Some(transform), samples: Some(samples), seed: Some(seed), ..Default::default() };
            Request { operation: "reduce", common, poly: Some(poly), matrix: None, params }
        }
    };
    let file = execute(req.operation, &req.common.domain, req.poly.as_deref(), req.matrix.as_deref(), req.params, argv)?;
    write_report(&file, out, err);
    if let Some(path) = &req.common.out {
        let text = serde_json::to_string_pretty(&file)?;
        std::fs::write(path, text + "\n").map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    }
    Ok(if file.result.is_inconclusive() { 2 } else { 0 })
}

/// Builds a certificate for one operation.
pub fn execute(
    operation: &str,
    domain: &str,
    poly: Option<&str>,
    matrix: Option<&str>,
    params: Parameters,
    argv: &[String],
) -> Result<CertificateFile, CliError> {
    let start = Instant::now();
    let domain = Domain::parse(domain)?;
    let poly = poly.map(|text| parse_poly_text(&domain, text)).transpose()?;
    let matrix = matrix.map(|text| LinearSystem::parse(&domain, text)).transpose()?;
    let polynomial = poly.as_ref().map(|(p, names)| PolyRecord::new(p, names.clone()));
    let matrix_record =
        matrix.as_ref().map(|m| m.entries().iter().map(|r| r.iter().map(|e| domain.format(e)).collect()).collect());
    let problem = Problem { domain: domain.clone(), poly, matrix };
    let result = derive_outcome(operation, &problem, &params)?;
    Ok(CertificateFile {
        schema_version: SCHEMA_VERSION,
        tool_version: TOOL_VERSION.to_string(),
        command: argv.to_vec(),
        operation: operation.to_string(),
        domain: domain.to_string(),
        enumeration_scheme: domain.enumeration_scheme().to_string(),
        polynomial,
        matrix: matrix_record,
        parameters: params,
        result,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

fn verify_file(path: &PathBuf, out: &mut dyn Write) -> Result<i32, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    let file: CertificateFile = serde_json::from_str(&text)?;
    Ok(match diagnose_certificate(&file)? {
        None => {
            let _ = writeln!(out, "valid: {} ({})", file.result.kind(), file.operation);
            0
        }
        Some(reason) => {
            let _ = writeln!(out, "invalid: {reason}");
            1
        }
    })
}

fn show_window(w: &WindowRecord) -> String {
    const SHOWN: usize = 12;
    let mut items: Vec<&str> = w.elements.iter().take(SHOWN).map(String::as_str).collect();
    if w.elements.len() > SHOWN {
        items.push("...");
    }
    format!("{} ({} elements: {})", w.generator, w.elements.len(), items.join(", "))
}

fn show_tuple(w: &WindowRecord, t: &[usize]) -> String {
    let parts: Vec<&str> = t.iter().map(|&i| w.elements.get(i).map_or("?", String::as_str)).collect();
    format!("({})", parts.join(", "))
}

fn show_set(w: &WindowRecord, s: &[usize]) -> String {
    let parts: Vec<&str> = s.iter().map(|&i| w.elements.get(i).map_or("?", String::as_str)).collect();
    format!("{{{}}}", parts.join(", "))
}

fn show_coloring(w: &WindowRecord, c: &[usize]) -> String {
    let parts: Vec<String> = w.elements.iter().zip(c).map(|(e, k)| format!("{e}:{k}")).collect();
    parts.join(" ")
}

fn write_report(file: &CertificateFile, out: &mut dyn Write, err: &mut dyn Write) {
    let mut lines = vec![format!("domain: {}", file.domain)];
    if let Some(p) = &file.polynomial {
        if let Ok(dom) = Domain::parse(&file.domain) {
            lines.push(format!("polynomial: {}", p.display(&dom)));
        }
    }
    if let Some(m) = &file.matrix {
        let rows: Vec<String> = m.iter().map(|r| r.join(" ")).collect();
        lines.push(format!("matrix: [{}]", rows.join("; ")));
    }
    lines.push(format!("verdict: {}", file.result.kind()));
    match &file.result {
        Outcome::ColumnsWitness { cells, combinations } => {
            for (j, cell) in cells.iter().enumerate() {
                let cols: Vec<String> = cell.iter().map(|c| c.to_string()).collect();
                let mut line = format!("C{} = {{{}}}", j + 1, cols.join(", "));
                if j == 0 {
                    line.push_str(": columns sum to 0");
                } else {
                    let terms: Vec<String> = combinations[j - 1].iter().map(|(c, f)| format!("({f})*c{c}")).collect();
                    line.push_str(&format!(": columns sum to {}", if terms.is_empty() { "0".into() } else { terms.join(" + ") }));
                }
                lines.push(line);
            }
        }
        Outcome::NoColumnsWitness => lines.push("the columns condition fails: not partition regular".into()),
        Outcome::PartitionCertified { window, roots } => {
            lines.push(format!("window: {}", show_window(window)));
            lines.push(format!("every coloring of this window has a monochromatic root ({} roots)", roots.len()));
        }
        Outcome::PartitionColorable { window, coloring } => {
            lines.push(format!("window: {}", show_window(window)));
            lines.push(format!("coloring without monochromatic roots: {}", show_coloring(window, coloring)));
        }
        Outcome::Exhausted { budget, last_window, last_coloring } => {
            lines.push(format!("no certificate within the first {budget} elements (inconclusive)"));
            if let (Some(w), Some(c)) = (last_window, last_coloring) {
                lines.push(format!("largest window checked: {}", show_window(w)));
                lines.push(format!("coloring without monochromatic roots: {}", show_coloring(w, c)));
            }
        }
        Outcome::DensityCertified { window, max_avoider, transferable } => {
            lines.push(format!("window: {}", show_window(window)));
            lines.push(format!("largest root-free subset has {} elements: {}", max_avoider.len(), show_set(window, max_avoider)));
            if !transferable {
                let _ = writeln!(err, "warning: the polynomial lacks the invariance this density mode needs; the verdict covers this window only");
            }
        }
        Outcome::DensityAvoider { window, avoider, transferable } => {
            lines.push(format!("window: {}", show_window(window)));
            lines.push(format!("root-free subset of {} elements: {}", avoider.len(), show_set(window, avoider)));
            if !transferable {
                let _ = writeln!(err, "warning: the polynomial lacks the invariance this density mode needs; the verdict covers this window only");
            }
        }
        Outcome::MonochromaticRoot { window, root, colors } => {
            lines.push(format!("window: {}", show_window(window)));
            lines.push(format!("monochromatic root {} in color {}", show_tuple(window, root), colors[0]));
        }
        Outcome::Clean { window } => {
            lines.push(format!("window: {}", show_window(window)));
            lines.push("no monochromatic root in this window (evidence, not proof)".into());
        }
        Outcome::Roots { window, roots } => {
            lines.push(format!("window: {}", show_window(window)));
            lines.push(format!("{} roots", roots.len()));
            lines.extend(roots.iter().map(|r| show_tuple(window, r)));
        }
        Outcome::DisjointSolutions { window, solutions } => {
            lines.push(format!("window: {}", show_window(window)));
            match solutions {
                Some(sols) => lines.extend(sols.iter().map(|r| show_tuple(window, r))),
                None => lines.push("no such family of roots in this window".into()),
            }
        }
        Outcome::Reduction { output, properties } => {
            if let Ok(dom) = Domain::parse(&file.domain) {
                lines.push(format!("output: {}", output.display(&dom)));
            }
            lines.push(format!("properties: {}", properties.join(", ")));
        }
    }
    for line in lines {
        let _ = writeln!(out, "{line}");
    }
}
