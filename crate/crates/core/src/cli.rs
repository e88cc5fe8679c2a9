//! Command-line front end. Every command renders one document (CSV or JSON)
//! which goes to stdout or `--output`.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::bounds::{nu_crit, p_ent, p_sep, partition_bound, DEFAULT_SEED};
use crate::certify::{sweep, Certifier};
use crate::error::Error;
use crate::game::scan_a;
use crate::oracle::{seesaw, SeesawConfig};
use crate::partition::{integer_partitions, intermediate_partitions, PartitionSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_INCONSISTENT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "entdepth", version, about = "Energy-restricted distributed discrimination bounds and entanglement-depth certification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form bounds at one or more energies.
    Bounds(BoundsArgs),
    /// Bound curves over an energy grid.
    Sweep(SweepArgs),
    /// Exclusions and entanglement depth for an observed success probability.
    Certify(CertifyArgs),
    /// Alternating optimization re-deriving a bound numerically.
    Oracle(OracleArgs),
    /// Optimal amplitude of the two-party family.
    #[command(name = "scan-a")]
    ScanA(ScanAArgs),
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub n: usize,
    /// A value, or `start:end:points` with inclusive endpoints.
    #[arg(long)]
    pub omega: String,
    /// Extra partitions to evaluate: `all`, or sizes like `1,3` separated by `;`.
    #[arg(long)]
    pub partitions: Option<String>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub omega: String,
    #[arg(long, default_value = "all")]
    pub partitions: String,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub omega: f64,
    /// Observed success probability.
    #[arg(long)]
    pub ps: f64,
    #[arg(long, default_value_t = 0.0)]
    pub margin: f64,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub omega: String,
    /// Structures to optimize over; defaults to the single group `{n}`.
    #[arg(long)]
    pub partitions: Option<String>,
    #[arg(long, default_value_t = 16)]
    pub restarts: usize,
    #[arg(long, default_value_t = 2000)]
    pub max_iters: usize,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ScanAArgs {
    #[arg(long)]
    pub omega: String,
    #[arg(long, default_value_t = 1000)]
    pub grid: usize,
}

#[derive(Debug)]
pub enum CliError {
    Invalid(Error),
    Inconsistent(Error),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => EXIT_VALIDATION,
            CliError::Inconsistent(_) => EXIT_INCONSISTENT,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Invalid(e) | CliError::Inconsistent(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "cannot write output: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InconsistentObservation { .. } => CliError::Inconsistent(e),
            other => CliError::Invalid(other),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn invalid(msg: String) -> CliError {
    CliError::Invalid(Error::InvalidConfig(msg))
}

/// `%.12g`-style formatting: 12 significant digits, trailing zeros dropped.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    const DIGITS: i32 = 12;
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= DIGITS {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        trim_zeros(&format!("{:.*}", (DIGITS - 1 - exp) as usize, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// A single value or `start:end:points` with inclusive endpoints.
pub fn parse_omega_grid(s: &str) -> CliResult<Vec<f64>> {
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| invalid(format!("cannot parse omega {t:?}")))
    };
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [v] => Ok(vec![num(v)?]),
        [a, b, k] => {
            let (start, end) = (num(a)?, num(b)?);
            let points: usize = k
                .trim()
                .parse()
                .map_err(|_| invalid(format!("cannot parse point count {k:?}")))?;
            match points {
                0 => Err(invalid("omega range needs at least one point".into())),
                1 if start == end => Ok(vec![start]),
                1 => Err(invalid("a single point needs start = end".into())),
                _ => Ok((0..points)
                    .map(|i| {
                        if i + 1 == points {
                            end
                        } else {
                            start + (end - start) * i as f64 / (points - 1) as f64
                        }
                    })
                    .collect()),
            }
        }
        _ => Err(invalid(format!("omega must be a value or start:end:points, got {s:?}"))),
    }
}

/// `all`, or `;`-separated partitions each written as comma-separated sizes.
pub fn parse_partitions(s: &str, n: usize, all: fn(usize) -> crate::Result<Vec<PartitionSpec>>) -> CliResult<Vec<PartitionSpec>> {
    if s.trim() == "all" {
        return Ok(all(n)?);
    }
    s.split(';')
        .map(|p| {
            let spec: PartitionSpec = p.parse()?;
            if spec.n() != n {
                return Err(Error::InvalidPartition(format!("{spec} does not partition {n} parties")).into());
            }
            Ok(spec)
        })
        .collect()
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn csv_row(cells: &[String]) -> String {
    let mut line = cells.join(",");
    line.push('\n');
    line
}

/// Runs the command and returns the rendered document.
pub fn render(cli: &Cli) -> CliResult<String> {
    match &cli.command {
        Command::Bounds(a) => render_bounds(a, cli.format.unwrap_or(Format::Json)),
        Command::Sweep(a) => render_sweep(a, cli.format.unwrap_or(Format::Csv)),
        Command::Certify(a) => render_certify(a, cli.format.unwrap_or(Format::Json)),
        Command::Oracle(a) => render_oracle(a, cli.format.unwrap_or(Format::Json)),
        Command::ScanA(a) => render_scan_a(a, cli.format.unwrap_or(Format::Json)),
    }
}

/// Renders and writes the document; returns the exit code.
pub fn run(cli: &Cli) -> i32 {
    let outcome = render(cli).and_then(|doc| match &cli.output {
        Some(path) => std::fs::write(path, doc).map_err(CliError::Io),
        None => {
            print!("{doc}");
            Ok(())
        }
    });
    match outcome {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[derive(Serialize)]
struct PartitionValue {
    partition: PartitionSpec,
    bound: f64,
}

#[derive(Serialize)]
struct BoundsRow {
    n: usize,
    omega: f64,
    p_ent: f64,
    p_sep: f64,
    /// Absent where the entangled and separable bounds coincide.
    nu_crit: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    partitions: Vec<PartitionValue>,
}

fn render_bounds(a: &BoundsArgs, format: Format) -> CliResult<String> {
    let grid = parse_omega_grid(&a.omega)?;
    let parts = match &a.partitions {
        Some(s) => parse_partitions(s, a.n, integer_partitions)?,
        None => Vec::new(),
    };
    let rows = grid
        .iter()
        .map(|&w| {
            let partitions = parts
                .iter()
                .map(|p| {
                    Ok(PartitionValue {
                        partition: p.clone(),
                        bound: partition_bound(w, p)?.value,
                    })
                })
                .collect::<crate::Result<Vec<_>>>()?;
            Ok(BoundsRow {
                n: a.n,
                omega: w,
                p_ent: p_ent(w, a.n)?,
                p_sep: p_sep(w, a.n)?,
                nu_crit: nu_crit(w, a.n).ok(),
                partitions,
            })
        })
        .collect::<crate::Result<Vec<_>>>()?;
    Ok(match format {
        Format::Json if rows.len() == 1 => to_json(&rows[0]),
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut header = vec!["n".to_string(), "omega".into(), "p_ent".into(), "p_sep".into(), "nu_crit".into()];
            header.extend(parts.iter().map(|p| format!("p_{{{p}}}")));
            let mut out = csv_row(&header);
            for r in &rows {
                let mut cells = vec![
                    r.n.to_string(),
                    format_number(r.omega),
                    format_number(r.p_ent),
                    format_number(r.p_sep),
                    r.nu_crit.map(format_number).unwrap_or_default(),
                ];
                cells.extend(r.partitions.iter().map(|p| format_number(p.bound)));
                out.push_str(&csv_row(&cells));
            }
            out
        }
    })
}

fn render_sweep(a: &SweepArgs, format: Format) -> CliResult<String> {
    let grid = parse_omega_grid(&a.omega)?;
    let parts = parse_partitions(&a.partitions, a.n, intermediate_partitions)?;
    let curves = sweep(a.n, &grid, &parts)?;
    Ok(match format {
        Format::Json => to_json(&json!({ "n": a.n, "omega": grid, "curves": curves })),
        Format::Csv => {
            let mut header = vec!["omega".to_string()];
            header.extend(curves.iter().map(|c| c.column()));
            let mut out = csv_row(&header);
            for (i, &w) in grid.iter().enumerate() {
                let mut cells = vec![format_number(w)];
                cells.extend(curves.iter().map(|c| format_number(c.values[i])));
                out.push_str(&csv_row(&cells));
            }
            out
        }
    })
}

fn render_certify(a: &CertifyArgs, format: Format) -> CliResult<String> {
    let verdict = Certifier::new(a.margin)?.certify(a.n, a.omega, a.ps)?;
    Ok(match format {
        Format::Json => to_json(&verdict),
        Format::Csv => {
            let header = ["n", "omega", "observed_ps", "depth_lower_bound", "gme", "excluded_partitions"]
                .map(String::from);
            let excluded: Vec<String> = verdict
                .excluded_partitions
                .iter()
                .map(|e| e.partition.label())
                .collect();
            csv_row(&header)
                + &csv_row(&[
                    verdict.n.to_string(),
                    format_number(verdict.omega),
                    format_number(verdict.observed_ps),
                    verdict.depth_lower_bound.to_string(),
                    verdict.gme.to_string(),
                    excluded.join(" "),
                ])
        }
    })
}

#[derive(Serialize)]
struct OracleRow {
    n: usize,
    omega: f64,
    structure: PartitionSpec,
    best_value: f64,
    closed_form_bound: f64,
    per_restart_values: Vec<f64>,
    converged: bool,
    iterations_used: usize,
    seed: u64,
}

fn render_oracle(a: &OracleArgs, format: Format) -> CliResult<String> {
    let grid = parse_omega_grid(&a.omega)?;
    let structures = match &a.partitions {
        Some(s) => parse_partitions(s, a.n, integer_partitions)?,
        None => vec![PartitionSpec::full(a.n)?],
    };
    let mut rows = Vec::new();
    for structure in &structures {
        for &w in &grid {
            let config = SeesawConfig {
                restarts: a.restarts,
                max_iters: a.max_iters,
                tol: a.tol,
                seed: a.seed,
                ..SeesawConfig::new(w, structure.clone())
            };
            let report = seesaw(&config)?;
            rows.push(OracleRow {
                n: a.n,
                omega: w,
                structure: structure.clone(),
                best_value: report.best_value,
                closed_form_bound: partition_bound(w, structure)?.value,
                per_restart_values: report.per_restart_values,
                converged: report.converged,
                iterations_used: report.iterations_used,
                seed: a.seed,
            });
        }
    }
    Ok(match format {
        Format::Json if rows.len() == 1 => to_json(&rows[0]),
        Format::Json => to_json(&rows),
        Format::Csv => {
            let header = ["n", "omega", "structure", "best_value", "closed_form_bound", "converged", "iterations_used"]
                .map(String::from);
            let mut out = csv_row(&header);
            for r in &rows {
                out.push_str(&csv_row(&[
                    r.n.to_string(),
                    format_number(r.omega),
                    r.structure.label(),
                    format_number(r.best_value),
                    format_number(r.closed_form_bound),
                    r.converged.to_string(),
                    r.iterations_used.to_string(),
                ]));
            }
            out
        }
    })
}

#[derive(Serialize)]
struct ScanRow {
    omega: f64,
    a_star: f64,
    p_star: f64,
}

fn render_scan_a(a: &ScanAArgs, format: Format) -> CliResult<String> {
    let rows = parse_omega_grid(&a.omega)?
        .into_iter()
        .map(|w| {
            let (a_star, p_star) = scan_a(w, a.grid)?;
            Ok(ScanRow {
                omega: w,
                a_star,
                p_star,
            })
        })
        .collect::<crate::Result<Vec<_>>>()?;
    Ok(match format {
        Format::Json if rows.len() == 1 => to_json(&rows[0]),
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut out = String::from("omega,a_star,p_star\n");
            for r in &rows {
                let _ = writeln!(
                    out,
                    "{},{},{}",
                    format_number(r.omega),
                    format_number(r.a_star),
                    format_number(r.p_star)
                );
            }
            out
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("entdepth").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn number_formatting() {
        assert_eq!(format_number(0.0), "0");
        assert_eq!(format_number(0.75), "0.75");
        assert_eq!(format_number(1.0), "1");
        assert_eq!(format_number(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_number(0.0625), "0.0625");
        assert_eq!(format_number(1.5e-7), "1.5e-07");
        assert_eq!(format_number(123456789012345.0), "1.23456789012e+14");
        assert_eq!(format_number(0.99999999999999), "1");
        assert_eq!(format_number(-2.5), "-2.5");
    }

    #[test]
    fn omega_grids() {
        assert_eq!(parse_omega_grid("0.25").unwrap(), vec![0.25]);
        let g = parse_omega_grid("0:0.9375:64").unwrap();
        assert_eq!(g.len(), 64);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[63], 0.9375);
        assert_eq!(parse_omega_grid("0.5:0.5:1").unwrap(), vec![0.5]);
        assert!(parse_omega_grid("0:1:0").is_err());
        assert!(parse_omega_grid("0:1").is_err());
        assert!(parse_omega_grid("x").is_err());
    }

    #[test]
    fn partition_lists() {
        let all = parse_partitions("all", 4, integer_partitions).unwrap();
        assert_eq!(all.len(), 5);
        let two = parse_partitions("1,3;2,2", 4, integer_partitions).unwrap();
        assert_eq!(two.len(), 2);
        assert!(parse_partitions("1,2", 4, integer_partitions).is_err());
        assert!(parse_partitions("1|3", 4, integer_partitions).is_err());
    }

    #[test]
    fn bounds_example() {
        let out = render(&cli(&["bounds", "--n", "2", "--omega", "0.25"])).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!((v["p_ent"].as_f64().unwrap() - 0.75).abs() < 1e-12);
        assert!((v["p_sep"].as_f64().unwrap() - 0.706650).abs() < 1e-6);
        assert!((v["nu_crit"].as_f64().unwrap() - 0.9133).abs() < 1e-4);
    }

    #[test]
    fn sweep_header() {
        let out = render(&cli(&["sweep", "--n", "4", "--omega", "0:0.9375:64", "--partitions", "all"])).unwrap();
        let mut lines = out.lines();
        assert_eq!(lines.next().unwrap(), "omega,p_ent,p_{1|3},p_{2|2},p_{1|1|2},p_sep");
        assert_eq!(lines.count(), 64);
        assert!(!out.contains('\r'));
    }

    #[test]
    fn certify_exit_codes() {
        let out = render(&cli(&["certify", "--n", "2", "--omega", "0.25", "--ps", "0.72"])).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["gme"], true);
        let err = render(&cli(&["certify", "--n", "2", "--omega", "0.25", "--ps", "0.9"])).unwrap_err();
        assert_eq!(err.exit_code(), EXIT_INCONSISTENT);
        let err = render(&cli(&["certify", "--n", "20", "--omega", "0.25", "--ps", "0.1"])).unwrap_err();
        assert_eq!(err.exit_code(), EXIT_VALIDATION);
        let err = render(&cli(&["sweep", "--n", "4", "--omega", "0.2", "--partitions", "1;3"])).unwrap_err();
        assert_eq!(err.exit_code(), EXIT_VALIDATION);
    }

    #[test]
    fn scan_a_csv() {
        let out = render(&cli(&["scan-a", "--omega", "0.3", "--format", "csv"])).unwrap();
        let row: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(row[0], "0.3");
        assert!((row[1].parse::<f64>().unwrap() - 0.1).abs() < 1e-6);
    }

    #[test]
    fn oracle_json() {
        let out = render(&cli(&["oracle", "--n", "2", "--omega", "0.3", "--restarts", "2"])).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let best = v["best_value"].as_f64().unwrap();
        assert!((best - v["closed_form_bound"].as_f64().unwrap()).abs() < 1e-6);
        assert_eq!(v["structure"], serde_json::json!([2]));
    }
}
