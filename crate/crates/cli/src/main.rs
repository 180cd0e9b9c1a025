//! `mindisp`: build diagonal low-dispersion configurations, tabulate the
//! cardinality step function, run the exact dispersion oracle on CSV point
//! sets, and drive the verification suites.
//!
//! Exit codes: 0 success, 2 invalid input, 3 verification failure, 4 oracle
//! budget exceeded.

mod formats;
mod svg;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mindisp_core::checks::{self, CheckOutcome};
use mindisp_core::{
    cardinality_iterative, dispersion_with_budget, Error, Scalar, DEFAULT_ORACLE_BUDGET,
    DiagonalConfig,
};

const BUDGET_ENV: &str = "MINDISP_ORACLE_BUDGET";

#[derive(Parser)]
#[command(
    name = "mindisp",
    version,
    about = "Diagonal low-dispersion point configurations and an exact empty-box dispersion oracle",
    after_help = "Volumes are written as an exact fraction (1/3), a decimal (0.3), or R<k> for \
                  the k-th breakpoint of the step function (e.g. R12)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Table,
    Svg,
}

#[derive(Subcommand)]
enum Command {
    /// Build the diagonal configuration for volume r in dimension d
    Construct {
        /// Volume parameter in (1/4, 1/2]
        #[arg(long)]
        r: String,
        /// Ambient dimension
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// Output file (stdout when absent)
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Additionally write a unit-square SVG plot (planar projection)
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Comparison tolerance for decimal inputs
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Tabulate the step function r -> configuration size over [R_MIN, R_MAX]
    Scan {
        r_min: String,
        r_max: String,
        steps: u32,
        /// Output CSV file (stdout when absent)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Additionally write an SVG step plot with breakpoint markers
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Exact dispersion of the point set in a CSV file
    Dispersion {
        /// Input CSV with header x1,...,xd; cells are fractions or decimals
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Comparison tolerance for decimal inputs
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Run a named verification suite (see `verify list`)
    Verify {
        /// Suite name, or "all", or "list" to enumerate suites
        suite: String,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(match err {
                Error::BudgetExceeded { .. } => 4,
                Error::Internal(_) => 1,
                _ => 2,
            })
        }
    }
}

fn write_output(path: Option<&Path>, content: &str) -> Result<(), Error> {
    match path {
        Some(p) => fs::write(p, content)
            .map_err(|e| Error::Internal(format!("writing {}: {e}", p.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn oracle_budget() -> u128 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_ORACLE_BUDGET)
}

fn run(command: Command) -> Result<u8, Error> {
    match command {
        Command::Construct {
            r,
            d,
            out,
            format,
            svg,
            tol,
        } => cmd_construct(&r, d, out.as_deref(), format, svg.as_deref(), tol),
        Command::Scan {
            r_min,
            r_max,
            steps,
            out,
            svg,
        } => cmd_scan(&r_min, &r_max, steps, out.as_deref(), svg.as_deref()),
        Command::Dispersion { input, format, tol } => cmd_dispersion(&input, format, tol),
        Command::Verify { suite, format } => cmd_verify(&suite, format),
    }
}

fn cmd_construct(
    r: &str,
    d: usize,
    out: Option<&Path>,
    format: Format,
    svg_path: Option<&Path>,
    tol: Option<f64>,
) -> Result<u8, Error> {
    let volume = formats::parse_scalar(r, tol)?;
    let config = DiagonalConfig::new(&volume, d)?;
    let card = cardinality_iterative(&volume)?;
    let rows: Vec<Vec<Scalar>> = config
        .values()
        .iter()
        .map(|v| vec![v.clone(); d])
        .collect();
    let content = match format {
        Format::Csv => formats::points_to_csv(d, &rows),
        Format::Json => {
            let oracle = dispersion_with_budget(&config.point_set(), oracle_budget());
            let oracle = match oracle {
                Ok(res) => Some(res),
                Err(Error::BudgetExceeded { estimate, budget }) => {
                    eprintln!(
                        "note: skipping oracle dispersion (estimate {estimate} > budget {budget})"
                    );
                    None
                }
                Err(other) => return Err(other),
            };
            let mut text = formats::construct_report_json(&card, oracle.as_ref())?;
            text.push('\n');
            text
        }
        Format::Table => {
            let mut text = format!(
                "r = {volume}\npoints = {}\nvalues:\n",
                config.cardinality()
            );
            for v in config.values() {
                text.push_str(&format!("  {v}\n"));
            }
            text
        }
        Format::Svg => plot_config(&config),
    };
    write_output(out, &content)?;
    if let Some(path) = svg_path {
        write_output(Some(path), &plot_config(&config))?;
    }
    Ok(0)
}

fn plot_config(config: &DiagonalConfig) -> String {
    let values: Vec<f64> = config.values().iter().map(Scalar::to_f64).collect();
    svg::config_plot(&values, &config.r().to_string())
}

fn cmd_scan(
    r_min: &str,
    r_max: &str,
    steps: u32,
    out: Option<&Path>,
    svg_path: Option<&Path>,
) -> Result<u8, Error> {
    let lo = formats::parse_scalar(r_min, None)?.to_f64();
    let hi = formats::parse_scalar(r_max, None)?.to_f64();
    if !(0.25 < lo && lo < hi && hi <= 0.5) {
        return Err(Error::Domain(format!(
            "need 1/4 < r_min < r_max <= 1/2, got [{lo}, {hi}]"
        )));
    }
    if steps < 1 {
        return Err(Error::Domain("need at least one step".into()));
    }
    let mut samples = Vec::with_capacity(steps as usize + 1);
    for i in 0..=steps {
        let r = lo + f64::from(i) * (hi - lo) / f64::from(steps);
        let count = cardinality_iterative(&Scalar::approx(r))?.count;
        samples.push((r, count));
    }
    write_output(out, &formats::scan_to_csv(&samples))?;
    if let Some(path) = svg_path {
        let k_hi = samples.first().map(|&(_, k)| k).unwrap_or(1);
        let mut breakpoints = Vec::new();
        for k in 1..=k_hi {
            let bp = mindisp_core::breakpoint_closed_form(k)?.to_f64();
            breakpoints.push((k, bp));
        }
        write_output(Some(path), &svg::step_plot(lo, hi, &breakpoints))?;
    }
    Ok(0)
}

fn cmd_dispersion(input: &Path, format: Format, tol: Option<f64>) -> Result<u8, Error> {
    let text = fs::read_to_string(input)
        .map_err(|e| Error::Parse(format!("reading {}: {e}", input.display())))?;
    let set = formats::parse_points_csv(&text, tol)?;
    let result = dispersion_with_budget(&set, oracle_budget())?;
    match format {
        Format::Json => {
            let mut text = formats::dispersion_json(&result)?;
            text.push('\n');
            print!("{text}");
        }
        _ => {
            println!("points = {}, dimension = {}", set.len(), set.dimension());
            println!("dispersion = {}", result.value);
            println!("witness = {}", formats::box_display(&result.witness));
        }
    }
    Ok(0)
}

fn print_outcome(outcome: &CheckOutcome) {
    let status = if outcome.passed { "PASS" } else { "FAIL" };
    println!("{status} {}", outcome.name);
    for line in &outcome.details {
        println!("    {line}");
    }
    for line in &outcome.failures {
        println!("    FAILURE: {line}");
    }
}

fn cmd_verify(suite: &str, format: Format) -> Result<u8, Error> {
    if suite == "list" {
        for name in checks::CHECK_NAMES {
            println!("{name}");
        }
        println!("all");
        return Ok(0);
    }
    let outcomes: Vec<CheckOutcome> = if suite == "all" {
        checks::CHECK_NAMES
            .iter()
            .map(|name| checks::run_named(name).expect("catalog names resolve"))
            .collect::<Result<_, _>>()?
    } else {
        match checks::run_named(suite) {
            Some(outcome) => vec![outcome?],
            None => {
                return Err(Error::Domain(format!(
                    "unknown suite {suite:?}; try `mindisp verify list`"
                )))
            }
        }
    };
    let all_passed = outcomes.iter().all(|o| o.passed);
    if !all_passed {
        // failure report is always machine-readable
        let failed: Vec<&CheckOutcome> = outcomes.iter().filter(|o| !o.passed).collect();
        let report = serde_json::to_string_pretty(&failed)
            .map_err(|e| Error::Internal(format!("report serialization: {e}")))?;
        println!("{report}");
        return Ok(3);
    }
    match format {
        Format::Json => {
            let report = serde_json::to_string_pretty(&outcomes)
                .map_err(|e| Error::Internal(format!("report serialization: {e}")))?;
            println!("{report}");
        }
        _ => {
            for outcome in &outcomes {
                print_outcome(outcome);
            }
        }
    }
    Ok(0)
}
