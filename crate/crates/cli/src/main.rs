//! `heisweyl` — reproducible spectral reports for compact quotients of the
//! Heisenberg group.
//!
//! Subcommands: `quotient` (geometry summary), `enumerate` (exact merged
//! spectrum), `count` (counting-function rows), `heat` (heat-trace sweep),
//! `constant` (Weyl constant), `verify` (end-to-end Weyl-law check with an
//! optional SVG chart and heat cross-check).
//!
//! Exit codes: 0 success, 2 validation failure, 3 resource budget exceeded,
//! 4 verification threshold not met. Identical flags produce byte-identical
//! output.

use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

use heisweyl::exact::{format_rational, parse_rational, rational_to_f64};
use heisweyl::export::{self, Cell, Table};
use heisweyl::quotient::QuotientGeometry;
use heisweyl::spectrum::{
    count_total, enumerate_spectrum, spectral_unit, DEFAULT_BUDGET,
};
use heisweyl::weyl::{convergence_report, scaled_trace_limit, weyl_constant};
use heisweyl::{forms, heat, Error, FormDegree, Threshold};

#[derive(Parser)]
#[command(
    name = "heisweyl",
    version,
    about = "Exact spectra and Weyl-law verification on compact Heisenberg manifolds",
    max_term_width = 100
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Write the report to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Enumeration budget (counting/enumeration steps).
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,

    /// Relative tolerance for quadrature and heat-trace truncation.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// Quotient geometry flags shared by every subcommand that needs one.
#[derive(Args)]
struct GeometryArgs {
    /// Complex dimension d >= 1 of the horizontal directions.
    #[arg(long, default_value_t = 1)]
    d: u32,

    /// Divisibility chain ell_1|ell_2|...|ell_d, comma-separated.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    ell: Vec<u64>,

    /// Center parameter c > 0, as an integer or "num/den".
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    c: String,
}

impl GeometryArgs {
    fn build(&self) -> Result<QuotientGeometry, Error> {
        QuotientGeometry::new(self.d, self.ell.clone(), parse_rational(&self.c)?)
    }
}

/// Configuration echo for a geometry, in canonical spelling.
fn geometry_config(q: &QuotientGeometry) -> Vec<(String, String)> {
    vec![
        ("d".into(), q.d().to_string()),
        (
            "ell".into(),
            q.ell()
                .iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(","),
        ),
        ("c".into(), format_rational(q.c())),
    ]
}

fn float_list(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| format!("{v}"))
        .collect::<Vec<_>>()
        .join(",")
}

#[derive(Subcommand)]
enum Command {
    /// Print the geometry summary: L, volume, spectral unit, lattices.
    Quotient(QuotientArgs),
    /// Enumerate the exact merged spectrum up to a threshold.
    Enumerate(EnumerateArgs),
    /// Counting-function rows N(lambda) = N_a + N_b at given thresholds.
    Count(CountArgs),
    /// Heat-trace sweep: G(t) and the Karamata scaling t^(d+1)G(t).
    Heat(HeatArgs),
    /// The Weyl constant C(d, alpha) by certified quadrature.
    Constant(ConstantArgs),
    /// End-to-end Weyl-law verification across decades of lambda.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct QuotientArgs {
    #[command(flatten)]
    geometry: GeometryArgs,
}

#[derive(Args)]
#[command(group = ArgGroup::new("threshold").required(true).args(["lambda_max", "units_max"]))]
struct EnumerateArgs {
    #[command(flatten)]
    geometry: GeometryArgs,

    /// Spectral coefficient alpha in [-d, d], integer or "num/den".
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    alpha: String,

    /// Absolute eigenvalue threshold.
    #[arg(long)]
    lambda_max: Option<f64>,

    /// Exact threshold in spectral units u = pi/(2c), integer or "num/den".
    #[arg(long)]
    units_max: Option<String>,
}

#[derive(Args)]
#[command(group = ArgGroup::new("coupling").required(true).args(["alpha", "forms"]))]
#[command(group = ArgGroup::new("thresholds").required(true).args(["lambda", "units"]))]
struct CountArgs {
    #[command(flatten)]
    geometry: GeometryArgs,

    /// Spectral coefficient alpha in [-d, d], integer or "num/den".
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,

    /// Count the Kohn Laplacian on (p,q)-forms instead of a scalar operator.
    #[arg(long, value_delimiter = ',', value_name = "P,Q")]
    forms: Option<Vec<u32>>,

    /// Absolute eigenvalue thresholds, comma-separated; rows keep this order.
    #[arg(long, value_delimiter = ',')]
    lambda: Option<Vec<f64>>,

    /// Exact thresholds in spectral units, comma-separated rationals.
    #[arg(long, value_delimiter = ',')]
    units: Option<Vec<String>>,
}

#[derive(Args)]
struct HeatArgs {
    #[command(flatten)]
    geometry: GeometryArgs,

    /// Spectral coefficient alpha in [-d, d], integer or "num/den".
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    alpha: String,

    /// Heat times, comma-separated; evaluated in ascending order.
    #[arg(long, value_delimiter = ',', required = true)]
    t: Vec<f64>,
}

#[derive(Args)]
struct ConstantArgs {
    /// Complex dimension d >= 1.
    #[arg(long, default_value_t = 1)]
    d: u32,

    /// Spectral coefficient alpha in [-d, d], integer or "num/den".
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    alpha: String,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    geometry: GeometryArgs,

    /// Spectral coefficient alpha in [-d, d], integer or "num/den".
    #[arg(long, allow_hyphen_values = true)]
    alpha: String,

    /// Decade range A:B (A < B): lambda runs over 10^A, 10^(A+1), ..., 10^B.
    #[arg(long, value_name = "A:B")]
    lambda_decades: String,

    /// Write the convergence chart to this SVG file.
    #[arg(long, value_name = "PATH")]
    svg: Option<PathBuf>,

    /// Append a heat-trace cross-check at these times (comma-separated).
    #[arg(long, value_delimiter = ',', value_name = "T,T,...")]
    heat: Option<Vec<f64>>,

    /// Verification passes when the final |rel_error| is below this.
    #[arg(long, default_value_t = 0.05)]
    pass_threshold: f64,
}

/// A finished run: the report text, an optional SVG side artifact, and the
/// verification verdict (None for non-verify commands).
struct Outcome {
    report: String,
    svg: Option<(PathBuf, String)>,
    verify_failure: Option<String>,
}

impl Outcome {
    fn report_only(report: String) -> Self {
        Outcome {
            report,
            svg: None,
            verify_failure: None,
        }
    }
}

enum CliError {
    Lib(Error),
    Usage(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Usage(msg) => write!(f, "{msg}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Lib(e) => {
                if e.is_resource() {
                    3
                } else {
                    2
                }
            }
        }
    }
}

fn render(table: &Table, format: Format) -> String {
    match format {
        Format::Csv => table.to_csv(),
        Format::Json => {
            let mut s = table.to_json();
            s.push('\n');
            s
        }
    }
}

fn cmd_quotient(args: &QuotientArgs) -> Result<Table, CliError> {
    let q = args.geometry.build()?;
    let mut config = vec![("command".to_string(), "quotient".to_string())];
    config.extend(geometry_config(&q));
    let mut table = Table::new(config, vec!["property", "value"]);
    table.push_row(vec![
        Cell::Text("L".into()),
        Cell::Count(q.ell_product().clone()),
    ]);
    table.push_row(vec![
        Cell::Text("volume".into()),
        Cell::Text(format_rational(q.volume())),
    ]);
    table.push_row(vec![
        Cell::Text("volume_float".into()),
        Cell::Float(q.volume_f64()),
    ]);
    table.push_row(vec![
        Cell::Text("spectral_unit".into()),
        Cell::Float(spectral_unit(&q)),
    ]);
    let diag_tokens = |diag: &[_]| {
        diag.iter()
            .map(format_rational)
            .collect::<Vec<_>>()
            .join("|")
    };
    table.push_row(vec![
        Cell::Text("lattice_diag".into()),
        Cell::Text(diag_tokens(q.projected_lattice().diag())),
    ]);
    table.push_row(vec![
        Cell::Text("dual_lattice_diag".into()),
        Cell::Text(diag_tokens(q.dual_lattice().diag())),
    ]);
    Ok(table)
}

fn cmd_enumerate(args: &EnumerateArgs, budget: u64) -> Result<Table, CliError> {
    let q = args.geometry.build()?;
    let alpha = parse_rational(&args.alpha)?;
    let mut config = vec![("command".to_string(), "enumerate".to_string())];
    config.extend(geometry_config(&q));
    config.push(("alpha".into(), format_rational(&alpha)));
    let thr = match (&args.lambda_max, &args.units_max) {
        (Some(lambda), None) => {
            config.push(("lambda_max".into(), format!("{lambda}")));
            Threshold::from_absolute(*lambda, q.c())?
        }
        (None, Some(units)) => {
            let units = parse_rational(units)?;
            config.push(("units_max".into(), format_rational(&units)));
            Threshold::from_units(units)?
        }
        _ => unreachable!("clap group enforces exactly one threshold flag"),
    };
    config.push(("budget".into(), budget.to_string()));
    let records = enumerate_spectrum(&q, &alpha, &thr, budget)?;
    Ok(export::spectrum_table(config, &records))
}

fn count_thresholds(args: &CountArgs, q: &QuotientGeometry) -> Result<Vec<Threshold>, CliError> {
    match (&args.lambda, &args.units) {
        (Some(lambdas), None) => lambdas
            .iter()
            .map(|l| Threshold::from_absolute(*l, q.c()).map_err(CliError::from))
            .collect(),
        (None, Some(units)) => units
            .iter()
            .map(|s| {
                Threshold::from_units(parse_rational(s)?).map_err(CliError::from)
            })
            .collect(),
        _ => unreachable!("clap group enforces exactly one threshold flag"),
    }
}

fn cmd_count(args: &CountArgs, budget: u64) -> Result<Table, CliError> {
    let q = args.geometry.build()?;
    let mut config = vec![("command".to_string(), "count".to_string())];
    config.extend(geometry_config(&q));

    let thresholds = count_thresholds(args, &q)?;
    match (&args.lambda, &args.units) {
        (Some(lambdas), None) => config.push(("lambda".into(), float_list(lambdas))),
        (None, Some(units)) => {
            let canonical = units
                .iter()
                .map(|s| parse_rational(s).map(|r| format_rational(&r)))
                .collect::<Result<Vec<_>, _>>()?
                .join(",");
            config.push(("units".into(), canonical));
        }
        _ => unreachable!(),
    }

    match (&args.alpha, &args.forms) {
        (Some(alpha), None) => {
            let alpha = parse_rational(alpha)?;
            config.push(("alpha".into(), format_rational(&alpha)));
            config.push(("budget".into(), budget.to_string()));
            let rows = thresholds
                .iter()
                .map(|thr| count_total(&q, &alpha, thr, budget))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(export::count_table(config, &rows))
        }
        (None, Some(pq)) => {
            if pq.len() != 2 {
                return Err(CliError::Usage(format!(
                    "--forms expects exactly two values P,Q, got {}",
                    pq.len()
                )));
            }
            let deg = FormDegree::new(q.d(), pq[0], pq[1])?;
            config.push(("budget".into(), budget.to_string()));
            let rows = thresholds
                .iter()
                .map(|thr| forms::box_b_count(&q, &deg, thr, budget))
                .collect::<Result<Vec<_>, _>>()?;
            // Scalar schema plus the bidegree columns.
            let mut table = Table::new(
                config,
                vec!["lambda", "N_a", "N_b", "N", "ratio", "p", "q"],
            );
            for row in &rows {
                table.push_row(vec![
                    Cell::Float(row.lambda),
                    Cell::Count(row.n_a.clone()),
                    Cell::Count(row.n_b.clone()),
                    Cell::Count(row.n_total.clone()),
                    Cell::Float(row.normalized_ratio),
                    Cell::Text(deg.p().to_string()),
                    Cell::Text(deg.q().to_string()),
                ]);
            }
            Ok(table)
        }
        _ => unreachable!("clap group enforces exactly one coupling flag"),
    }
}

/// Ascending, deduplicated copy of a user-supplied time list.
fn ascending_times(times: &[f64]) -> Vec<f64> {
    let mut ts = times.to_vec();
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    ts
}

fn cmd_heat(args: &HeatArgs, tol: f64) -> Result<Table, CliError> {
    let q = args.geometry.build()?;
    let alpha = parse_rational(&args.alpha)?;
    let ts = ascending_times(&args.t);
    let mut config = vec![("command".to_string(), "heat".to_string())];
    config.extend(geometry_config(&q));
    config.push(("alpha".into(), format_rational(&alpha)));
    config.push(("t".into(), float_list(&ts)));
    config.push(("tol".into(), format!("{tol}")));
    let points = heat::scaled_trace_sequence(&q, rational_to_f64(&alpha), &ts, tol)?;
    Ok(export::heat_table(config, &points))
}

fn cmd_constant(args: &ConstantArgs, tol: f64) -> Result<Table, CliError> {
    let alpha = parse_rational(&args.alpha)?;
    let config = vec![
        ("command".to_string(), "constant".to_string()),
        ("d".into(), args.d.to_string()),
        ("alpha".into(), format_rational(&alpha)),
        ("tol".into(), format!("{tol}")),
    ];
    let constant = weyl_constant(args.d, rational_to_f64(&alpha), tol)?;
    Ok(export::constant_table(config, &[constant]))
}

fn parse_decades(spec: &str) -> Result<(i32, i32), CliError> {
    let bad = || {
        CliError::Usage(format!(
            "--lambda-decades expects \"A:B\" with integers A < B, got {spec:?}"
        ))
    };
    let (a, b) = spec.split_once(':').ok_or_else(bad)?;
    let a: i32 = a.trim().parse().map_err(|_| bad())?;
    let b: i32 = b.trim().parse().map_err(|_| bad())?;
    if a >= b {
        return Err(bad());
    }
    Ok((a, b))
}

fn cmd_verify(
    args: &VerifyArgs,
    format: Format,
    budget: u64,
    tol: f64,
) -> Result<Outcome, CliError> {
    if !(args.pass_threshold.is_finite() && args.pass_threshold > 0.0) {
        return Err(CliError::Usage(
            "--pass-threshold must be a positive number".into(),
        ));
    }
    let q = args.geometry.build()?;
    let alpha = parse_rational(&args.alpha)?;
    let (first, last) = parse_decades(&args.lambda_decades)?;
    let grid: Vec<f64> = (first..=last).map(|k| 10f64.powi(k)).collect();

    let mut config = vec![("command".to_string(), "verify".to_string())];
    config.extend(geometry_config(&q));
    config.push(("alpha".into(), format_rational(&alpha)));
    config.push(("lambda_decades".into(), format!("{first}:{last}")));
    config.push(("pass_threshold".into(), format!("{}", args.pass_threshold)));
    config.push(("budget".into(), budget.to_string()));
    config.push(("tol".into(), format!("{tol}")));

    let rows = convergence_report(&q, &alpha, &grid, tol, budget)?;
    let table = export::convergence_table(config.clone(), &rows);

    // Optional Karamata cross-check: scaled heat traces approach
    // (d+1)!·C(d,alpha)·vol, recorded as `karamata_limit` in the section
    // configuration.
    let heat_section = match &args.heat {
        Some(times) => {
            let ts = ascending_times(times);
            let alpha_f = rational_to_f64(&alpha);
            let points = heat::scaled_trace_sequence(&q, alpha_f, &ts, tol)?;
            let limit = scaled_trace_limit(&q, alpha_f, tol)?;
            let mut heat_config = vec![("section".to_string(), "heat".to_string())];
            heat_config.push(("t".into(), float_list(&ts)));
            heat_config.push(("karamata_limit".into(), format!("{limit}")));
            Some(export::heat_table(heat_config, &points))
        }
        None => None,
    };

    let report = match (format, &heat_section) {
        (Format::Csv, None) => table.to_csv(),
        (Format::Csv, Some(heat_table)) => {
            format!("{}\n{}", table.to_csv(), heat_table.to_csv())
        }
        (Format::Json, None) => {
            let mut s = table.to_json();
            s.push('\n');
            s
        }
        (Format::Json, Some(heat_table)) => {
            let mut root = table.to_json_value();
            root.as_object_mut()
                .expect("table JSON is an object")
                .insert("heat".into(), heat_table.to_json_value());
            let mut s = root.to_string();
            s.push('\n');
            s
        }
    };

    let svg = args.svg.as_ref().map(|path| {
        let title = format!(
            "N(lambda)/lambda^{} on d={}, ell={}, c={}, alpha={}",
            q.d() + 1,
            q.d(),
            q.ell()
                .iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(","),
            format_rational(q.c()),
            format_rational(&alpha)
        );
        (path.clone(), export::convergence_svg(&title, &rows))
    });

    let final_row = rows.last().expect("decade grid is nonempty");
    let verify_failure = if final_row.rel_error.abs() < args.pass_threshold {
        None
    } else {
        Some(format!(
            "verification failed: final |rel_error| = {:e} at lambda = {} is not below the pass threshold {:e}",
            final_row.rel_error.abs(),
            final_row.lambda,
            args.pass_threshold
        ))
    };

    Ok(Outcome {
        report,
        svg,
        verify_failure,
    })
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Quotient(args) => Ok(Outcome::report_only(render(
            &cmd_quotient(args)?,
            cli.format,
        ))),
        Command::Enumerate(args) => Ok(Outcome::report_only(render(
            &cmd_enumerate(args, cli.budget)?,
            cli.format,
        ))),
        Command::Count(args) => Ok(Outcome::report_only(render(
            &cmd_count(args, cli.budget)?,
            cli.format,
        ))),
        Command::Heat(args) => Ok(Outcome::report_only(render(
            &cmd_heat(args, cli.tol)?,
            cli.format,
        ))),
        Command::Constant(args) => Ok(Outcome::report_only(render(
            &cmd_constant(args, cli.tol)?,
            cli.format,
        ))),
        Command::Verify(args) => cmd_verify(args, cli.format, cli.budget, cli.tol),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli) {
        Ok(outcome) => outcome,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };

    if let Some((path, svg)) = &outcome.svg {
        if let Err(e) = fs::write(path, svg) {
            eprintln!("error: cannot write SVG to {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    match &cli.out {
        Some(path) => {
            if let Err(e) = fs::write(path, &outcome.report) {
                eprintln!("error: cannot write report to {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{}", outcome.report),
    }

    match &outcome.verify_failure {
        Some(message) => {
            eprintln!("{message}");
            ExitCode::from(4)
        }
        None => ExitCode::SUCCESS,
    }
}
