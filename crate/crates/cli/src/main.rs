//! `resolvent`: bound reports, sweep tables and seeded verification runs.
//!
//! Exit codes: 0 success, 1 verification failure or numerical error,
//! 2 usage or parse error, 3 I/O error.

mod literal;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use resolvent_core::blaschke::Spectrum;
use resolvent_core::linalg::inverse;
use resolvent_core::model_operator::{model_matrix, resolvent_closed_form, ResolventQuery};
use resolvent_core::toeplitz_norm::{x_beta_norm_with_root, BoundReport, XBetaSpec};
use resolvent_core::verifier::{
    verify_boundary_max, verify_dominance, verify_extremal, BoundaryConfig, TrialConfig, TrialReport,
};
use resolvent_core::{Complex64, ComplexMatrix, Error};

use render::{bound_record, csv_table, g15, human_pairs, human_table, BOUND_COLUMNS};

#[derive(Parser)]
#[command(name = "resolvent", version, about = "Resolvent bounds for contractions with bounded spectral radius")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact supremum and reference bounds for one (n, r)
    Bound {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Bound reports over the product of comma-separated n and r lists
    Table {
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        r: Vec<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Norm of the Toeplitz matrix X_β with the root it came from
    Xnorm {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        beta: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Seeded randomized checks of the bounds
    Verify {
        #[arg(value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: f64,
        /// Random trials; for `boundary`, the number of random model matrices
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Model matrix of a spectrum and its closed-form resolvent at ζ
    Model {
        /// Comma-separated complex literals, e.g. `0.5,-0.1+0.2i`
        #[arg(long, required = true, value_delimiter = ',', allow_hyphen_values = true, value_parser = literal::parse_complex)]
        sigma: Vec<Complex64>,
        #[arg(long, allow_hyphen_values = true, value_parser = literal::parse_complex)]
        zeta: Complex64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Human,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Suite {
    Extremal,
    Dominance,
    Boundary,
    All,
}

enum Failure {
    Usage(String),
    Numerical(String),
    Io(String),
    /// Rendered output is still written before exiting.
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_) | Error::Domain(_) | Error::Dimension(_) => Self::Usage(e.to_string()),
            _ => Self::Numerical(e.to_string()),
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

fn csv_text<I, R>(header: &[&str], rows: I) -> Result<String, Failure>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    csv_table(header, rows).map_err(|e| Failure::Io(e.to_string()))
}

fn render_bounds(reports: &[BoundReport], format: Format, single: bool) -> Result<String, Failure> {
    Ok(match format {
        Format::Json if single => json(&reports[0]),
        Format::Json => json(&reports),
        Format::Csv => csv_text(&BOUND_COLUMNS, reports.iter().map(bound_record))?,
        Format::Human if single => {
            let row = bound_record(&reports[0]);
            let pairs: Vec<(&str, String)> = BOUND_COLUMNS.iter().copied().zip(row).collect();
            human_pairs(&pairs)
        }
        Format::Human => {
            let rows: Vec<Vec<String>> = reports.iter().map(bound_record).collect();
            human_table(&BOUND_COLUMNS, &rows)
        }
    })
}

#[derive(Serialize)]
struct XNormOutput {
    n: usize,
    beta: f64,
    norm: f64,
    theta: Option<f64>,
    distance_to_pi: Option<f64>,
    residual: Option<f64>,
    iterations: Option<usize>,
}

fn cmd_xnorm(n: usize, beta: f64, format: Format) -> Result<String, Failure> {
    let (norm, root) = x_beta_norm_with_root(XBetaSpec::new(n, beta)?)?;
    let out = XNormOutput {
        n,
        beta,
        norm,
        theta: root.map(|t| t.theta),
        distance_to_pi: root.map(|t| t.distance_to_pi),
        residual: root.map(|t| t.residual),
        iterations: root.map(|t| t.iterations),
    };
    let opt = |x: Option<f64>| x.map(g15).unwrap_or_default();
    let fields = [
        ("n", n.to_string()),
        ("beta", g15(beta)),
        ("norm", g15(norm)),
        ("theta", opt(out.theta)),
        ("distance_to_pi", opt(out.distance_to_pi)),
        ("residual", opt(out.residual)),
        ("iterations", out.iterations.map(|i| i.to_string()).unwrap_or_default()),
    ];
    Ok(match format {
        Format::Json => json(&out),
        Format::Csv => {
            let header: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
            csv_text(&header, [fields.iter().map(|(_, v)| v.clone())])?
        }
        Format::Human => human_pairs(&fields),
    })
}

#[derive(Serialize)]
struct VerifyOutput {
    suite: Suite,
    n: usize,
    r: f64,
    trials: usize,
    seed: u64,
    #[serde(flatten)]
    report: TrialReport,
}

fn run_suite(suite: Suite, n: usize, r: f64, trials: usize, seed: u64) -> Result<TrialReport, Failure> {
    Ok(match suite {
        Suite::Extremal => verify_extremal(&TrialConfig::new(n, r, trials, seed))?,
        Suite::Dominance => verify_dominance(&TrialConfig::new(n, r, trials, seed))?,
        Suite::Boundary => {
            if !(r > 0.0 && r < 1.0) {
                return Err(Failure::Usage(format!("r = {r} outside (0, 1)")));
            }
            verify_boundary_max(&BoundaryConfig::new(n, r, 32, 16, trials, seed))?
        }
        Suite::All => unreachable!("expanded by the caller"),
    })
}

fn cmd_verify(suite: Suite, n: usize, r: f64, trials: usize, seed: u64, format: Format) -> Result<(String, bool), Failure> {
    let suites = match suite {
        Suite::All => vec![Suite::Extremal, Suite::Dominance, Suite::Boundary],
        one => vec![one],
    };
    let outputs = suites
        .into_iter()
        .map(|s| {
            Ok(VerifyOutput {
                suite: s,
                n,
                r,
                trials,
                seed,
                report: run_suite(s, n, r, trials, seed)?,
            })
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    let ok = outputs.iter().all(|o| o.report.all_passed());
    let name = |s: Suite| s.to_possible_value().expect("named suite").get_name().to_owned();
    let text = match format {
        Format::Json if outputs.len() == 1 => json(&outputs[0]),
        Format::Json => json(&outputs),
        Format::Csv => {
            let header = ["suite", "n", "r", "trials", "seed", "passed", "failed", "worst_margin"];
            csv_text(
                &header,
                outputs.iter().map(|o| {
                    vec![
                        name(o.suite),
                        n.to_string(),
                        g15(r),
                        trials.to_string(),
                        seed.to_string(),
                        o.report.passed.to_string(),
                        o.report.failed.to_string(),
                        g15(o.report.worst_margin),
                    ]
                }),
            )?
        }
        Format::Human => outputs
            .iter()
            .map(|o| {
                let mut pairs = vec![
                    ("suite", name(o.suite)),
                    ("n", n.to_string()),
                    ("r", g15(r)),
                    ("trials", trials.to_string()),
                    ("seed", seed.to_string()),
                    ("passed", o.report.passed.to_string()),
                    ("failed", o.report.failed.to_string()),
                    ("worst margin", g15(o.report.worst_margin)),
                ];
                if let Some(case) = &o.report.worst_case {
                    pairs.push(("worst case", case.clone()));
                }
                human_pairs(&pairs)
            })
            .collect::<Vec<_>>()
            .join("\n"),
    };
    Ok((text, ok))
}

#[derive(Serialize)]
struct ModelOutput {
    sigma: Vec<[f64; 2]>,
    zeta: [f64; 2],
    model_matrix: Vec<Vec<[f64; 2]>>,
    resolvent: Vec<Vec<[f64; 2]>>,
    residual: f64,
}

fn matrix_pairs(m: &ComplexMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect()).collect()
}

fn complex_text(z: Complex64) -> String {
    if z.im == 0.0 {
        g15(z.re)
    } else if z.re == 0.0 {
        format!("{}i", g15(z.im))
    } else {
        let sign = if z.im < 0.0 { '-' } else { '+' };
        format!("{}{sign}{}i", g15(z.re), g15(z.im.abs()))
    }
}

fn matrix_text(m: &ComplexMatrix) -> String {
    let rows: Vec<Vec<String>> = (0..m.rows())
        .map(|i| m.row(i).iter().map(|&z| complex_text(z)).collect())
        .collect();
    let blank = vec![""; m.cols()];
    human_table(&blank, &rows).lines().skip(1).map(|l| format!("  {l}\n")).collect()
}

fn cmd_model(sigma: Vec<Complex64>, zeta: Complex64, format: Format) -> Result<String, Failure> {
    let spectrum = Spectrum::new(sigma.clone())?;
    let query = ResolventQuery::new(spectrum.clone(), zeta)?;
    let m = model_matrix(&spectrum);
    let closed = resolvent_closed_form(&query);
    let numeric = inverse(&m.shifted_negation(zeta)?)?;
    let residual = closed.max_abs_diff(&numeric)?;
    Ok(match format {
        Format::Json => json(&ModelOutput {
            sigma: sigma.iter().map(|z| [z.re, z.im]).collect(),
            zeta: [zeta.re, zeta.im],
            model_matrix: matrix_pairs(&m),
            resolvent: matrix_pairs(&closed),
            residual,
        }),
        Format::Csv => {
            let mut rows = Vec::new();
            for (name, mat) in [("model", &m), ("resolvent", &closed)] {
                for i in 0..mat.rows() {
                    for j in 0..mat.cols() {
                        let z = mat[(i, j)];
                        rows.push(vec![name.into(), i.to_string(), j.to_string(), g15(z.re), g15(z.im)]);
                    }
                }
            }
            rows.push(vec!["residual".into(), "0".into(), "0".into(), g15(residual), "0".into()]);
            csv_text(&["matrix", "row", "col", "re", "im"], rows)?
        }
        Format::Human => format!(
            "zeta      {}\nmodel matrix\n{}resolvent\n{}residual  {}\n",
            complex_text(zeta),
            matrix_text(&m),
            matrix_text(&closed),
            g15(residual)
        ),
    })
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let (text, output, ok) = match cli.command {
        Command::Bound { n, r, output } => {
            let report = BoundReport::compute(n, r)?;
            (render_bounds(&[report], output.format.unwrap_or(Format::Human), true)?, output, true)
        }
        Command::Table { n, r, output } => {
            let reports = n
                .iter()
                .flat_map(|&n| r.iter().map(move |&r| BoundReport::compute(n, r)))
                .collect::<Result<Vec<_>, Error>>()?;
            (render_bounds(&reports, output.format.unwrap_or(Format::Csv), false)?, output, true)
        }
        Command::Xnorm { n, beta, output } => (cmd_xnorm(n, beta, output.format.unwrap_or(Format::Human))?, output, true),
        Command::Verify { suite, n, r, trials, seed, output } => {
            let (text, ok) = cmd_verify(suite, n, r, trials, seed, output.format.unwrap_or(Format::Human))?;
            (text, output, ok)
        }
        Command::Model { sigma, zeta, output } => (cmd_model(sigma, zeta, output.format.unwrap_or(Format::Human))?, output, true),
    };
    emit(&text, output.out.as_ref())?;
    if ok {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => {
            eprintln!("error: verification reported failures");
            ExitCode::from(1)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
