//! `dumont` — command-line front end for the verifiers in `dumont-core`.
//!
//! Reports go to stdout (one per line in json mode), a metadata line with
//! timing goes to stderr. Exit status: 0 all checks passed, 1 some check
//! failed, 2 usage or precondition error.

use std::fmt::Write as _;
use std::io::Write as _;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dumont_core::counting::{
    all_signs_squares_count, cyclic_count, kronecker_count, odd_squares_count, triangular_count,
    verify_classical, verify_dumont, CyclicFormSpec, DumontCheck, Residue,
};
use dumont_core::identities::{verify_identity_suite, IdentityGrid, DEFAULT_DEGREE};
use dumont_core::matrix::{
    trace_power, verify_intertwining, verify_proof_decomposition, verify_trace_counts,
    verify_trace_cyclicity, verify_trace_equality, verify_valuation_soundness, MatrixA, MatrixB,
    MatrixX,
};
use dumont_core::series::{pochhammer, theta_jacobi, theta_odd_squares};
use dumont_core::{Length, Monomial, QSeries, Sign, VerificationReport};
use serde_json::json;

/// The entry perturbed by `--inject-fault`.
const FAULT_CELL: (usize, usize) = (0, 1);
const VALUATION_SAMPLES: usize = 500;
const HUMAN_TERMS: usize = 10;

#[derive(Parser, Debug)]
#[command(name = "dumont", version, about = "Exact verifier for Dumont's sums-of-squares identity")]
struct Cli {
    /// Output format
    #[arg(long, value_enum, global = true, env = "DUMONT_FORMAT")]
    format: Option<Format>,

    /// Worker threads (defaults to the number of available processors)
    #[arg(long, global = true, env = "DUMONT_JOBS")]
    jobs: Option<usize>,

    /// Seed for randomized sampling
    #[arg(long, global = true, env = "DUMONT_SEED", default_value_t = 0)]
    seed: u64,

    /// Zero the X entry at (0,1) before checking; the intertwining check must then fail
    #[arg(long, global = true, env = "DUMONT_INJECT_FAULT")]
    inject_fault: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
    Human,
}

#[derive(Args, Debug, Clone, Copy)]
struct Degree {
    /// Truncation degree N: series are compared on exponents <= N
    #[arg(long, env = "DUMONT_DEGREE", default_value_t = 200)]
    degree: i64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// q-binomial, both Euler identities, triple product and Gauss's corollaries
    VerifyIdentities {
        #[command(flatten)]
        degree: Degree,
    },
    /// XB = AX on the leading block, plus sampled valuation bounds
    VerifyIntertwining {
        #[arg(long, env = "DUMONT_MAX_INDEX", default_value_t = 12)]
        max_index: usize,
        #[command(flatten)]
        degree: Degree,
    },
    /// Head/tail split of (AX - XB)(i,j) for i < K, 1 <= j < K
    VerifyProofDecomposition {
        #[arg(long, env = "DUMONT_MAX_INDEX", default_value_t = 12)]
        max_index: usize,
        #[command(flatten)]
        degree: Degree,
    },
    /// tr[A^k] = tr[B^k], their coefficients against brute force, and tr[AX] = tr[XA]
    Traces {
        #[arg(long, env = "DUMONT_K_MAX", default_value_t = 6)]
        k_max: usize,
        #[command(flatten)]
        degree: Degree,
    },
    /// A single brute-force count
    Count {
        #[arg(long, value_enum)]
        kind: CountKind,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long)]
        n: u64,
    },
    /// r_k(n) = c_k^1(n) - (-1)^k c_k^3(n) for every 1 <= k <= k_max, n <= n_max
    DumontCheck {
        #[arg(long, env = "DUMONT_K_MAX", default_value_t = 6)]
        k_max: usize,
        #[arg(long, env = "DUMONT_N_MAX", default_value_t = 200)]
        n_max: u64,
    },
    /// Gauss, Jacobi, Lagrange and Kronecker counts against their divisor formulas
    VerifyClassical {
        #[arg(long, env = "DUMONT_N_MAX", default_value_t = 200)]
        max: u64,
    },
    /// Print a series up to q^degree (human format by default)
    Expand {
        #[arg(long, value_enum)]
        series: SeriesName,
        /// k for trace-a / trace-b
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// z = ±q^m for jacobi-theta / triple-product: m
        #[arg(long, default_value_t = 0)]
        z_exp: u32,
        /// z = ±q^m for jacobi-theta / triple-product: take the minus sign
        #[arg(long)]
        z_negative: bool,
        /// Truncation degree; without it human mode prints only the leading terms
        #[arg(long, env = "DUMONT_DEGREE")]
        degree: Option<i64>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum CountKind {
    OddSquares,
    Cyclic1,
    Cyclic3,
    Triangular,
    Kronecker,
    R2z,
    R4z,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SeriesName {
    /// (q;q)_∞
    PochhammerQInf,
    /// sum over n >= 0 of q^((2n+1)^2)
    ThetaOddSquares,
    /// sum over n in Z of z^n q^(n^2)
    JacobiTheta,
    /// (q^2;q^2)_∞ (-qz;q^2)_∞ (-q/z;q^2)_∞
    TripleProduct,
    /// tr[A^k]
    TraceA,
    /// tr[B^k]
    TraceB,
}

/// What a subcommand produced, before formatting.
enum Output {
    Reports(Vec<VerificationReport>),
    Dumont(Vec<DumontCheck>, VerificationReport),
    Count { kind: CountKind, k: usize, n: u64, value: u64 },
    Series { name: SeriesName, series: QSeries, full: bool },
}

impl Output {
    fn passed(&self) -> bool {
        match self {
            Output::Reports(r) => r.iter().all(|r| r.pass),
            Output::Dumont(_, r) => r.pass,
            Output::Count { .. } | Output::Series { .. } => true,
        }
    }

    fn default_format(&self) -> Format {
        match self {
            Output::Series { .. } => Format::Human,
            _ => Format::Json,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();

    let jobs = match configure_pool(cli.jobs) {
        Ok(j) => j,
        Err(e) => return usage_error(&e),
    };

    let output = match run(&cli) {
        Ok(o) => o,
        Err(e) => return usage_error(&e),
    };
    let format = cli.format.unwrap_or_else(|| output.default_format());
    let text = render(&output, format);

    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
        return ExitCode::from(2);
    }
    let meta = json!({
        "metadata": {
            "elapsed_ms": start.elapsed().as_millis() as u64,
            "jobs": jobs,
            "parallel": dumont_core::exec::is_parallel(),
        }
    });
    eprintln!("{meta}");

    if output.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

#[cfg(feature = "parallel")]
fn configure_pool(jobs: Option<usize>) -> Result<usize, String> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        if j == 0 {
            return Err("--jobs must be at least 1".into());
        }
        builder = builder.num_threads(j);
    }
    builder.build_global().map_err(|e| e.to_string())?;
    Ok(rayon::current_num_threads())
}

#[cfg(not(feature = "parallel"))]
fn configure_pool(jobs: Option<usize>) -> Result<usize, String> {
    if jobs == Some(0) {
        return Err("--jobs must be at least 1".into());
    }
    Ok(1)
}

fn check_degree(d: Degree) -> Result<i64, String> {
    if d.degree < 0 {
        return Err(format!("--degree must be nonnegative, got {}", d.degree));
    }
    Ok(d.degree)
}

fn run(cli: &Cli) -> Result<Output, String> {
    let fault = (cli.inject_fault || cfg!(feature = "inject-fault")).then_some(FAULT_CELL);
    let err = |e: &dyn std::fmt::Display| e.to_string();
    match &cli.command {
        Command::VerifyIdentities { degree } => {
            let n = check_degree(*degree)?;
            let reports = verify_identity_suite(&IdentityGrid::default(), n).map_err(|e| err(&e))?;
            Ok(Output::Reports(reports))
        }
        Command::VerifyIntertwining { max_index, degree } => {
            let n = check_degree(*degree)?;
            let mut reports = vec![verify_intertwining(*max_index, n, fault).map_err(|e| err(&e))?];
            if *max_index > 0 {
                let x = match fault {
                    Some((i, j)) => MatrixX::with_zeroed_entry(i, j),
                    None => MatrixX::new(),
                };
                let matrices: [&dyn dumont_core::matrix::SymbolicMatrix; 3] = [&MatrixA, &MatrixB, &x];
                for m in matrices {
                    reports.push(verify_valuation_soundness(m, VALUATION_SAMPLES, *max_index, n, cli.seed));
                }
            }
            Ok(Output::Reports(reports))
        }
        Command::VerifyProofDecomposition { max_index, degree } => {
            let n = check_degree(*degree)?;
            let cells: Vec<(usize, usize)> = (0..*max_index)
                .flat_map(|i| (1..*max_index).map(move |j| (i, j)))
                .collect();
            let reports = dumont_core::exec::map(&cells, |&(i, j)| verify_proof_decomposition(i, j, n))
                .into_iter()
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| err(&e))?;
            Ok(Output::Reports(reports))
        }
        Command::Traces { k_max, degree } => {
            let n = check_degree(*degree)?;
            if *k_max == 0 {
                return Err("--k-max must be at least 1".into());
            }
            let reports = vec![
                verify_trace_equality(*k_max, n).map_err(|e| err(&e))?,
                verify_trace_counts(*k_max, n).map_err(|e| err(&e))?,
                verify_trace_cyclicity(n, fault).map_err(|e| err(&e))?,
            ];
            Ok(Output::Reports(reports))
        }
        Command::Count { kind, k, n } => {
            let (k, n) = (*k, *n);
            let value = match kind {
                CountKind::OddSquares => odd_squares_count(k, n),
                CountKind::Cyclic1 => {
                    CyclicFormSpec::new(k, Residue::One).and_then(|s| cyclic_count(s, n))
                }
                CountKind::Cyclic3 => {
                    CyclicFormSpec::new(k, Residue::Three).and_then(|s| cyclic_count(s, n))
                }
                CountKind::Triangular => triangular_count(k, n),
                CountKind::Kronecker => kronecker_count(n),
                CountKind::R2z => all_signs_squares_count(2, n),
                CountKind::R4z => all_signs_squares_count(4, n),
            }
            .map_err(|e| err(&e))?;
            Ok(Output::Count { kind: *kind, k, n, value })
        }
        Command::DumontCheck { k_max, n_max } => {
            if *k_max == 0 {
                return Err("--k-max must be at least 1".into());
            }
            let (rows, report) = verify_dumont(*k_max, *n_max).map_err(|e| err(&e))?;
            Ok(Output::Dumont(rows, report))
        }
        Command::VerifyClassical { max } => {
            let reports = verify_classical(*max).map_err(|e| err(&e))?;
            Ok(Output::Reports(reports))
        }
        Command::Expand { series, k, z_exp, z_negative, degree } => {
            let full = degree.is_some();
            let n = check_degree(Degree { degree: degree.unwrap_or(DEFAULT_DEGREE) })?;
            let sign = if *z_negative { Sign::Minus } else { Sign::Plus };
            let z = Monomial::new(sign, *z_exp);
            let value = match series {
                SeriesName::PochhammerQInf => {
                    pochhammer(Monomial::plus(1), 1, Length::Infinite, n).map_err(|e| err(&e))?
                }
                SeriesName::ThetaOddSquares => theta_odd_squares(n),
                SeriesName::JacobiTheta => theta_jacobi(z, n),
                SeriesName::TripleProduct => {
                    dumont_core::identities::triple_product(z, n).map_err(|e| err(&e))?
                }
                SeriesName::TraceA | SeriesName::TraceB => {
                    if *k == 0 {
                        return Err("--k must be at least 1".into());
                    }
                    let m: &dyn dumont_core::matrix::SymbolicMatrix = if *series == SeriesName::TraceA {
                        &MatrixA
                    } else {
                        &MatrixB
                    };
                    trace_power(m, *k, n).map_err(|e| err(&e))?
                }
            };
            Ok(Output::Series { name: *series, series: value, full })
        }
    }
}

fn value_name<T: ValueEnum>(v: &T) -> String {
    v.to_possible_value().map(|p| p.get_name().to_string()).unwrap_or_default()
}

fn params_string(r: &VerificationReport) -> String {
    r.parameters
        .iter()
        .map(|(k, v)| match v {
            serde_json::Value::String(s) => format!("{k}={s}"),
            other => format!("{k}={other}"),
        })
        .collect::<Vec<_>>()
        .join(",")
}

const REPORT_TSV_HEADER: &str = "check\tparameters\tpass\tlocation\texponent\tlhs\trhs\n";

fn report_tsv(out: &mut String, r: &VerificationReport) {
    let (loc, e, l, rr) = match &r.first_discrepancy {
        Some(d) => (
            d.location.clone(),
            d.exponent.to_string(),
            d.lhs_coefficient.clone(),
            d.rhs_coefficient.clone(),
        ),
        None => Default::default(),
    };
    let _ = writeln!(out, "{}\t{}\t{}\t{loc}\t{e}\t{l}\t{rr}", r.check, params_string(r), r.pass);
}

fn report_human(out: &mut String, r: &VerificationReport) {
    let verdict = if r.pass { "PASS" } else { "FAIL" };
    let _ = write!(out, "{verdict} {} [{}]", r.check, params_string(r));
    if let Some(d) = &r.first_discrepancy {
        let _ = write!(
            out,
            ": first discrepancy at {}, q^{}: {} vs {}",
            d.location, d.exponent, d.lhs_coefficient, d.rhs_coefficient
        );
    }
    out.push('\n');
}

fn render(output: &Output, format: Format) -> String {
    let mut out = String::new();
    match (output, format) {
        (Output::Reports(rs), Format::Json) => {
            for r in rs {
                out.push_str(&r.to_json_line());
                out.push('\n');
            }
        }
        (Output::Reports(rs), Format::Tsv) => {
            out.push_str(REPORT_TSV_HEADER);
            rs.iter().for_each(|r| report_tsv(&mut out, r));
        }
        (Output::Reports(rs), Format::Human) => rs.iter().for_each(|r| report_human(&mut out, r)),

        (Output::Dumont(_, r), Format::Json) => {
            out.push_str(&r.to_json_line());
            out.push('\n');
        }
        (Output::Dumont(rows, _), Format::Tsv) => {
            out.push_str("k\tn\tr\tc1\tc3\tholds\n");
            for row in rows {
                let _ = writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}\t{}",
                    row.k, row.n, row.r, row.c1, row.c3, row.holds
                );
            }
        }
        (Output::Dumont(rows, r), Format::Human) => {
            report_human(&mut out, r);
            let nonzero = rows.iter().filter(|row| row.r != 0).count();
            let _ = writeln!(out, "{} cases, {nonzero} with r_k(n) > 0", rows.len());
        }

        (Output::Count { kind, k, n, value }, Format::Json) => {
            let v = json!({ "kind": value_name(kind), "k": k, "n": n, "count": value });
            let _ = writeln!(out, "{v}");
        }
        (Output::Count { kind, k, n, value }, Format::Tsv) => {
            let _ = writeln!(out, "kind\tk\tn\tcount\n{}\t{k}\t{n}\t{value}", value_name(kind));
        }
        (Output::Count { kind, k, n, value }, Format::Human) => {
            let _ = writeln!(out, "{}(k={k}, n={n}) = {value}", value_name(kind));
        }

        (Output::Series { name, series, .. }, Format::Json) => {
            let v = json!({ "series": value_name(name), "value": series });
            let _ = writeln!(out, "{v}");
        }
        (Output::Series { series, .. }, Format::Tsv) => {
            out.push_str("exponent\tcoefficient\n");
            for (e, c) in series.terms() {
                let _ = writeln!(out, "{e}\t{c}");
            }
        }
        (Output::Series { series, full, .. }, Format::Human) => {
            let text = if *full {
                series.to_polynomial_string()
            } else {
                series.head_string(HUMAN_TERMS)
            };
            let _ = writeln!(out, "{text}");
        }
    }
    out
}
