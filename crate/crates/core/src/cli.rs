//! Command-line front end.
//!
//! Everything is written to caller-supplied sinks so the commands can be
//! driven from tests; `main` wires them to stdout and stderr.

use std::io::{self, Write};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_traits::Zero;

use crate::distribution::{
    self, factorial, fixed_depth_polynomial, max_depth, max_depth_count, DepthTable, Method,
};
use crate::motzkin::{parse_path, MotzkinPath};
use crate::permutation::parse_permutation;
use crate::phi::{enumerate_preimage, phi, preimage_count};
use crate::Guard;

#[derive(Debug, Parser)]
#[command(
    name = "permdepth",
    version,
    about = "Exact distribution of permutation depth (half the total displacement)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    /// `n<TAB>H(n,0)<TAB>H(n,1)…`, one row per line
    Tsv,
    /// array of rows, each an array of decimal strings
    Json,
    /// OEIS b-file: `index value`, rows read left to right, index from 1
    Bfile,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the triangle H(n,k) = #{w in S_n : depth(w) = k} for rows 0..=n
    Table {
        #[arg(long)]
        n: usize,
        /// brute, motzkin, jfrac or sfrac
        #[arg(long, default_value = "jfrac")]
        method: Method,
        #[arg(long, value_enum, default_value = "tsv")]
        format: OutputFormat,
        /// Lift the size ceilings (brute: n ≤ 9, motzkin: n ≤ 16)
        #[arg(long)]
        force: bool,
        /// Worker threads for the brute and motzkin methods
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Depth, total displacement, Motzkin path and area of a permutation
    Depth {
        /// One-line notation, e.g. 3715246 or 10,1,2,3,4,5,6,7,8,9
        perm: String,
    },
    /// Count (and optionally list) the permutations mapping to a Motzkin path
    Preimage {
        /// Word over U, H, D, e.g. UUHDDUD
        path: String,
        #[arg(long)]
        list: bool,
        /// Lift the listing ceiling of 1000000 permutations
        #[arg(long)]
        force: bool,
    },
    /// Coefficients a_0..a_k with H(n,k) = Σ_j a_j·C(n−k, j) for n ≥ k
    Poly {
        #[arg(long)]
        k: usize,
        /// Largest n used for fitting and verification (default max(40, 2k+3))
        #[arg(long)]
        nmax: Option<usize>,
    },
    /// Cross-validate all methods and invariants for rows 0..=n
    Check {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        jobs: Option<usize>,
    },
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(rendered.as_bytes());
            return e.exit_code();
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

type CmdResult = Result<i32, Box<dyn std::error::Error>>;

fn execute(command: Command, out: &mut dyn Write) -> CmdResult {
    match command {
        Command::Table {
            n,
            method,
            format,
            force,
            jobs,
        } => {
            let table = with_jobs(jobs, || distribution::table(method, n, Guard::from_force(force)))??;
            write_table(&table, format, out)?;
            Ok(0)
        }
        Command::Depth { perm } => {
            let w = parse_permutation(&perm)?;
            let path = phi(&w);
            writeln!(out, "depth {}", w.depth())?;
            writeln!(out, "displacement {}", w.total_displacement())?;
            writeln!(out, "path {path}")?;
            writeln!(out, "area {}", path.area())?;
            Ok(0)
        }
        Command::Preimage { path, list, force } => {
            let p = parse_path(&path)?;
            writeln!(out, "{}", preimage_count(&p))?;
            if list {
                for w in enumerate_preimage(&p, Guard::from_force(force))? {
                    writeln!(out, "{w}")?;
                }
            }
            Ok(0)
        }
        Command::Poly { k, nmax } => {
            let n_max = nmax.unwrap_or((2 * k + 3).max(40));
            let poly = fixed_depth_polynomial(k, n_max)?;
            let coeffs: Vec<String> = poly.coefficients.iter().map(ToString::to_string).collect();
            writeln!(out, "{}", coeffs.join(" "))?;
            writeln!(out, "# verified exactly for {k} <= n <= {}", poly.verified_through)?;
            Ok(0)
        }
        Command::Check { n, jobs } => {
            let report = with_jobs(jobs, || check(n))??;
            for line in &report.lines {
                writeln!(out, "{line}")?;
            }
            Ok(if report.passed() { 0 } else { 1 })
        }
    }
}

fn with_jobs<R: Send>(jobs: Option<usize>, f: impl FnOnce() -> R + Send) -> io::Result<R> {
    match jobs {
        None => Ok(f()),
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j.max(1))
                .build()
                .map_err(io::Error::other)?;
            Ok(pool.install(f))
        }
    }
}

/// Writes rows `0..=N` of the table in the requested format.
pub fn write_table(table: &DepthTable, format: OutputFormat, out: &mut dyn Write) -> io::Result<()> {
    match format {
        OutputFormat::Tsv => {
            for (n, row) in table.rows().iter().enumerate() {
                write!(out, "{n}")?;
                for c in row {
                    write!(out, "\t{c}")?;
                }
                writeln!(out)?;
            }
        }
        OutputFormat::Json => {
            let rows: Vec<Vec<String>> = table
                .rows()
                .iter()
                .map(|row| row.iter().map(ToString::to_string).collect())
                .collect();
            serde_json::to_writer(&mut *out, &rows)?;
            writeln!(out)?;
        }
        OutputFormat::Bfile => {
            for (index, c) in table.rows().iter().flatten().enumerate() {
                writeln!(out, "{} {c}", index + 1)?;
            }
        }
    }
    Ok(())
}

/// Outcome of a cross-validation run.
#[derive(Debug, Default)]
pub struct CheckReport {
    pub lines: Vec<String>,
    pub failures: usize,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    fn fail(&mut self, line: String) {
        self.failures += 1;
        self.lines.push(format!("FAIL {line}"));
    }
}

/// Runs every method within its default ceiling for rows `0..=n`, compares
/// them, and checks row sums, `H(n,0)`, `H(n,1)` and the maximal-depth count.
pub fn check(n: usize) -> Result<CheckReport, distribution::DistributionError> {
    let mut tables = Vec::new();
    for method in Method::ALL {
        let upto = method.ceiling().map_or(n, |c| c.min(n));
        tables.push(distribution::table(method, upto, Guard::Enforced)?);
    }
    let mut report = CheckReport::default();
    let reference = &tables[2];

    for m in 0..=n {
        let used: Vec<&DepthTable> = tables.iter().filter(|t| t.n_max() >= m).collect();
        let names: Vec<&str> = used.iter().map(|t| t.method.name()).collect();
        let divergence = used.iter().find_map(|t| {
            t.first_divergence(reference)
                .filter(|&(row, _)| row == m)
        });
        match divergence {
            None => report
                .lines
                .push(format!("n={m} methods={} agree", names.join(","))),
            Some((_, k)) => {
                let values: Vec<String> = used
                    .iter()
                    .map(|t| format!("{}={}", t.method, t.get(m, k)))
                    .collect();
                report.fail(format!("n={m} first divergence at k={k}: {}", values.join(" ")));
            }
        }
    }

    for m in 0..=n {
        let sum = reference.row_sum(m);
        let expected = factorial(m);
        if sum != expected {
            report.fail(format!("n={m} row sum {sum} != {m}! = {expected}"));
        }
        if reference.get(m, 0) != BigUint::from(1u32) {
            report.fail(format!("n={m} H(n,0) = {} != 1", reference.get(m, 0)));
        }
        if m >= 2 && reference.get(m, 1) != BigUint::from(m - 1) {
            report.fail(format!("n={m} H(n,1) = {} != {}", reference.get(m, 1), m - 1));
        }
        if m >= 1 {
            let top = reference.get(m, max_depth(m) as usize);
            let formula = max_depth_count(m)?;
            let weight = MotzkinPath::max_area(m).weight();
            if top != formula || top != weight {
                report.fail(format!(
                    "n={m} H(n,{}) = {top}, formula {formula}, path weight {weight}",
                    max_depth(m)
                ));
            }
        }
    }
    let zeros = reference.interior_zeros();
    if !zeros.is_empty() {
        report
            .lines
            .push(format!("note: zero entries inside rows at {zeros:?}"));
    }
    let summary = if report.passed() {
        format!("ok: rows 0..={n} agree; row sums, H(n,0), H(n,1) and max-depth counts verified")
    } else {
        format!("{} check(s) failed", report.failures)
    };
    report.lines.push(summary);
    debug_assert!(reference.rows().iter().all(|r| !r.is_empty() && !r[0].is_zero()));
    Ok(report)
}
