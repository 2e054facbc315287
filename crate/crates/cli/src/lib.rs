//! Command-line front end for the `brickwall` library.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error.
//! `BRICKWALL_THREADS` sets the worker count and never changes output.

pub mod record;
pub mod suites;

use std::ffi::OsString;
use std::io::Write;

use brickwall::bijection::motzkin_to_dyck_traced;
use brickwall::cone_formulas::{ConeQuery, ConeSource};
use brickwall::lattice_graphs::count_paths;
use brickwall::moment_matrix::{moments_even, Ratio};
use brickwall::random_flights::{estimate_even_moments, estimate_prob_within_unit, FlightConfig};
use brickwall::word_models::peak_count;
use brickwall::{LatticeFamily, LatticeVertex, StepWord};
use clap::{Parser, Subcommand};

use record::{write_records, Format, OutputRecord, Provenance};
use suites::{Bounds, Suite, VerifyOptions};

pub const THREADS_ENV: &str = "BRICKWALL_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "brickwall",
    version,
    about = "Exact moments of random flights as lattice walk counts"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "json", global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Even moments W_m(nu; 2n) for n = 0..=N_MAX from the moment matrix.
    Moments {
        /// Dimension parameter nu = d/2 - 1, as p/q.
        nu: String,
        /// Number of steps.
        m: u32,
        n_max: usize,
    },
    /// Number of walks of a given length on a lattice family.
    Count {
        /// Family tag: G0_m, G1_m, GHat1_m, VE_d, pl, vhp, rvhp, hhp, qp, rqp.
        family: String,
        /// End vertex, comma separated. Defaults to the origin.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, num_args = 1..)]
        end: Vec<i64>,
        /// Start vertex, comma separated. Defaults to the origin.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, num_args = 1..)]
        start: Vec<i64>,
        #[arg(long)]
        length: usize,
    },
    /// Map a Motzkin-type word over {U, D, H} to its Dyck word.
    Biject { word: String },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Limits as key=value pairs, e.g. `m=3,n=4`. Keys: m, n, i, j, len, seeds.
        #[arg(long, default_value = "")]
        bounds: Bounds,
        /// Monte Carlo samples per seed.
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        /// First Monte Carlo seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Monte Carlo estimate of E|S_m|^(2n) or of P(|S_m| < 1).
    Mc {
        #[arg(long, short = 'd')]
        dim: usize,
        #[arg(long, short = 'm')]
        steps: usize,
        /// Half the moment order.
        #[arg(long, short = 'n', default_value_t = 1)]
        order: u32,
        /// Estimate the probability of ending inside the unit ball instead.
        #[arg(long)]
        within_unit: bool,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Walks from the origin to (i, j) on a planar cone.
    Cone {
        /// pl, vhp, rvhp, hhp, qp or rqp.
        family: String,
        /// Horizontal displacement.
        #[arg(allow_negative_numbers = true)]
        i: i64,
        /// Vertical displacement.
        #[arg(allow_negative_numbers = true)]
        j: i64,
        length: usize,
    },
}

struct Outcome {
    records: Vec<OutputRecord>,
    code: i32,
    message: Option<String>,
}

impl Outcome {
    fn ok(records: Vec<OutputRecord>) -> Self {
        Self {
            records,
            code: EXIT_OK,
            message: None,
        }
    }
}

fn usage(e: impl ToString) -> String {
    e.to_string()
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    if let Err(msg) = configure_threads() {
        let _ = writeln!(err, "error: {msg}");
        return EXIT_USAGE;
    }
    match execute(&cli.command) {
        Ok(outcome) => {
            if let Err(e) = write_records(&mut *out, cli.format, &outcome.records) {
                let _ = writeln!(err, "error: {e}");
                return EXIT_FAILED;
            }
            if let Some(msg) = outcome.message {
                let _ = writeln!(err, "{msg}");
            }
            outcome.code
        }
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("{THREADS_ENV} must be a positive integer, got `{raw}`"))?;
    // A second call in the same process keeps the first pool.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}

fn vertex(coords: &[i64], family: LatticeFamily) -> LatticeVertex {
    if coords.is_empty() {
        LatticeVertex::origin(family.dimension())
    } else {
        LatticeVertex(coords.to_vec())
    }
}

fn execute(cmd: &Command) -> Result<Outcome, String> {
    match cmd {
        Command::Moments { nu, m, n_max } => {
            let nu_r: Ratio = nu
                .trim()
                .parse()
                .map_err(|_| format!("cannot parse nu `{nu}` as p/q"))?;
            let values = moments_even(&nu_r, *m, *n_max).map_err(usage)?;
            let records = values
                .iter()
                .enumerate()
                .map(|(n, v)| {
                    OutputRecord::exact("moments", v, Provenance::Matrix)
                        .param("nu", &nu_r)
                        .param("m", m)
                        .param("n", n)
                })
                .collect();
            Ok(Outcome::ok(records))
        }
        Command::Count {
            family,
            end,
            start,
            length,
        } => {
            let fam: LatticeFamily = family.parse().map_err(usage)?;
            let (s, e) = (vertex(start, fam), vertex(end, fam));
            let count = count_paths(fam, &s, &e, *length).map_err(usage)?;
            let rec = OutputRecord::exact("count", count, Provenance::BruteForce)
                .param("family", fam)
                .param("start", &s)
                .param("end", &e)
                .param("length", length);
            Ok(Outcome::ok(vec![rec]))
        }
        Command::Biject { word } => {
            let w: StepWord = word.parse().map_err(usage)?;
            let (image, _) = motzkin_to_dyck_traced(&w).map_err(usage)?;
            let rec = OutputRecord::exact("biject", &image, Provenance::Bijection)
                .param("word", &w)
                .param("peaks", peak_count(&image));
            Ok(Outcome::ok(vec![rec]))
        }
        Command::Verify {
            suite,
            bounds,
            samples,
            seed,
        } => {
            if *samples == 0 {
                return Err("--samples must be positive".into());
            }
            let opts = VerifyOptions {
                bounds: bounds.clone(),
                samples: *samples,
                seed: *seed,
            };
            let checks = suites::run_suite(*suite, &opts);
            let failed = checks.iter().filter(|c| !c.passed).count();
            let mut message = format!(
                "verify {}: {} checks, {} failed",
                suite.name(),
                checks.len(),
                failed
            );
            if let Some(first) = checks.iter().find(|c| !c.passed) {
                message.push_str(&format!("\nfirst counterexample: {}", first.describe()));
            }
            Ok(Outcome {
                records: checks.iter().map(|c| c.record()).collect(),
                code: if failed == 0 { EXIT_OK } else { EXIT_FAILED },
                message: Some(message),
            })
        }
        Command::Mc {
            dim,
            steps,
            order,
            within_unit,
            samples,
            seed,
        } => {
            if *dim < 2 || *steps < 1 || *samples < 1 {
                return Err("mc needs --dim >= 2, --steps >= 1 and --samples >= 1".into());
            }
            let (report, rec) = if *within_unit {
                let r = estimate_prob_within_unit(*dim, *steps, *samples, *seed);
                (
                    r,
                    OutputRecord::estimate("mc", r.point_estimate, r.standard_error)
                        .param("quantity", "within_unit"),
                )
            } else {
                let cfg = FlightConfig::new(*dim, *steps, *samples, *seed);
                let r = estimate_even_moments(&cfg, &[*order])[0];
                let rec = OutputRecord::estimate("mc", r.point_estimate, r.standard_error)
                    .param("quantity", "moment")
                    .param("n", order);
                (r, rec)
            };
            let rec = rec
                .param("d", dim)
                .param("m", steps)
                .param("samples", report.sample_count)
                .param("seed", seed);
            Ok(Outcome::ok(vec![rec]))
        }
        Command::Cone {
            family,
            i,
            j,
            length,
        } => {
            let fam: LatticeFamily = family.parse().map_err(usage)?;
            let q = ConeQuery {
                family: fam,
                i: *i,
                j: *j,
                n_steps: *length,
            };
            let v = q.evaluate().map_err(usage)?;
            let (prov, note) = match v.source {
                ConeSource::ClosedForm => (Provenance::ClosedForm, None),
                ConeSource::BruteForce { note } => (Provenance::BruteForce, Some(note)),
            };
            let mut rec = OutputRecord::exact("cone", v.count, prov)
                .param("family", fam)
                .param("i", i)
                .param("j", j)
                .param("length", length);
            if let Some(note) = note {
                rec = rec.param("note", note);
            }
            Ok(Outcome::ok(vec![rec]))
        }
    }
}
