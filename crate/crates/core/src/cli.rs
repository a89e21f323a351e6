//! Command-line front end.
//!
//! Exit codes: 0 success, 1 mathematical negative (inequality fails,
//! violators found, no witness, precondition unmet), 2 usage or input
//! error, 3 undecided at the precision cap.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::criterion::{self, CertificateStatus, CertifyOptions};
use crate::error::{Error, Result};
use crate::extremal::{self, parse_epsilon};
use crate::factorization::{Factorization, DEFAULT_SIEVE_CAP};
use crate::inequality::{self, EvalOptions, RangeOptions, Verdict, DEFAULT_RANGE_CAP};
use crate::mertens::{self, MertensOptions};
use crate::numerics::{PrecisionPolicy, DEFAULT_PRECISION};
use crate::primes::SieveConfig;
use crate::report::{
    CaResult, CertifyResult, CheckResult, IntervalSummary, LogLResult, MertensResult, Payload, RangeResult, Report,
    RhoResult, TableResult,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INDETERMINATE: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    JsonLines,
}

#[derive(Debug, Parser)]
#[command(name = "robin", version, about = "Certified checks of σ(n) < e^γ n log log n")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Leave wall-clock timing out of the report.
    #[arg(long, global = true)]
    pub no_timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide the inequality for one integer n ≥ 3.
    Check {
        #[arg(value_parser = parse_int)]
        n: u64,
    },
    /// List every violator in [lo, hi].
    VerifyRange {
        #[arg(value_parser = parse_int)]
        lo: u64,
        #[arg(value_parser = parse_int)]
        hi: u64,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long, value_parser = parse_int, default_value_t = DEFAULT_RANGE_CAP)]
        cap: u64,
    },
    /// Primes with E(p) ≥ 1 and their thresholds.
    CriterionTable {
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Size of L = Π p^E(p).
    LogL,
    /// Remainder R(n) of the prime sum Σ log(p/(p−1)) at each checkpoint.
    MertensScan {
        #[arg(required = true, value_parser = parse_int)]
        checkpoints: Vec<u64>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Run the witness-prime certification on a factorization file.
    Certify {
        file: PathBuf,
        /// Take log N > 10^13 log 10 as given.
        #[arg(long)]
        assume_large: bool,
        /// Also evaluate S(N) and the full bound on log ρ(N).
        #[arg(long)]
        s_exact: bool,
        #[arg(long, value_parser = parse_int, default_value_t = DEFAULT_SIEVE_CAP)]
        sieve_cap: u64,
    },
    /// Colossally abundant style candidate for ε, in factorization format.
    Ca {
        #[arg(long)]
        eps: String,
    },
    /// log ρ(N) and the inequality margin for a factorization file.
    Rho {
        file: PathBuf,
        #[arg(long, value_parser = parse_int, default_value_t = DEFAULT_SIEVE_CAP)]
        sieve_cap: u64,
    },
}

/// Accepts `1000000`, `1_000_000`, `10^6` and `1e6`.
pub fn parse_int(s: &str) -> std::result::Result<u64, String> {
    let t = s.trim().replace('_', "");
    let bad = || format!("'{s}' is not a non-negative integer");
    let pow = |base: &str, exp: &str| -> std::result::Result<u64, String> {
        let b: u64 = base.parse().map_err(|_| bad())?;
        let e: u32 = exp.parse().map_err(|_| bad())?;
        b.checked_pow(e).ok_or_else(|| format!("'{s}' does not fit in 64 bits"))
    };
    if let Some((b, e)) = t.split_once('^') {
        return pow(b, e);
    }
    if let Some((m, e)) = t.split_once(['e', 'E']) {
        let m: u64 = m.parse().map_err(|_| bad())?;
        return m.checked_mul(pow("10", e)?).ok_or_else(|| format!("'{s}' does not fit in 64 bits"));
    }
    t.parse().map_err(|_| bad())
}

struct Outcome {
    reports: Vec<Report>,
    exit: i32,
}

fn report(command: &str, inputs: serde_json::Value, results: Payload, precision_used: u32) -> Report {
    Report { command: command.into(), inputs, results, timing: None, precision_used }
}

fn read_factorization(path: &PathBuf) -> Result<Factorization> {
    std::fs::read_to_string(path)?.parse()
}

fn verdict_exit(v: Verdict) -> i32 {
    match v {
        Verdict::Holds => EXIT_OK,
        Verdict::Fails => EXIT_NEGATIVE,
        Verdict::Indeterminate => EXIT_INDETERMINATE,
    }
}

fn execute(cmd: &Command) -> Result<Outcome> {
    let policy = PrecisionPolicy::from_env()?;
    match cmd {
        Command::Check { n } => {
            let v = inequality::check_ri_with(*n, None, &policy)?;
            let r = report("check", json!({ "n": n }), Payload::Check(CheckResult::from(&v)), v.precision);
            Ok(Outcome { reports: vec![r], exit: verdict_exit(v.verdict) })
        }
        Command::VerifyRange { lo, hi, threads, cap } => {
            let opts = RangeOptions { cap: *cap, threads: *threads, policy, ..RangeOptions::default() };
            let out = inequality::verify_range(*lo, *hi, &opts)?;
            let exit = if !out.indeterminate.is_empty() {
                EXIT_INDETERMINATE
            } else if !out.violators.is_empty() {
                EXIT_NEGATIVE
            } else {
                EXIT_OK
            };
            let inputs = json!({ "lo": lo, "hi": hi, "cap": cap });
            let r = report("verify-range", inputs, Payload::VerifyRange(RangeResult::from(&out)), policy.start);
            Ok(Outcome { reports: vec![r], exit })
        }
        Command::CriterionTable { limit } => {
            let c = criterion::compute_t(DEFAULT_PRECISION)?;
            let t = criterion::build_table()?;
            let r = report(
                "criterion-table",
                json!({ "limit": limit }),
                Payload::CriterionTable(TableResult::new(&c, t, *limit)),
                t.precision,
            );
            Ok(Outcome { reports: vec![r], exit: EXIT_OK })
        }
        Command::LogL => {
            let t = criterion::build_table()?;
            let r = report("log-l", json!({}), Payload::LogL(LogLResult::from(t)), t.precision);
            Ok(Outcome { reports: vec![r], exit: EXIT_OK })
        }
        Command::MertensScan { checkpoints, threads } => {
            let mut opts = MertensOptions::default();
            opts.sums.sieve = SieveConfig { threads: *threads, ..SieveConfig::default() };
            let records = mertens::scan_with(checkpoints, &opts)?;
            let reports = records
                .iter()
                .map(|rec| {
                    report(
                        "mertens-scan",
                        json!({ "n": rec.n }),
                        Payload::MertensRecord(MertensResult::from(rec)),
                        rec.sum.precision(),
                    )
                })
                .collect();
            Ok(Outcome { reports, exit: EXIT_OK })
        }
        Command::Certify { file, assume_large, s_exact, sieve_cap } => {
            let f = read_factorization(file)?;
            let opts = CertifyOptions {
                assume_large: *assume_large,
                with_s_exact: *s_exact,
                eval: EvalOptions { sieve_cap: *sieve_cap, ..EvalOptions::default() },
                policy,
                ..CertifyOptions::default()
            };
            let c = criterion::certify(&f, &opts)?;
            let exit = match c.status {
                CertificateStatus::Certified => EXIT_OK,
                CertificateStatus::NoWitness | CertificateStatus::PreconditionUnmet => EXIT_NEGATIVE,
                CertificateStatus::Indeterminate => EXIT_INDETERMINATE,
            };
            let inputs = json!({
                "file": file.display().to_string(),
                "assume_large": assume_large,
                "s_exact": s_exact,
                "sieve_cap": sieve_cap,
            });
            let r = report("certify", inputs, Payload::Certify(CertifyResult::from(&c)), c.precision);
            Ok(Outcome { reports: vec![r], exit })
        }
        Command::Ca { eps } => {
            let e = parse_epsilon(eps)?;
            let c = extremal::ca_candidate_with(&e, &policy, &EvalOptions::default())?;
            let r = report("ca", json!({ "eps": eps }), Payload::Ca(CaResult::from(&c)), c.log_n.precision());
            Ok(Outcome { reports: vec![r], exit: EXIT_OK })
        }
        Command::Rho { file, sieve_cap } => {
            let f = read_factorization(file)?;
            let opts = EvalOptions { sieve_cap: *sieve_cap, ..EvalOptions::default() };
            let log_n = inequality::log_n(&f, &opts)?;
            let log_rho = inequality::log_rho(&f, &opts)?;
            let small =
                f.is_explicit() && f.pairs().iter().map(|&(p, a)| a as f64 * (p as f64).log2()).sum::<f64>() <= 256.0;
            let rho_exact = if small { Some(inequality::rho_exact(&f)?.to_string()) } else { None };
            let margin = match extremal::ri_margin(&f, &opts) {
                Ok(m) => Some(m),
                Err(Error::Domain(_)) => None,
                Err(e) => return Err(e),
            };
            let verdict = margin.as_ref().map(Verdict::from_margin);
            let result = RhoResult {
                p_r: f.largest_prime(),
                log_n: IntervalSummary::new(&log_n),
                log_rho: IntervalSummary::new(&log_rho),
                rho_exact,
                margin: margin.as_ref().map(IntervalSummary::new),
                verdict,
            };
            let inputs = json!({ "file": file.display().to_string(), "sieve_cap": sieve_cap });
            let r = report("rho", inputs, Payload::Rho(result), log_n.precision());
            Ok(Outcome { reports: vec![r], exit: verdict.map_or(EXIT_OK, verdict_exit) })
        }
    }
}

fn error_exit(e: &Error, cmd: &Command) -> (i32, String) {
    if e.is_precision_limited() {
        let mut msg = format!("undecided at the precision cap: {e}");
        if matches!(cmd, Command::Ca { .. }) {
            msg.push_str("\nhint: ε sits on a boundary between two candidates; perturb it by 1e-9");
        }
        return (EXIT_INDETERMINATE, msg);
    }
    (EXIT_USAGE, format!("error: {e}"))
}

/// Parses `args` (program name first), runs the command and writes the
/// report. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let start = Instant::now();
    let outcome = match execute(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            let (code, msg) = error_exit(&e, &cli.command);
            let _ = writeln!(err, "{msg}");
            return code;
        }
    };
    let elapsed = start.elapsed().as_secs_f64();
    let n = outcome.reports.len();
    for (i, mut r) in outcome.reports.into_iter().enumerate() {
        if !cli.no_timing && i + 1 == n {
            r.timing = Some(elapsed);
        }
        let _ = match cli.format {
            Format::JsonLines => writeln!(out, "{}", r.to_json_line()),
            Format::Text => write!(out, "{}", r.to_text()),
        };
    }
    outcome.exit
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integers() {
        assert_eq!(parse_int("10^6"), Ok(1_000_000));
        assert_eq!(parse_int("1e6"), Ok(1_000_000));
        assert_eq!(parse_int("5_041"), Ok(5041));
        assert_eq!(parse_int("100000000"), Ok(100_000_000));
        assert!(parse_int("10^20").is_err());
        assert!(parse_int("x").is_err());
        assert!(parse_int("-3").is_err());
    }

    fn run_str(args: &[&str]) -> (i32, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("robin").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap() + &String::from_utf8(err).unwrap())
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_str(&["check", "5041", "--no-timing"]).0, EXIT_OK);
        assert_eq!(run_str(&["check", "5040"]).0, EXIT_NEGATIVE);
        assert_eq!(run_str(&["check"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["check", "2"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["bogus"]).0, EXIT_USAGE);
        let (code, text) = run_str(&["criterion-table", "--limit", "1", "--no-timing"]);
        assert_eq!(code, EXIT_OK);
        assert!(text.lines().any(|l| l == "2 17"), "{text}");
    }
}
