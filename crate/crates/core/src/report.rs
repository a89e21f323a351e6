//! Structured command reports: JSON lines or plain text.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::criterion::{CertificateReport, CertificateStatus, CriterionConstants, CriterionTable, Witness};
use crate::extremal::CaCandidate;
use crate::inequality::{RangeOutcome, RiVerdict, Verdict, Violator};
use crate::mertens::MertensRecord;
use crate::numerics::{IntervalReal, Round, TriState};

/// Significant decimal digits printed per endpoint.
pub const REPORT_DIGITS: u32 = 30;

/// An enclosure as two decimal strings, `lo` rounded down and `hi` up.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalSummary {
    pub lo: String,
    pub hi: String,
    pub precision: u32,
}

impl IntervalSummary {
    pub fn new(x: &IntervalReal) -> Self {
        Self::with_digits(x, REPORT_DIGITS)
    }

    pub fn with_digits(x: &IntervalReal, digits: u32) -> Self {
        IntervalSummary {
            lo: x.lo().to_decimal(digits, Round::Down),
            hi: x.hi().to_decimal(digits, Round::Up),
            precision: x.precision(),
        }
    }

    pub fn text(&self) -> String {
        format!("[{} (down), {} (up)] @{} bits", self.lo, self.hi, self.precision)
    }
}

fn summary(x: &IntervalReal) -> IntervalSummary {
    IntervalSummary::new(x)
}

fn opt(x: &Option<IntervalReal>) -> Option<IntervalSummary> {
    x.as_ref().map(summary)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub n: u64,
    pub sigma: u64,
    pub verdict: Verdict,
    /// e^γ log log n − σ(n)/n.
    pub margin: IntervalSummary,
}

impl From<&RiVerdict> for CheckResult {
    fn from(v: &RiVerdict) -> Self {
        CheckResult { n: v.n, sigma: v.sigma, verdict: v.verdict, margin: summary(&v.margin) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RangeResult {
    pub lo: u64,
    pub hi: u64,
    pub violators: Vec<Violator>,
    pub exact_checks: u64,
    pub indeterminate: Vec<u64>,
}

impl From<&RangeOutcome> for RangeResult {
    fn from(r: &RangeOutcome) -> Self {
        RangeResult {
            lo: r.lo,
            hi: r.hi,
            violators: r.violators.clone(),
            exact_checks: r.exact_checks,
            indeterminate: r.indeterminate.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableResult {
    pub log_t: IntervalSummary,
    pub t: IntervalSummary,
    pub total_rows: usize,
    pub p_max: u64,
    /// The first `limit` rows, or all of them.
    pub rows: Vec<(u64, u64)>,
}

impl TableResult {
    pub fn new(c: &CriterionConstants, t: &CriterionTable, limit: Option<usize>) -> Self {
        let take = limit.unwrap_or(t.rows.len()).min(t.rows.len());
        TableResult {
            log_t: summary(&c.log_t),
            t: summary(&c.t),
            total_rows: t.rows.len(),
            p_max: t.p_max,
            rows: t.rows[..take].to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogLResult {
    pub rows: usize,
    pub p_max: u64,
    pub log_l: IntervalSummary,
    pub log10_log10_l: IntervalSummary,
    /// log10 log10 L rounded to three decimals, when the enclosure decides it.
    pub log10_log10_l_3dp: Option<String>,
}

impl From<&CriterionTable> for LogLResult {
    fn from(t: &CriterionTable) -> Self {
        let lo = (t.log10_log10_l.lo_f64() * 1000.0).round();
        let hi = (t.log10_log10_l.hi_f64() * 1000.0).round();
        LogLResult {
            rows: t.rows.len(),
            p_max: t.p_max,
            log_l: summary(&t.log_l),
            log10_log10_l: summary(&t.log10_log10_l),
            log10_log10_l_3dp: (lo == hi).then(|| format!("{:.3}", lo / 1000.0)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MertensResult {
    pub n: u64,
    pub sum: IntervalSummary,
    pub remainder: IntervalSummary,
    pub bound: IntervalSummary,
    pub within_bound: TriState,
    pub outside_lemma_range: bool,
    pub loglog_nonpositive: bool,
}

impl From<&MertensRecord> for MertensResult {
    fn from(r: &MertensRecord) -> Self {
        MertensResult {
            n: r.n,
            sum: summary(&r.sum),
            remainder: summary(&r.remainder),
            bound: summary(&r.bound),
            within_bound: r.within_bound,
            outside_lemma_range: r.outside_lemma_range,
            loglog_nonpositive: r.loglog_nonpositive,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifyResult {
    pub status: CertificateStatus,
    pub witness: Option<Witness>,
    pub log_n: IntervalSummary,
    pub size_precondition: TriState,
    pub assumed_large: bool,
    pub r_term: Option<IntervalSummary>,
    pub s_lower: Option<IntervalSummary>,
    pub chain_gap: Option<IntervalSummary>,
    pub s_exact: Option<IntervalSummary>,
    pub rho_bound: Option<IntervalSummary>,
    pub log_rho: Option<IntervalSummary>,
    pub rho_check: Option<TriState>,
    pub p_r: Option<u64>,
    pub p_r_lt_log_n: TriState,
    pub p_r_below_lemma_threshold: bool,
}

impl From<&CertificateReport> for CertifyResult {
    fn from(r: &CertificateReport) -> Self {
        CertifyResult {
            status: r.status,
            witness: r.witness,
            log_n: summary(&r.log_n),
            size_precondition: r.size_precondition,
            assumed_large: r.assumed_large,
            r_term: opt(&r.r_term),
            s_lower: opt(&r.s_lower),
            chain_gap: opt(&r.chain_gap),
            s_exact: opt(&r.s_exact),
            rho_bound: opt(&r.rho_bound),
            log_rho: opt(&r.log_rho),
            rho_check: r.rho_check,
            p_r: r.p_r,
            p_r_lt_log_n: r.p_r_lt_log_n,
            p_r_below_lemma_threshold: r.p_r_below_lemma_threshold,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaResult {
    pub epsilon: String,
    /// Canonical factorization text.
    pub factorization: String,
    pub log_n: IntervalSummary,
    pub margin: Option<IntervalSummary>,
}

impl From<&CaCandidate> for CaResult {
    fn from(c: &CaCandidate) -> Self {
        CaResult {
            epsilon: c.epsilon.to_string(),
            factorization: c.factorization.to_text(),
            log_n: summary(&c.log_n),
            margin: opt(&c.margin),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RhoResult {
    pub p_r: Option<u64>,
    pub log_n: IntervalSummary,
    pub log_rho: IntervalSummary,
    /// σ(N)/N in lowest terms, for explicit factorizations of modest size.
    pub rho_exact: Option<String>,
    /// γ + log log log N − log ρ(N).
    pub margin: Option<IntervalSummary>,
    pub verdict: Option<Verdict>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
#[allow(clippy::large_enum_variant)]
pub enum Payload {
    Check(CheckResult),
    VerifyRange(RangeResult),
    CriterionTable(TableResult),
    LogL(LogLResult),
    MertensRecord(MertensResult),
    Certify(CertifyResult),
    Ca(CaResult),
    Rho(RhoResult),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub inputs: serde_json::Value,
    pub results: Payload,
    /// Wall-clock seconds; absent when timing is suppressed.
    pub timing: Option<f64>,
    pub precision_used: u32,
}

impl Report {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serialises")
    }

    pub fn from_json_line(line: &str) -> serde_json::Result<Report> {
        serde_json::from_str(line)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let w = &mut s;
        match &self.results {
            Payload::Check(r) => {
                let _ = writeln!(w, "n = {}", r.n);
                let _ = writeln!(w, "sigma(n) = {}", r.sigma);
                let _ = writeln!(w, "verdict: {}", r.verdict.as_str());
                let _ = writeln!(w, "margin e^gamma*loglog(n) - sigma(n)/n: {}", r.margin.text());
            }
            Payload::VerifyRange(r) => {
                let _ = writeln!(w, "range: [{}, {}]", r.lo, r.hi);
                let _ = writeln!(w, "violators: {}", r.violators.len());
                for v in &r.violators {
                    let tag = if v.degenerate { " degenerate" } else { "" };
                    let _ = writeln!(w, "{} sigma={}{}", v.n, v.sigma, tag);
                }
                let _ = writeln!(w, "exact checks: {}", r.exact_checks);
                if !r.indeterminate.is_empty() {
                    let _ = writeln!(w, "indeterminate: {:?}", r.indeterminate);
                }
            }
            Payload::CriterionTable(r) => {
                let _ = writeln!(w, "# log T = {}", r.log_t.text());
                let _ = writeln!(w, "# T = {}", r.t.text());
                let _ = writeln!(w, "# rows = {}, p_max = {}", r.total_rows, r.p_max);
                let _ = writeln!(w, "# p E(p)");
                for (p, e) in &r.rows {
                    let _ = writeln!(w, "{p} {e}");
                }
            }
            Payload::LogL(r) => {
                let _ = writeln!(w, "rows: {}, p_max: {}", r.rows, r.p_max);
                let _ = writeln!(w, "log L = {}", r.log_l.text());
                let _ = writeln!(w, "log10 log10 L = {}", r.log10_log10_l.text());
                if let Some(v) = &r.log10_log10_l_3dp {
                    let _ = writeln!(w, "log10 log10 L to 3 decimals: {v}");
                }
            }
            Payload::MertensRecord(r) => {
                let _ = writeln!(w, "n = {}", r.n);
                let _ = writeln!(w, "  sum = {}", r.sum.text());
                let _ = writeln!(w, "  R(n) = {}", r.remainder.text());
                let _ = writeln!(w, "  bound = {}", r.bound.text());
                let _ = writeln!(w, "  |R(n)| < bound: {}", r.within_bound.as_str());
                let _ = writeln!(w, "  outside lemma range: {}", r.outside_lemma_range);
                if r.loglog_nonpositive {
                    let _ = writeln!(w, "  log log n <= 0");
                }
            }
            Payload::Certify(r) => {
                let _ = writeln!(w, "status: {}", r.status.as_str());
                match &r.witness {
                    Some(x) => {
                        let _ = writeln!(w, "witness: p = {}, a = {}, E(p) = {}", x.p, x.a, x.e);
                    }
                    None => {
                        let _ = writeln!(w, "witness: none");
                    }
                }
                let _ = writeln!(w, "p_r = {}", r.p_r.map_or("none".into(), |p| p.to_string()));
                let _ = writeln!(w, "log N = {}", r.log_n.text());
                let _ = writeln!(w, "log N > 10^13 log 10: {}", r.size_precondition.as_str());
                let _ = writeln!(w, "assumed large: {}", r.assumed_large);
                let _ = writeln!(w, "p_r < log N: {}", r.p_r_lt_log_n.as_str());
                let _ = writeln!(w, "p_r below lemma threshold: {}", r.p_r_below_lemma_threshold);
                for (name, v) in [
                    ("r_term", &r.r_term),
                    ("s_lower", &r.s_lower),
                    ("r_term - s_lower", &r.chain_gap),
                    ("S(N)", &r.s_exact),
                    ("rho bound", &r.rho_bound),
                    ("log rho(N)", &r.log_rho),
                ] {
                    if let Some(v) = v {
                        let _ = writeln!(w, "{name} = {}", v.text());
                    }
                }
                if let Some(c) = r.rho_check {
                    let _ = writeln!(w, "log rho(N) < rho bound: {}", c.as_str());
                }
            }
            Payload::Ca(r) => {
                let _ = writeln!(w, "# epsilon = {}", r.epsilon);
                let _ = writeln!(w, "# log N = {}", r.log_n.text());
                match &r.margin {
                    Some(m) => {
                        let _ = writeln!(w, "# margin = {}", m.text());
                    }
                    None => {
                        let _ = writeln!(w, "# margin undefined (log log N <= 0)");
                    }
                }
                let _ = write!(w, "{}", r.factorization);
            }
            Payload::Rho(r) => {
                let _ = writeln!(w, "p_r = {}", r.p_r.map_or("none".into(), |p| p.to_string()));
                let _ = writeln!(w, "log N = {}", r.log_n.text());
                let _ = writeln!(w, "log rho(N) = {}", r.log_rho.text());
                if let Some(x) = &r.rho_exact {
                    let _ = writeln!(w, "rho(N) = {x}");
                }
                if let Some(m) = &r.margin {
                    let _ = writeln!(w, "margin gamma + logloglog N - log rho(N) = {}", m.text());
                }
                if let Some(v) = r.verdict {
                    let _ = writeln!(w, "verdict: {}", v.as_str());
                }
            }
        }
        if let Some(t) = self.timing {
            let _ = writeln!(w, "time: {t:.3} s");
        }
        s
    }
}
