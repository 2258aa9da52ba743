//! Canonical machine-readable reports.
//!
//! Every scalar in a report body is serialized in the exact literal
//! grammar (`12+6*sqrt(3)`), never as a decimal, so values survive
//! round trips. Decimal renderings live only in the human-readable
//! summary. Report bodies carry no timestamps or host details;
//! identical inputs produce byte-identical documents.

use serde::{Deserialize, Serialize};

use czjump_core::index::NegativeIterateConvention;
use czjump_core::jump::{JumpSolution, OrthantVertex, VerificationLine, VerificationRecord};
use czjump_core::scalar::ExactScalar;

use num_bigint::BigInt;

pub const SCHEMA: u32 = 1;

/// Ten-digit decimal rendering for the human sidecar.
pub fn decimal(value: &ExactScalar) -> String {
    let (lo, hi) = value.to_interval(10);
    if lo == hi {
        format!("= {}", ratio_decimal(&lo))
    } else {
        format!("~ {}", ratio_decimal(&lo))
    }
}

fn ratio_decimal(r: &num_rational::BigRational) -> String {
    // lo is m/10^10 by construction
    let scaled = r * num_rational::BigRational::from_integer(BigInt::from(10u64.pow(10)));
    let m = scaled.to_integer();
    let neg = m < BigInt::from(0);
    let mag = if neg { -m } else { m };
    let digits = mag.to_string();
    let (ip, fp) = if digits.len() > 10 {
        let cut = digits.len() - 10;
        (digits[..cut].to_string(), digits[cut..].to_string())
    } else {
        ("0".to_string(), format!("{digits:0>10}"))
    };
    format!("{}{}.{}", if neg { "-" } else { "" }, ip, fp)
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct LineDoc {
    pub check: String,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
}

impl From<&VerificationLine> for LineDoc {
    fn from(line: &VerificationLine) -> Self {
        LineDoc {
            check: line.check.clone(),
            lhs: line.lhs.clone(),
            rhs: line.rhs.clone(),
            pass: line.pass,
        }
    }
}

pub fn record_docs(record: &VerificationRecord) -> Vec<LineDoc> {
    record.lines.iter().map(LineDoc::from).collect()
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct IndexRow {
    pub orbit: String,
    pub k: i64,
    pub mu_minus: i64,
    pub mu_plus: i64,
    pub b_plus: i64,
    pub b_minus: i64,
    pub mean_index: String,
    pub mean_index_iterate: String,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct ConvexityRow {
    pub orbit: String,
    pub convex: bool,
    pub margin: i64,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct IndexReport {
    pub schema: u32,
    pub command: String,
    pub n: u32,
    pub field: u64,
    pub resonant: bool,
    pub rows: Vec<IndexRow>,
    pub convexity: Vec<ConvexityRow>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct JumpConfigDoc {
    pub m: i64,
    pub n_div: i64,
    pub epsilon_requested: String,
    pub epsilon_effective: String,
    pub epsilon_tightened: bool,
    pub eta: String,
    pub l0: i64,
    pub t_max: i64,
    pub even_d: bool,
}

/// Convention notes repeated in every jump report.
#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct ConventionDoc {
    pub negative_iterates: String,
    pub signature_split: String,
    pub torus_distance: String,
    pub vertex_usage: String,
}

impl ConventionDoc {
    pub fn current(convention: NegativeIterateConvention) -> Self {
        ConventionDoc {
            negative_iterates: convention.name().to_string(),
            signature_split: "equal split at degenerate rotation crossings; shear-block \
                              multiplicities are conventions validated by the backward \
                              shift identity"
                .to_string(),
            torus_distance: "componentwise with wraparound (sup norm)".to_string(),
            vertex_usage: "mean-coordinate vertex entries enter k_i; elliptic entries \
                           only steer the search"
                .to_string(),
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct SolutionDoc {
    pub t: i64,
    pub chi: Vec<u8>,
    pub witness: Vec<String>,
    pub k: Vec<i64>,
    pub d: i64,
    pub residuals: Vec<String>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct JumpReport {
    pub schema: u32,
    pub command: String,
    pub n: u32,
    pub field: u64,
    pub config: JumpConfigDoc,
    pub conventions: ConventionDoc,
    pub solution: SolutionDoc,
    pub invariants: Vec<LineDoc>,
    pub recurrence: Vec<LineDoc>,
    /// Present only when every orbit is dynamically convex.
    pub convexity: Option<Vec<LineDoc>>,
    pub verdict: String,
}

impl JumpReport {
    pub fn all_pass(&self) -> bool {
        self.invariants.iter().all(|l| l.pass)
            && self.recurrence.iter().all(|l| l.pass)
            && self
                .convexity
                .as_ref()
                .map(|ls| ls.iter().all(|l| l.pass))
                .unwrap_or(true)
    }
}

pub fn solution_doc(solution: &JumpSolution) -> SolutionDoc {
    SolutionDoc {
        t: solution.t,
        chi: solution.chi.chi.clone(),
        witness: solution.chi.witness.iter().map(|w| w.to_string()).collect(),
        k: solution.k.clone(),
        d: solution.d,
        residuals: solution.residuals.iter().map(|r| r.to_string()).collect(),
    }
}

/// Rebuilds the solver solution from a serialized jump report.
pub fn solution_from_report(report: &JumpReport) -> Result<JumpSolution, String> {
    let parse = |text: &str| -> Result<ExactScalar, String> {
        ExactScalar::parse(text).map_err(|e| format!("bad scalar '{text}': {e}"))
    };
    let witness = report
        .solution
        .witness
        .iter()
        .map(|w| w.parse::<BigInt>().map_err(|e| format!("bad witness: {e}")))
        .collect::<Result<Vec<BigInt>, String>>()?;
    let residuals = report
        .solution
        .residuals
        .iter()
        .map(|r| parse(r))
        .collect::<Result<Vec<ExactScalar>, String>>()?;
    Ok(JumpSolution {
        t: report.solution.t,
        chi: OrthantVertex {
            chi: report.solution.chi.clone(),
            witness,
        },
        k: report.solution.k.clone(),
        d: report.solution.d,
        epsilon: parse(&report.config.epsilon_effective)?,
        epsilon_tightened: report.config.epsilon_tightened,
        eta: parse(&report.config.eta)?,
        m: report.config.m,
        n_div: report.config.n_div,
        residuals,
        report: VerificationRecord::default(),
    })
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct MeanRow {
    pub orbit: String,
    pub mean_index: String,
    pub rational: bool,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct RationalityDoc {
    pub carriers: Vec<String>,
    pub rational_count: usize,
    pub irrational_count: usize,
    pub required_irrational: usize,
    pub pass: bool,
    pub witness: Option<String>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct RatioDoc {
    /// `rational[i][j]` over catalogue orbits, in catalogue order.
    pub rational: Vec<Vec<bool>>,
    pub classes: Vec<Vec<String>>,
    pub required: usize,
    pub pass: bool,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct ResonanceRow {
    pub orbit: String,
    pub coefficient: String,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct ResonanceDoc {
    pub values: Vec<ResonanceRow>,
    pub consistent: bool,
    pub deviations: Vec<(String, String, String)>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct CarrierEntryDoc {
    pub degree: i64,
    pub sandwich: Vec<(String, i64)>,
    pub admissible: Vec<(String, i64)>,
    pub sdm_candidates: Vec<(String, i64)>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct CarrierDoc {
    pub window: Vec<i64>,
    pub entries: Vec<CarrierEntryDoc>,
    pub sdm_flags: Vec<(String, i64)>,
    pub inconsistent_degrees: Vec<i64>,
    pub conflicts: Vec<(i64, i64, String)>,
    pub distinct_orbit_count: usize,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct VerdictDoc {
    pub name: String,
    /// `None` when the verdict is skipped (resonant catalogue).
    pub pass: Option<bool>,
    pub detail: String,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct AnalyzeReport {
    pub schema: u32,
    pub command: String,
    pub n: u32,
    pub field: u64,
    pub resonant: bool,
    pub warning: Option<String>,
    pub means: Vec<MeanRow>,
    pub rationality: Option<RationalityDoc>,
    pub ratios: Option<RatioDoc>,
    pub resonance: Option<ResonanceDoc>,
    pub carriers: Option<CarrierDoc>,
    pub verdicts: Vec<VerdictDoc>,
}

impl AnalyzeReport {
    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass.unwrap_or(true))
    }
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct SuiteRow {
    pub name: String,
    pub cases: usize,
    pub pass: bool,
    pub detail: String,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct VerifyReport {
    pub schema: u32,
    pub command: String,
    pub suites: Vec<SuiteRow>,
}

/// Canonical body: pretty JSON with a trailing newline.
pub fn to_canonical_json<T: Serialize>(doc: &T) -> String {
    let mut body = serde_json::to_string_pretty(doc).expect("report serializes");
    body.push('\n');
    body
}
