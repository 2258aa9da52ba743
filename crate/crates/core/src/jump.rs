//! Constructive common-index-jump engine.
//!
//! Given a finite collection of orbit spectra with positive mean
//! indices `Delta_i`, the solver builds the torus vector
//!
//! ```text
//! v = (1/(M*Delta_1), ..., 1/(M*Delta_r),
//!      2*lam_11/Delta_1, ..., 2*lam_r,iota_r/Delta_r)
//! ```
//!
//! whose first `r` coordinates come from the orbit means and whose
//! remaining coordinates come from the irrational elliptic fractions,
//! computes the lattice of integer vectors `w` with `w . v` rational
//! and the tangent subspace `V` it annihilates, enumerates the orthant
//! vertices selected by the sign patterns available in `V`, and scans
//! integers `T` whose torus point `{T v}` approaches a vertex within
//! `epsilon`. Each candidate is accepted only after every invariant of
//! the emitted solution is re-checked exactly:
//!
//! * `k_i = (floor(T/(M*Delta_i)) + chi_i) * M`, so `M | k_i`;
//! * every elliptic fraction satisfies `||k_i * lam|| < epsilon`;
//! * `|k_1*Delta_1 - k_i*Delta_i| < 1/8` across orbits;
//! * `|k_i*Delta_i - d| < eta` for `d` the shared nearest integer;
//! * `d` is even when parity enforcement is on.
//!
//! Every accept/reject decision is made by exact scalar comparison. A
//! fixed-width integer fast path accelerates the scan when its bounds
//! are certified in advance; it performs the same exact arithmetic and
//! candidates it passes are re-verified with arbitrary precision.

#![allow(clippy::result_large_err)]

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::index::{
    is_dynamically_convex, iterate_indices_with, mean_index, signature_multiplicities_with,
    IndexError, NegativeIterateConvention, OrbitSpectrum,
};
use crate::scalar::{ExactScalar, ScalarError};

/// Origin of one torus-vector coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoordinateTag {
    /// `1/(M*Delta_i)` for orbit `i` (zero-based).
    Mean { orbit: usize },
    /// `2*lam_iq/Delta_i` for the `q`-th irrational elliptic fraction
    /// of orbit `i` (both zero-based).
    Elliptic { orbit: usize, q: usize },
}

/// The vector `v` together with coordinate bookkeeping.
#[derive(Clone, Debug)]
pub struct TorusVector {
    pub entries: Vec<ExactScalar>,
    pub tags: Vec<CoordinateTag>,
    pub m: i64,
    /// Shared radicand of all entries (1 when the vector is rational).
    pub field: u64,
}

impl TorusVector {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn has_irrational_coordinate(&self) -> bool {
        self.entries.iter().any(|e| !e.is_rational())
    }
}

/// Integer relations `w . v in Q` and the subspace they annihilate.
#[derive(Clone, Debug)]
pub struct RelationLattice {
    /// Basis of the full-rank-minus-dim-V relation lattice.
    pub basis: Vec<Vec<BigInt>>,
    /// Primitive integer basis of `V`; one vector per dimension.
    pub v_basis: Vec<Vec<BigInt>>,
}

impl RelationLattice {
    pub fn dim_v(&self) -> usize {
        self.v_basis.len()
    }
}

/// A cube vertex targeted by the search, with its witness point in `V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthantVertex {
    /// `chi_k = 0` when the witness coordinate is `>= 0`, else `1`.
    pub chi: Vec<u8>,
    /// Integer witness `a` in `V` realizing the sign pattern; zero for
    /// the degenerate all-rational case.
    pub witness: Vec<BigInt>,
}

/// One verification line; both sides are rendered exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationLine {
    pub check: String,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
}

impl fmt::Display for VerificationLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {}: {} vs {}",
            if self.pass { "pass" } else { "FAIL" },
            self.check,
            self.lhs,
            self.rhs
        )
    }
}

/// A batch of verification lines. Failures are data, not errors.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerificationRecord {
    pub lines: Vec<VerificationLine>,
}

impl VerificationRecord {
    pub fn all_pass(&self) -> bool {
        self.lines.iter().all(|l| l.pass)
    }

    pub fn push(&mut self, check: String, lhs: String, rhs: String, pass: bool) {
        self.lines.push(VerificationLine {
            check,
            lhs,
            rhs,
            pass,
        });
    }
}

/// A common-index-jump solution `(T, chi, {k_i}, d)` with residuals.
#[derive(Clone, Debug)]
pub struct JumpSolution {
    pub t: i64,
    pub chi: OrthantVertex,
    pub k: Vec<i64>,
    pub d: i64,
    /// Effective epsilon after any ceiling tightening.
    pub epsilon: ExactScalar,
    pub epsilon_tightened: bool,
    pub eta: ExactScalar,
    pub m: i64,
    pub n_div: i64,
    /// Exact torus distance of `{T v_k}` to the vertex, coordinatewise.
    pub residuals: Vec<ExactScalar>,
    /// Structural invariants checked at acceptance time.
    pub report: VerificationRecord,
}

#[derive(Clone, Debug)]
pub struct JumpConfig {
    pub m: i64,
    pub n_div: i64,
    pub epsilon: ExactScalar,
    pub eta: ExactScalar,
    pub l0: i64,
    pub t_max: i64,
    pub require_even_d: bool,
    pub convention: NegativeIterateConvention,
}

impl JumpConfig {
    pub fn new(m: i64, n_div: i64, epsilon: ExactScalar, t_max: i64) -> Self {
        JumpConfig {
            m,
            n_div,
            epsilon,
            eta: ExactScalar::from_ratio(1, 20),
            l0: 3,
            t_max,
            require_even_d: false,
            convention: NegativeIterateConvention::default(),
        }
    }
}

/// Nearest torus miss seen during an exhausted scan.
#[derive(Clone, Debug)]
pub struct NearMiss {
    pub t: i64,
    /// Smallest sup-norm torus distance encountered.
    pub sup_distance: ExactScalar,
    pub note: String,
}

#[derive(Clone, Debug)]
pub enum JumpError {
    EmptySpectra,
    InvalidM,
    MNotDivisibleByN,
    InvalidEpsilon,
    InvalidEta,
    InvalidRange,
    MixedRadicands,
    NoIrrationalCoordinate,
    NotDynamicallyConvex { label: String },
    OrbitCountMismatch,
    /// `T_max` reached before a fully verified candidate appeared.
    Exhausted { scanned: i64, best: Option<NearMiss> },
    /// Invariant chain passed but the per-orbit nearest integers
    /// disagree; indicates an epsilon/eta misconfiguration.
    InconsistentD { t: i64 },
    Scalar(ScalarError),
    Index(IndexError),
}

impl fmt::Display for JumpError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JumpError::EmptySpectra => write!(f, "no spectra supplied"),
            JumpError::InvalidM => write!(f, "M must be a positive integer"),
            JumpError::MNotDivisibleByN => write!(f, "M must be divisible by N"),
            JumpError::InvalidEpsilon => write!(f, "epsilon must satisfy 0 < epsilon < 1/2"),
            JumpError::InvalidEta => write!(f, "eta must satisfy 0 < eta < 1/2"),
            JumpError::InvalidRange => write!(f, "search/verification range must be positive"),
            JumpError::MixedRadicands => write!(f, "spectra do not share one quadratic field"),
            JumpError::NoIrrationalCoordinate => {
                write!(f, "orthant set undefined for an all-rational vector")
            }
            JumpError::NotDynamicallyConvex { label } => {
                write!(f, "orbit {label} is not dynamically convex")
            }
            JumpError::OrbitCountMismatch => {
                write!(f, "solution and spectra orbit counts differ")
            }
            JumpError::Exhausted { scanned, best } => {
                write!(f, "search exhausted after {scanned} integers")?;
                if let Some(b) = best {
                    write!(f, "; best near miss T={} sup distance {} ({})", b.t, b.sup_distance, b.note)?;
                }
                Ok(())
            }
            JumpError::InconsistentD { t } => {
                write!(f, "inconsistent nearest integers across orbits at T={t}")
            }
            JumpError::Scalar(e) => write!(f, "{e}"),
            JumpError::Index(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for JumpError {}

impl From<ScalarError> for JumpError {
    fn from(e: ScalarError) -> Self {
        JumpError::Scalar(e)
    }
}

impl From<IndexError> for JumpError {
    fn from(e: IndexError) -> Self {
        JumpError::Index(e)
    }
}

/// Builds the torus vector of a spectra collection.
pub fn build_torus_vector(
    spectra: &[OrbitSpectrum],
    m: i64,
) -> Result<TorusVector, JumpError> {
    if spectra.is_empty() {
        return Err(JumpError::EmptySpectra);
    }
    if m < 1 {
        return Err(JumpError::InvalidM);
    }
    let mut entries = Vec::new();
    let mut tags = Vec::new();
    for (i, spec) in spectra.iter().enumerate() {
        let mean = mean_index(spec);
        if !mean.is_positive() {
            return Err(JumpError::Index(IndexError::NonPositiveMeanIndex {
                label: spec.label.clone(),
            }));
        }
        entries.push(mean.scale_i64(m).recip()?);
        tags.push(CoordinateTag::Mean { orbit: i });
    }
    for (i, spec) in spectra.iter().enumerate() {
        let mean = mean_index(spec);
        for (q, lam) in spec.irrational_rotation_fractions().into_iter().enumerate() {
            entries.push(lam.scale_i64(2).try_div(&mean)?);
            tags.push(CoordinateTag::Elliptic { orbit: i, q });
        }
    }
    let field = common_radicand(entries.iter()).ok_or(JumpError::MixedRadicands)?;
    Ok(TorusVector {
        entries,
        tags,
        m,
        field,
    })
}

/// Shared radicand of a scalar collection; `None` when two genuinely
/// irrational values disagree.
pub fn common_radicand<'a, I: Iterator<Item = &'a ExactScalar>>(iter: I) -> Option<u64> {
    let mut field = 1u64;
    for s in iter {
        if !s.is_rational() {
            if field == 1 {
                field = s.radicand();
            } else if field != s.radicand() {
                return None;
            }
        }
    }
    Some(field)
}

/// Kernel lattice of `w -> radical coefficient of w . v`, plus a
/// primitive basis of the annihilated subspace `V`.
///
/// Within one quadratic field the radical coefficients are a single
/// rational functional, so `dim V` is 1 when any coordinate is
/// irrational and 0 otherwise.
pub fn relation_lattice(v: &TorusVector) -> RelationLattice {
    let h = v.len();
    // Clear denominators of the radical coefficients.
    let mut den = BigInt::from(1);
    for e in &v.entries {
        den = den.lcm(e.radical_part().denom());
    }
    let b: Vec<BigInt> = v
        .entries
        .iter()
        .map(|e| {
            let r = e.radical_part() * BigRational::from_integer(den.clone());
            debug_assert!(r.is_integer());
            r.to_integer()
        })
        .collect();

    if b.iter().all(|x| x.is_zero()) {
        // Fully rational vector: every integer vector is a relation.
        let basis = (0..h).map(|i| unit_vector(h, i)).collect();
        return RelationLattice {
            basis,
            v_basis: Vec::new(),
        };
    }

    // Gcd sweep: row operations (tracked in u) reduce b to a single
    // nonzero entry g; the remaining rows of u span the kernel lattice.
    let mut b = b;
    let mut u: Vec<Vec<BigInt>> = (0..h).map(|i| unit_vector(h, i)).collect();
    loop {
        let mut pivot: Option<usize> = None;
        for (i, x) in b.iter().enumerate() {
            if !x.is_zero() {
                match pivot {
                    None => pivot = Some(i),
                    Some(p) => {
                        if x.abs() < b[p].abs() {
                            pivot = Some(i)
                        }
                    }
                }
            }
        }
        let p = pivot.expect("b has a nonzero entry");
        let mut reduced_any = false;
        for j in 0..h {
            if j != p && !b[j].is_zero() {
                let q = &b[j] / &b[p]; // truncating division is fine for the sweep
                if !q.is_zero() {
                    b[j] = &b[j] - &q * &b[p];
                    let (row_p, row_j) = (u[p].clone(), &mut u[j]);
                    for (xj, xp) in row_j.iter_mut().zip(row_p.iter()) {
                        *xj -= &q * xp;
                    }
                }
                if !b[j].is_zero() {
                    reduced_any = true;
                }
            }
        }
        let nonzero = b.iter().filter(|x| !x.is_zero()).count();
        if nonzero == 1 {
            let basis: Vec<Vec<BigInt>> = (0..h).filter(|&i| i != p).map(|i| u[i].clone()).collect();
            // V is the rational annihilator of the kernel: the line
            // spanned by the radical-coefficient vector itself.
            let mut dir: Vec<BigInt> = v
                .entries
                .iter()
                .map(|e| {
                    (e.radical_part() * BigRational::from_integer(den.clone())).to_integer()
                })
                .collect();
            primitive_signed(&mut dir);
            return RelationLattice {
                basis,
                v_basis: vec![dir],
            };
        }
        let _ = reduced_any;
    }
}

fn unit_vector(h: usize, i: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); h];
    v[i] = BigInt::from(1);
    v
}

/// Divides out the gcd and flips signs so the first nonzero entry is
/// positive.
fn primitive_signed(v: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for x in v.iter() {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return;
    }
    for x in v.iter_mut() {
        *x = &*x / &g;
    }
    if let Some(first) = v.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in v.iter_mut() {
                *x = -&*x;
            }
        }
    }
}

fn psi(x: &BigInt) -> u8 {
    if x.is_negative() {
        1
    } else {
        0
    }
}

/// Orthant vertices targeted by the search: one per connected component
/// of `V` minus the coordinate hyperplanes at irrational coordinates.
/// The list is closed under the antipodal map.
pub fn admissible_orthants(
    lattice: &RelationLattice,
    v: &TorusVector,
) -> Result<Vec<OrthantVertex>, JumpError> {
    if !v.has_irrational_coordinate() {
        return Err(JumpError::NoIrrationalCoordinate);
    }
    assert!(
        lattice.dim_v() == 1,
        "an irrational coordinate in one quadratic field forces dim V = 1"
    );
    let dir = &lattice.v_basis[0];
    // The witness line misses every deleted hyperplane: dir is
    // proportional to the radical coefficients, which are nonzero
    // exactly at the irrational coordinates.
    for (e, x) in v.entries.iter().zip(dir.iter()) {
        debug_assert_eq!(e.is_rational(), x.is_zero());
        let _ = (e, x);
    }
    let antipode: Vec<BigInt> = dir.iter().map(|x| -x).collect();
    Ok(vec![
        OrthantVertex {
            chi: dir.iter().map(psi).collect(),
            witness: dir.clone(),
        },
        OrthantVertex {
            chi: antipode.iter().map(psi).collect(),
            witness: antipode,
        },
    ])
}

/// Componentwise torus distance of `{t v_k}` to a `{0,1}` vertex
/// coordinate. With wraparound both vertex values reduce to the
/// distance to the nearest integer.
pub fn vertex_distance(entry: &ExactScalar, t: i64, _chi: u8) -> ExactScalar {
    entry.scale_i64(t).dist_to_integer()
}

/// Outcome of a bounded vertex search.
#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub hits: Vec<i64>,
    /// True when `T_max` was reached before `count` hits.
    pub exhausted: bool,
    pub best_near_miss: Option<NearMiss>,
}

/// Scans `T = 1..=t_max` for `|{T v} - chi| < epsilon` componentwise
/// with wraparound, returning up to `count` hits in increasing order.
/// An empty or short list means exhaustion, not nonexistence.
pub fn search_t(
    v: &TorusVector,
    chi: &OrthantVertex,
    epsilon: &ExactScalar,
    t_max: i64,
    count: usize,
) -> Result<SearchOutcome, JumpError> {
    if !epsilon.is_positive()
        || epsilon.try_cmp(&ExactScalar::from_ratio(1, 2))? != Ordering::Less
    {
        return Err(JumpError::InvalidEpsilon);
    }
    if count == 0 || t_max < 1 {
        return Err(JumpError::InvalidRange);
    }
    debug_assert_eq!(chi.chi.len(), v.len());
    let mut scanner = Scanner::new(v, epsilon, t_max);
    let mut hits = Vec::new();
    let mut best: Option<NearMiss> = None;
    for t in 1..=t_max {
        if scanner.passes(t) {
            hits.push(t);
            if hits.len() == count {
                return Ok(SearchOutcome {
                    hits,
                    exhausted: false,
                    best_near_miss: best,
                });
            }
        } else if count > hits.len() {
            track_near_miss(&mut best, v, t);
        }
    }
    Ok(SearchOutcome {
        hits,
        exhausted: true,
        best_near_miss: best,
    })
}

fn track_near_miss(best: &mut Option<NearMiss>, v: &TorusVector, t: i64) {
    // Keeping the exact sup distance for every scanned integer would
    // dominate the scan; sample the first stretch and every 256th
    // integer after it.
    if t > 256 && t & 0xff != 0 {
        return;
    }
    let sup = sup_distance(v, t);
    let better = match best {
        None => true,
        Some(b) => sup.try_cmp(&b.sup_distance) == Ok(Ordering::Less),
    };
    if better {
        *best = Some(NearMiss {
            t,
            sup_distance: sup,
            note: "sampled torus sup-distance".to_string(),
        });
    }
}

fn sup_distance(v: &TorusVector, t: i64) -> ExactScalar {
    let mut sup = ExactScalar::zero();
    for e in &v.entries {
        let d = vertex_distance(e, t, 0);
        if d.try_cmp(&sup) == Ok(Ordering::Greater) {
            sup = d;
        }
    }
    sup
}

/// Epsilon ceiling `1/(16 M max Delta)`; epsilons at or above it are
/// tightened to the rational value `1/(16 M (floor(max Delta) + 1))`.
pub fn epsilon_ceiling(spectra: &[OrbitSpectrum], m: i64) -> (ExactScalar, ExactScalar) {
    let mut max_mean = ExactScalar::zero();
    for spec in spectra {
        let mean = mean_index(spec);
        if mean.try_cmp(&max_mean) == Ok(Ordering::Greater) {
            max_mean = mean;
        }
    }
    let ceiling = max_mean.scale_i64(16 * m).recip().expect("positive mean");
    let floor_plus = max_mean.floor() + 1;
    let tightened = ExactScalar::from_rational(BigRational::new(
        BigInt::from(1),
        BigInt::from(16 * m) * floor_plus,
    ));
    (ceiling, tightened)
}

/// Runs the constructive search end to end and returns the first fully
/// verified solution in scan order (ascending `T`, vertices in listed
/// order).
pub fn solve_jump(
    spectra: &[OrbitSpectrum],
    config: &JumpConfig,
) -> Result<JumpSolution, JumpError> {
    if spectra.is_empty() {
        return Err(JumpError::EmptySpectra);
    }
    if config.m < 1 {
        return Err(JumpError::InvalidM);
    }
    if config.n_div < 1 || config.m % config.n_div != 0 {
        return Err(JumpError::MNotDivisibleByN);
    }
    if !config.eta.is_positive()
        || config.eta.try_cmp(&ExactScalar::from_ratio(1, 2))? != Ordering::Less
    {
        return Err(JumpError::InvalidEta);
    }
    if config.t_max < 1 || config.l0 < 1 {
        return Err(JumpError::InvalidRange);
    }
    if !config.epsilon.is_positive()
        || config.epsilon.try_cmp(&ExactScalar::from_ratio(1, 2))? != Ordering::Less
    {
        return Err(JumpError::InvalidEpsilon);
    }

    let v = build_torus_vector(spectra, config.m)?;
    let (ceiling, tightened_value) = epsilon_ceiling(spectra, config.m);
    let (epsilon, epsilon_tightened) =
        if config.epsilon.try_cmp(&ceiling)? == Ordering::Less {
            (config.epsilon.clone(), false)
        } else {
            (tightened_value, true)
        };

    let vertices: Vec<OrthantVertex> = if v.has_irrational_coordinate() {
        let lattice = relation_lattice(&v);
        admissible_orthants(&lattice, &v)?
    } else {
        vec![OrthantVertex {
            chi: vec![0; v.len()],
            witness: vec![BigInt::zero(); v.len()],
        }]
    };

    let means: Vec<ExactScalar> = spectra.iter().map(mean_index).collect();
    let lambdas: Vec<Vec<ExactScalar>> = spectra
        .iter()
        .map(|s| s.irrational_rotation_fractions())
        .collect();

    let mut scanner = Scanner::new(&v, &epsilon, config.t_max);
    let mut best: Option<NearMiss> = None;
    for t in 1..=config.t_max {
        if !scanner.passes(t) {
            track_near_miss(&mut best, &v, t);
            continue;
        }
        for vertex in &vertices {
            if let Some(solution) = try_accept(
                t,
                vertex,
                &v,
                &means,
                &lambdas,
                &epsilon,
                epsilon_tightened,
                config,
            )? {
                return Ok(solution);
            }
        }
    }
    Err(JumpError::Exhausted {
        scanned: config.t_max,
        best,
    })
}

#[allow(clippy::too_many_arguments)]
fn try_accept(
    t: i64,
    vertex: &OrthantVertex,
    v: &TorusVector,
    means: &[ExactScalar],
    lambdas: &[Vec<ExactScalar>],
    epsilon: &ExactScalar,
    epsilon_tightened: bool,
    config: &JumpConfig,
) -> Result<Option<JumpSolution>, JumpError> {
    let r = means.len();
    let m = config.m;
    let mut report = VerificationRecord::default();

    // k_i = (floor(T/(M Delta_i)) + chi_i) M
    let mut k = Vec::with_capacity(r);
    for (i, mean) in means.iter().enumerate() {
        let quotient = ExactScalar::from_int(t).try_div(&mean.scale_i64(m))?;
        let fl = quotient.floor().to_i64().ok_or(IndexError::IndexOverflow)?;
        let ki = (fl + vertex.chi[i] as i64) * m;
        if ki < 1 {
            return Ok(None);
        }
        k.push(ki);
    }

    // d = shared nearest integer of k_i Delta_i.
    let kd: Vec<ExactScalar> = k
        .iter()
        .zip(means.iter())
        .map(|(&ki, mean)| mean.scale_i64(ki))
        .collect();
    let (d_big, tie) = kd[0].nearest_integer();
    if tie {
        return Ok(None);
    }
    let d = d_big.to_i64().ok_or(IndexError::IndexOverflow)?;
    if config.require_even_d && d % 2 != 0 {
        return Ok(None);
    }

    let half_eighth = ExactScalar::from_ratio(1, 8);
    let mut all_pass = true;

    // |k_i Delta_i - d| < eta, all orbits.
    for (i, kdi) in kd.iter().enumerate() {
        let resid = kdi.try_sub(&ExactScalar::from_int(d))?.abs();
        let pass = resid.try_cmp(&config.eta)? == Ordering::Less;
        all_pass &= pass;
        report.push(
            format!("mean-residual orbit#{i}"),
            format!("|{} - {}| = {}", kdi, d, resid),
            format!("< {}", config.eta),
            pass,
        );
    }
    if !all_pass {
        return Ok(None);
    }

    // |k_1 Delta_1 - k_i Delta_i| < 1/8.
    for (i, kdi) in kd.iter().enumerate().skip(1) {
        let diff = kd[0].try_sub(kdi)?.abs();
        let pass = diff.try_cmp(&half_eighth)? == Ordering::Less;
        all_pass &= pass;
        report.push(
            format!("pairwise-alignment orbit#{i}"),
            format!("|{} - {}| = {}", kd[0], kdi, diff),
            "< 1/8".to_string(),
            pass,
        );
    }
    if !all_pass {
        return Ok(None);
    }

    // ||k_i lam_iq|| < epsilon for every elliptic fraction.
    for (i, lams) in lambdas.iter().enumerate() {
        for (q, lam) in lams.iter().enumerate() {
            let dist = lam.scale_i64(k[i]).dist_to_integer();
            let pass = dist.try_cmp(epsilon)? == Ordering::Less;
            all_pass &= pass;
            report.push(
                format!("elliptic-distance orbit#{i} q#{q}"),
                format!("||{} * {}|| = {}", k[i], lam, dist),
                format!("< {}", epsilon),
                pass,
            );
        }
    }
    if !all_pass {
        return Ok(None);
    }

    // All analytic invariants hold; the nearest integers must agree.
    for kdi in &kd {
        let (di, _) = kdi.nearest_integer();
        if di != BigInt::from(d) {
            return Err(JumpError::InconsistentD { t });
        }
    }
    for (i, &ki) in k.iter().enumerate() {
        let pass = ki % m == 0;
        all_pass &= pass;
        report.push(
            format!("divisibility orbit#{i}"),
            format!("{ki} mod {m}"),
            "= 0".to_string(),
            pass,
        );
    }
    if config.require_even_d {
        report.push(
            "parity".to_string(),
            format!("{d} mod 2"),
            "= 0".to_string(),
            d % 2 == 0,
        );
    }
    debug_assert!(all_pass);

    let residuals: Vec<ExactScalar> = v
        .entries
        .iter()
        .zip(vertex.chi.iter())
        .map(|(e, &c)| vertex_distance(e, t, c))
        .collect();

    Ok(Some(JumpSolution {
        t,
        chi: vertex.clone(),
        k,
        d,
        epsilon: epsilon.clone(),
        epsilon_tightened,
        eta: config.eta.clone(),
        m,
        n_div: config.n_div,
        residuals,
        report,
    }))
}

/// Re-derives the index recurrence identities from the block calculus:
/// the mean residual bound, the forward shift
/// `mu_pm(x^{k_i+l}) = d + mu_pm(x^l)` and the backward shift
/// `mu_pm(x^{k_i-l}) = d + mu_pm(x^{-l}) + b_plus(x^l) - b_minus(x^l)`
/// under the shipped multiplicity convention. Each line carries both
/// sides; failures are data.
pub fn verify_recurrence(
    solution: &JumpSolution,
    spectra: &[OrbitSpectrum],
    l0: i64,
    eta: &ExactScalar,
    convention: NegativeIterateConvention,
) -> Result<VerificationRecord, JumpError> {
    if spectra.len() != solution.k.len() {
        return Err(JumpError::OrbitCountMismatch);
    }
    if l0 < 1 {
        return Err(JumpError::InvalidRange);
    }
    let mut record = VerificationRecord::default();
    let d = solution.d;
    for (spec, &ki) in spectra.iter().zip(solution.k.iter()) {
        let mean = mean_index(spec);
        let resid = mean
            .scale_i64(ki)
            .try_sub(&ExactScalar::from_int(d))?
            .abs();
        let pass = resid.try_cmp(eta)? == Ordering::Less;
        record.push(
            format!("mean-residual {}", spec.label),
            format!("|{} * ({}) - {}| = {}", ki, mean, d, resid),
            format!("< {}", eta),
            pass,
        );
        for l in 1..=l0 {
            let fwd = iterate_indices_with(spec, ki + l, convention)?;
            let base = iterate_indices_with(spec, l, convention)?;
            let pass = fwd.lower == d + base.lower && fwd.upper == d + base.upper;
            record.push(
                format!("shift-forward {} l={l}", spec.label),
                format!("{fwd}"),
                format!("{d} + {base}"),
                pass,
            );
            if ki == l {
                // the zeroth iterate is undefined; nothing to compare
                continue;
            }
            let bwd = iterate_indices_with(spec, ki - l, convention)?;
            let neg = iterate_indices_with(spec, -l, convention)?;
            let (bp, bm) = signature_multiplicities_with(spec, l, convention);
            let pass = bwd.lower == d + neg.lower + bp - bm && bwd.upper == d + neg.upper + bp - bm;
            record.push(
                format!("shift-backward {} l={l}", spec.label),
                format!("{bwd}"),
                format!("{d} + {neg} + {bp} - {bm}"),
                pass,
            );
        }
    }
    Ok(record)
}

/// Convexity growth bounds along the solution:
/// `mu_minus(x^{k_i+l}) >= d + 2l + (n-1)` and
/// `mu_plus(x^{k_i-l}) <= d - 2l` for `1 <= l <= l_range`.
/// Requires every spectrum to be dynamically convex.
pub fn verify_convexity_bounds(
    solution: &JumpSolution,
    spectra: &[OrbitSpectrum],
    n: u32,
    l_range: i64,
) -> Result<VerificationRecord, JumpError> {
    if spectra.len() != solution.k.len() {
        return Err(JumpError::OrbitCountMismatch);
    }
    if l_range < 1 {
        return Err(JumpError::InvalidRange);
    }
    for spec in spectra {
        let (convex, _) = is_dynamically_convex(spec, n)?;
        if !convex {
            return Err(JumpError::NotDynamicallyConvex {
                label: spec.label.clone(),
            });
        }
    }
    let m = n as i64 - 1;
    let d = solution.d;
    let mut record = VerificationRecord::default();
    for (spec, &ki) in spectra.iter().zip(solution.k.iter()) {
        for l in 1..=l_range {
            let fwd = iterate_indices_with(spec, ki + l, NegativeIterateConvention::default())?;
            let bound = d + 2 * l + m;
            record.push(
                format!("growth-lower {} l={l}", spec.label),
                format!("{} (slack {})", fwd.lower, fwd.lower - bound),
                format!(">= {bound}"),
                fwd.lower >= bound,
            );
            if ki == l {
                continue;
            }
            let bwd = iterate_indices_with(spec, ki - l, NegativeIterateConvention::default())?;
            let bound = d - 2 * l;
            record.push(
                format!("decay-upper {} l={l}", spec.label),
                format!("{} (slack {})", bwd.upper, bound - bwd.upper),
                format!("<= {bound}"),
                bwd.upper <= bound,
            );
        }
    }
    Ok(record)
}

// ---------------------------------------------------------------------------
// Scan engine
// ---------------------------------------------------------------------------

/// Exact per-integer torus test `||T v_k|| < epsilon` for all k.
///
/// When the magnitudes certify, the test runs on fixed-width integers:
/// each coordinate is `(p + q sqrt(d))/c` with integer `p`, `q`, `c`,
/// the running floor of `T sqrt(d)` is maintained incrementally, and
/// every comparison reduces to comparing `m sqrt(d)` against an
/// integer, i.e. comparing squares. Otherwise the same predicate runs
/// on arbitrary-precision scalars. Both paths are exact.
struct Scanner {
    mode: ScanMode,
}

enum ScanMode {
    Fast(FastScan),
    Exact(ExactScan),
}

impl Scanner {
    fn new(v: &TorusVector, epsilon: &ExactScalar, t_max: i64) -> Scanner {
        if let Some(fast) = FastScan::try_new(v, epsilon, t_max) {
            Scanner {
                mode: ScanMode::Fast(fast),
            }
        } else {
            Scanner {
                mode: ScanMode::Exact(ExactScan {
                    entries: v.entries.clone(),
                    epsilon: epsilon.clone(),
                }),
            }
        }
    }

    /// Sequential test; `t` must be scanned in increasing order starting
    /// from 1 for the fast path's running floor.
    fn passes(&mut self, t: i64) -> bool {
        match &mut self.mode {
            ScanMode::Fast(f) => f.passes(t),
            ScanMode::Exact(e) => e.passes(t),
        }
    }
}

struct ExactScan {
    entries: Vec<ExactScalar>,
    epsilon: ExactScalar,
}

impl ExactScan {
    fn passes(&self, t: i64) -> bool {
        self.entries.iter().all(|e| {
            e.scale_i64(t)
                .dist_to_integer()
                .try_cmp(&self.epsilon)
                .expect("single field")
                == Ordering::Less
        })
    }
}

struct FastCoord {
    p: i128,
    q: i128,
    c: i128,
}

struct FastScan {
    d: i128,
    /// Rational coordinates first so cheap congruence failures
    /// short-circuit the scan.
    coords: Vec<FastCoord>,
    eps_num: i128,
    eps_den: i128,
    /// floor(t * sqrt(d)) maintained incrementally; unused when d == 1.
    floor_sqrt: i128,
    last_t: i64,
    w: i128,
}

impl FastScan {
    fn try_new(v: &TorusVector, epsilon: &ExactScalar, t_max: i64) -> Option<FastScan> {
        if !epsilon.is_rational() || t_max < 1 {
            return None;
        }
        let eps_num = epsilon.rational_part().numer().to_i128()?;
        let eps_den = epsilon.rational_part().denom().to_i128()?;
        let d = v.field as i128;
        let mut coords = Vec::with_capacity(v.len());
        for e in &v.entries {
            let c = e
                .rational_part()
                .denom()
                .lcm(e.radical_part().denom());
            let p = (e.rational_part() * BigRational::from_integer(c.clone())).to_integer();
            let q = (e.radical_part() * BigRational::from_integer(c.clone())).to_integer();
            coords.push(FastCoord {
                p: p.to_i128()?,
                q: q.to_i128()?,
                c: c.to_i128()?,
            });
        }
        coords.sort_by_key(|fc| (fc.q != 0, fc.q.unsigned_abs()));

        // Certify that every intermediate fits comfortably in i128.
        // Worst terms: (|q| eps_den t)^2 d and the squared rational
        // bounds around c*eps + |A| eps_den, with |A| bounded through
        // floor(t sqrt(d)) <= t(floor(sqrt(d)) + 1).
        let t_bound = t_max as u128 + 1;
        let lim: u128 = u128::MAX >> 3;
        let sqrt_d_up = int_sqrt_floor(d) as u128 + 1;
        let mut ok = true;
        for fc in &coords {
            let q = fc.q.unsigned_abs();
            let p = fc.p.unsigned_abs();
            let c = fc.c.unsigned_abs();
            let a_bound = q
                .checked_mul(sqrt_d_up)
                .and_then(|x| x.checked_add(p))
                .and_then(|x| x.checked_mul(t_bound))
                .and_then(|x| x.checked_add(q + c))
                .unwrap_or(u128::MAX);
            let m_bound = q
                .checked_mul(eps_den.unsigned_abs())
                .and_then(|x| x.checked_mul(t_bound))
                .unwrap_or(u128::MAX);
            let n_bound = a_bound
                .checked_mul(eps_den.unsigned_abs())
                .and_then(|x| x.checked_add(c.checked_mul(eps_num.unsigned_abs())?))
                .unwrap_or(u128::MAX);
            let side = m_bound.max(n_bound);
            ok &= side
                .checked_mul(side)
                .and_then(|x| x.checked_mul(v.field as u128))
                .map(|x| x < lim)
                .unwrap_or(false);
        }
        // The running floor itself squares against d*t^2.
        ok &= (t_bound)
            .checked_mul(t_bound)
            .and_then(|x| x.checked_mul(v.field as u128))
            .map(|x| x < lim)
            .unwrap_or(false);
        if !ok {
            return None;
        }
        let w = int_sqrt_floor(d);
        Some(FastScan {
            d,
            coords,
            eps_num,
            eps_den,
            floor_sqrt: 0,
            last_t: 0,
            w,
        })
    }

    fn passes(&mut self, t: i64) -> bool {
        debug_assert_eq!(t, self.last_t + 1, "fast scan is strictly sequential");
        self.last_t = t;
        let t = t as i128;
        if self.d > 1 {
            // floor((t) sqrt d) from floor((t-1) sqrt d): advance by w
            // or w+1, decided by squaring.
            let mut f = self.floor_sqrt + self.w;
            while (f + 1) * (f + 1) <= self.d * t * t {
                f += 1;
            }
            self.floor_sqrt = f;
        }
        let fl = self.floor_sqrt;
        for fc in &self.coords {
            // x*c = A + q*theta with A = t*p + q*floor, theta = t*sqrt(d) - floor
            let a = t * fc.p + fc.q * fl;
            if fc.q == 0 {
                // distance of A/c to nearest integer: min(r, c-r)/c < eps
                let r = a.rem_euclid(fc.c);
                let dist_num = r.min(fc.c - r);
                if dist_num * self.eps_den >= fc.c * self.eps_num {
                    return false;
                }
                continue;
            }
            // candidate nearest integers j of (A + q theta)/c
            let reach = fc.q.abs() + 1;
            let j_lo = (a - reach).div_euclid(fc.c);
            let j_hi = (a + reach).div_euclid(fc.c) + 1;
            let mut near = false;
            for j in j_lo..=j_hi {
                let b = a - j * fc.c;
                // need -c*eps < b + q*theta < c*eps, theta = t sqrt d - fl
                // i.e. q*t*sqrt(d) strictly between
                //      (-c eps_num/eps_den - b + q fl) and (c eps_num/eps_den - b + q fl)
                let lo_num = -fc.c * self.eps_num - (b - fc.q * fl) * self.eps_den;
                let hi_num = fc.c * self.eps_num - (b - fc.q * fl) * self.eps_den;
                let m = fc.q * t * self.eps_den;
                if cmp_m_sqrtd_vs_n(m, self.d, lo_num) == Ordering::Greater
                    && cmp_m_sqrtd_vs_n(m, self.d, hi_num) == Ordering::Less
                {
                    near = true;
                    break;
                }
            }
            if !near {
                return false;
            }
        }
        true
    }
}

fn int_sqrt_floor(n: i128) -> i128 {
    if n < 2 {
        return n.max(0);
    }
    let mut x = n;
    let mut y = (x + 1) / 2;
    while y < x {
        x = y;
        y = (x + n / x) / 2;
    }
    x
}

/// Compares `m*sqrt(d)` with the integer `n`, exactly.
fn cmp_m_sqrtd_vs_n(m: i128, d: i128, n: i128) -> Ordering {
    debug_assert!(d >= 1);
    if m == 0 {
        return 0.cmp(&n);
    }
    match (m > 0, n > 0) {
        (true, false) => Ordering::Greater,
        (false, true) => Ordering::Less,
        (true, true) => (m * m * d).cmp(&(n * n)),
        (false, false) => {
            if n == 0 {
                Ordering::Less
            } else {
                (n * n).cmp(&(m * m * d))
            }
        }
    }
}
