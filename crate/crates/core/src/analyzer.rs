//! Catalogue-level verification: ellipsoid catalogues, degree windows,
//! carrier feasibility with degenerate-maximum detection, and the
//! rationality, ratio and resonance classifications.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_traits::Zero;

use crate::index::{
    is_dynamically_convex, iterate_indices, mean_action_ratio, mean_index, IndexError,
    OrbitSpectrum, TransverseBlock,
};
use crate::jump::{common_radicand, JumpSolution};
use crate::scalar::{ExactScalar, PiMultiple, ScalarError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Orbits of `1/2 sum alpha_i (p_i^2 + q_i^2) = 1`.
    Ellipsoid { alpha: Vec<ExactScalar> },
    User,
}

/// A finite catalogue of closed-orbit spectra in one quadratic field.
#[derive(Clone, Debug)]
pub struct OrbitCatalogue {
    /// Ambient half-dimension; every orbit carries `n - 1` blocks.
    pub n: u32,
    pub orbits: Vec<OrbitSpectrum>,
    pub provenance: Provenance,
    /// Set when two defining frequencies have a rational ratio, in
    /// which case infinitely many closed characteristics are expected
    /// and the finiteness-based verdicts do not apply.
    pub resonant: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnalyzerError {
    EmptyAlpha,
    AmbientTooSmall { n: u32 },
    NonPositiveAlpha { position: usize },
    UnsortedAlpha { position: usize },
    MixedRadicands,
    BlockCountMismatch { label: String, expected: usize },
    OddDegree { d: i64 },
    DegreeTooSmall { d: i64, min: i64 },
    NotDynamicallyConvex { label: String },
    SolutionMismatch,
    NoReoccurringOrbit,
    ZeroMeanIndex { label: String },
    Scalar(ScalarError),
    Index(IndexError),
}

impl fmt::Display for AnalyzerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnalyzerError::EmptyAlpha => write!(f, "alpha list is empty"),
            AnalyzerError::AmbientTooSmall { n } => {
                write!(f, "ambient half-dimension {n} must be at least 2")
            }
            AnalyzerError::NonPositiveAlpha { position } => {
                write!(f, "alpha #{position} is not positive")
            }
            AnalyzerError::UnsortedAlpha { position } => {
                write!(f, "alpha #{position} breaks the ascending order")
            }
            AnalyzerError::MixedRadicands => write!(f, "catalogue mixes quadratic fields"),
            AnalyzerError::BlockCountMismatch { label, expected } => {
                write!(f, "orbit {label} must carry {expected} blocks")
            }
            AnalyzerError::OddDegree { d } => write!(f, "window level {d} must be even"),
            AnalyzerError::DegreeTooSmall { d, min } => {
                write!(f, "window level {d} below the minimum {min}")
            }
            AnalyzerError::NotDynamicallyConvex { label } => {
                write!(f, "orbit {label} is not dynamically convex")
            }
            AnalyzerError::SolutionMismatch => {
                write!(f, "solution orbit count does not match the catalogue")
            }
            AnalyzerError::NoReoccurringOrbit => {
                write!(f, "resonance table needs at least one reoccurring orbit")
            }
            AnalyzerError::ZeroMeanIndex { label } => {
                write!(f, "orbit {label} has zero mean index")
            }
            AnalyzerError::Scalar(e) => write!(f, "{e}"),
            AnalyzerError::Index(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for AnalyzerError {}

impl From<ScalarError> for AnalyzerError {
    fn from(e: ScalarError) -> Self {
        AnalyzerError::Scalar(e)
    }
}

impl From<IndexError> for AnalyzerError {
    fn from(e: IndexError) -> Self {
        AnalyzerError::Index(e)
    }
}

impl OrbitCatalogue {
    /// Validates block counts, positivity and the single-field rule.
    pub fn new(
        n: u32,
        orbits: Vec<OrbitSpectrum>,
        provenance: Provenance,
        resonant: bool,
    ) -> Result<Self, AnalyzerError> {
        if n < 2 {
            return Err(AnalyzerError::AmbientTooSmall { n });
        }
        let expected = n as usize - 1;
        let mut scalars: Vec<ExactScalar> = Vec::new();
        for orbit in &orbits {
            if orbit.blocks.len() != expected {
                return Err(AnalyzerError::BlockCountMismatch {
                    label: orbit.label.clone(),
                    expected,
                });
            }
            for b in &orbit.blocks {
                if let TransverseBlock::Rotation(rho) = b {
                    scalars.push(rho.clone());
                }
            }
            scalars.push(orbit.action.coefficient().clone());
        }
        if common_radicand(scalars.iter()).is_none() {
            return Err(AnalyzerError::MixedRadicands);
        }
        Ok(OrbitCatalogue {
            n,
            orbits,
            provenance,
            resonant,
        })
    }
}

/// Builds the n-orbit catalogue of the quadric
/// `1/2 sum alpha_i (p_i^2 + q_i^2) = 1` for `0 < alpha_1 <= ... <= alpha_n`:
/// orbit `x_i` rotates by `alpha_j/alpha_i` in each transverse plane and
/// carries action `2 pi / alpha_i`, so its mean index is
/// `2 sum_j alpha_j / alpha_i`. A rational frequency ratio flags the
/// catalogue as resonant (infinitely many closed characteristics are
/// then expected and the multiplicity verdicts are vacuous).
pub fn ellipsoid_catalogue(alpha: &[ExactScalar]) -> Result<OrbitCatalogue, AnalyzerError> {
    if alpha.is_empty() {
        return Err(AnalyzerError::EmptyAlpha);
    }
    if common_radicand(alpha.iter()).is_none() {
        return Err(AnalyzerError::MixedRadicands);
    }
    for (i, a) in alpha.iter().enumerate() {
        if !a.is_positive() {
            return Err(AnalyzerError::NonPositiveAlpha { position: i });
        }
        if i > 0 && alpha[i - 1].try_cmp(a)? == Ordering::Greater {
            return Err(AnalyzerError::UnsortedAlpha { position: i });
        }
    }
    let n = alpha.len();
    let mut resonant = false;
    for i in 0..n {
        for j in (i + 1)..n {
            if alpha[i].try_div(&alpha[j])?.is_rational() {
                resonant = true;
            }
        }
    }
    let mut orbits = Vec::with_capacity(n);
    for i in 0..n {
        let mut blocks = Vec::with_capacity(n - 1);
        for (j, aj) in alpha.iter().enumerate() {
            if j != i {
                blocks.push(TransverseBlock::Rotation(aj.try_div(&alpha[i])?));
            }
        }
        let action = PiMultiple::new(ExactScalar::from_int(2).try_div(&alpha[i])?);
        let spec = OrbitSpectrum::new(format!("x{}", i + 1), blocks, action, true)
            .map_err(AnalyzerError::Index)?;
        orbits.push(spec);
    }
    OrbitCatalogue::new(
        n as u32,
        orbits,
        Provenance::Ellipsoid {
            alpha: alpha.to_vec(),
        },
        resonant,
    )
}

/// The degree window around an even level `d`:
/// `[d-2, d+n]` for odd `n`, `[d-1, d+n]` for even `n`, intersected
/// with the grading support `{n+1, n+3, n+5, ...}`.
///
/// Observation, recorded rather than resolved: for odd `n` and even
/// `d` the support contains only even degrees, so `d-1` never lies in
/// it and a `[d-1, d+n]` window would coincide with `[d, d+n]`; the
/// widened bottom edge `d-2` is what admits one extra degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeWindow {
    pub d: i64,
    pub n: u32,
    pub degrees: Vec<i64>,
}

impl DegreeWindow {
    pub fn cardinality(&self) -> usize {
        self.degrees.len()
    }

    /// `floor((n+1)/2) + 1`, the guaranteed window cardinality.
    pub fn expected_cardinality(n: u32) -> usize {
        (n.div_ceil(2) + 1) as usize
    }
}

pub fn degree_window(d: i64, n: u32) -> Result<DegreeWindow, AnalyzerError> {
    if d % 2 != 0 {
        return Err(AnalyzerError::OddDegree { d });
    }
    let min = n as i64 + 3;
    if d < min {
        return Err(AnalyzerError::DegreeTooSmall { d, min });
    }
    let lo = if n % 2 == 1 { d - 2 } else { d - 1 };
    let hi = d + n as i64;
    let first = n as i64 + 1;
    let mut degrees = Vec::new();
    let mut x = lo.max(first);
    if (x - first) % 2 != 0 {
        x += 1;
    }
    while x <= hi {
        degrees.push(x);
        x += 2;
    }
    Ok(DegreeWindow { d, n, degrees })
}

/// Iterates of one orbit admissible at one window degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CarrierEntry {
    pub degree: i64,
    /// Sandwich-admissible iterates `(orbit, k)` with
    /// `mu_minus <= degree <= mu_plus`, before exclusions.
    pub sandwich: Vec<(usize, i64)>,
    /// Iterates surviving the jump exclusions: exactly `k = k_i`.
    pub admissible: Vec<(usize, i64)>,
    /// `k = k_i - 1` survivors at the bottom window degree for odd `n`.
    pub sdm_candidates: Vec<(usize, i64)>,
}

/// Outcome of the carrier feasibility pass over one degree window.
#[derive(Clone, Debug, Default)]
pub struct CarrierAnalysis {
    pub entries: Vec<CarrierEntry>,
    /// Orbits flagged as degenerate-maximum candidates: the assumption
    /// of finitely many orbits would be contradicted. A flag, never a
    /// proof.
    pub sdm_flags: Vec<(usize, i64)>,
    /// Degrees whose admissible set is empty: the catalogue is
    /// inconsistent with the carrier axioms.
    pub inconsistent_degrees: Vec<i64>,
    /// Pairs of degrees forced to share one iterate, contradicting the
    /// strict action monotonicity of the carrier sequence.
    pub conflicts: Vec<(i64, i64, (usize, i64))>,
    /// Distinct orbits among the admissible entries.
    pub distinct_orbits: Vec<usize>,
}

impl CarrierAnalysis {
    pub fn distinct_orbit_count(&self) -> usize {
        self.distinct_orbits.len()
    }

    pub fn clean(&self) -> bool {
        self.sdm_flags.is_empty()
            && self.inconsistent_degrees.is_empty()
            && self.conflicts.is_empty()
    }
}

/// Smallest k with `mu_plus(x^k) >= degree` and largest k with
/// `mu_minus(x^k) <= degree`; both indices are nondecreasing in k.
fn sandwich_range(
    spec: &OrbitSpectrum,
    degree: i64,
    n: u32,
) -> Result<Option<(i64, i64)>, AnalyzerError> {
    // mu_minus >= 2k - (n-1) gives the upper scan bound.
    let hi_bound = (degree + n as i64) / 2 + 2;
    if hi_bound < 1 {
        return Ok(None);
    }
    // first k with mu_plus >= degree
    let mut lo = 1i64;
    let mut hi = hi_bound;
    if iterate_indices(spec, hi)?.upper < degree {
        return Ok(None);
    }
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if iterate_indices(spec, mid)?.upper >= degree {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let k_min = lo;
    // last k with mu_minus <= degree
    let mut lo = 1i64;
    let mut hi = hi_bound;
    if iterate_indices(spec, 1)?.lower > degree {
        return Ok(None);
    }
    while lo < hi {
        let mid = lo + (hi - lo + 1) / 2;
        if iterate_indices(spec, mid)?.lower <= degree {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    let k_max = lo;
    if k_min > k_max {
        return Ok(None);
    }
    Ok(Some((k_min, k_max)))
}

/// Carrier feasibility: for each window degree, the iterates that the
/// index sandwich admits, intersected with the exclusions that the
/// convexity growth bounds impose around the solution's `k_i`. Only
/// `k = k_i` survives in general; `k = k_i - 1` additionally survives
/// at the bottom degree for odd `n` and is reported as a
/// degenerate-maximum candidate when it is the sole survivor there.
pub fn carrier_feasibility(
    catalogue: &OrbitCatalogue,
    solution: &JumpSolution,
    n: u32,
) -> Result<CarrierAnalysis, AnalyzerError> {
    if solution.k.len() != catalogue.orbits.len() {
        return Err(AnalyzerError::SolutionMismatch);
    }
    for spec in &catalogue.orbits {
        let (convex, _) = is_dynamically_convex(spec, n)?;
        if !convex {
            return Err(AnalyzerError::NotDynamicallyConvex {
                label: spec.label.clone(),
            });
        }
    }
    let window = degree_window(solution.d, n)?;
    let bottom_sdm_degree = if n % 2 == 1 { Some(solution.d - 2) } else { None };

    let mut analysis = CarrierAnalysis::default();
    for &degree in &window.degrees {
        let mut entry = CarrierEntry {
            degree,
            sandwich: Vec::new(),
            admissible: Vec::new(),
            sdm_candidates: Vec::new(),
        };
        for (i, spec) in catalogue.orbits.iter().enumerate() {
            if let Some((k_min, k_max)) = sandwich_range(spec, degree, n)? {
                for k in k_min..=k_max {
                    entry.sandwich.push((i, k));
                    let ki = solution.k[i];
                    if k == ki {
                        entry.admissible.push((i, k));
                    } else if Some(degree) == bottom_sdm_degree && k == ki - 1 && k >= 1 {
                        entry.sdm_candidates.push((i, k));
                    }
                    // every other iterate is k_i + l or k_i - l with
                    // l >= 1 and is excluded by the growth bounds
                }
            }
        }
        if entry.admissible.is_empty() {
            if !entry.sdm_candidates.is_empty() {
                for &(i, k) in &entry.sdm_candidates {
                    analysis.sdm_flags.push((i, k));
                }
            } else {
                analysis.inconsistent_degrees.push(degree);
            }
        }
        analysis.entries.push(entry);
    }

    for a in 0..analysis.entries.len() {
        for b in (a + 1)..analysis.entries.len() {
            let (ea, eb) = (&analysis.entries[a], &analysis.entries[b]);
            if ea.admissible.len() == 1 && eb.admissible == ea.admissible {
                analysis
                    .conflicts
                    .push((ea.degree, eb.degree, ea.admissible[0]));
            }
        }
    }

    let mut seen = Vec::new();
    for e in &analysis.entries {
        for &(i, _) in &e.admissible {
            if !seen.contains(&i) {
                seen.push(i);
            }
        }
    }
    analysis.distinct_orbits = seen;
    Ok(analysis)
}

/// Rational/irrational partition of the carrier orbits and the
/// multiplicity verdict: at least `floor((n+1)/2)` carriers with
/// irrational mean index and at most one with rational mean index.
#[derive(Clone, Debug)]
pub struct RationalityReport {
    /// `(orbit index, label, mean index, is_rational)`.
    pub partition: Vec<(usize, String, ExactScalar, bool)>,
    pub rational_count: usize,
    pub irrational_count: usize,
    pub required_irrational: usize,
    pub pass: bool,
    /// Two rational-mean carriers pinned to the same level, when the
    /// verdict fails with a solution available.
    pub witness: Option<String>,
}

pub fn classify_rationality(
    catalogue: &OrbitCatalogue,
    carrier_orbits: &[usize],
    solution: Option<&JumpSolution>,
) -> RationalityReport {
    let mut partition = Vec::new();
    for &i in carrier_orbits {
        let spec = &catalogue.orbits[i];
        let mean = mean_index(spec);
        let rational = mean.is_rational();
        partition.push((i, spec.label.clone(), mean, rational));
    }
    let rational_count = partition.iter().filter(|p| p.3).count();
    let irrational_count = partition.len() - rational_count;
    let required_irrational = catalogue.n.div_ceil(2) as usize;
    let pass = rational_count <= 1 && irrational_count >= required_irrational;
    let witness = if rational_count >= 2 {
        let pair: Vec<&(usize, String, ExactScalar, bool)> =
            partition.iter().filter(|p| p.3).take(2).collect();
        let (a, b) = (pair[0], pair[1]);
        Some(match solution {
            Some(sol) => {
                let ka = sol.k[a.0];
                let kb = sol.k[b.0];
                let prod_a = a.2.scale_i64(ka);
                let prod_b = b.2.scale_i64(kb);
                format!(
                    "{} and {} have rational mean indices; {}*({}) = {} and {}*({}) = {} pin both iterates to the same level {}",
                    a.1, b.1, ka, a.2, prod_a, kb, b.2, prod_b, sol.d
                )
            }
            None => format!(
                "{} and {} both have rational mean indices ({} and {})",
                a.1, b.1, a.2, b.2
            ),
        })
    } else {
        None
    };
    RationalityReport {
        partition,
        rational_count,
        irrational_count,
        required_irrational,
        pass,
        witness,
    }
}

/// Pairwise mean-index ratio classification. The ratio of
/// `a + b sqrt(d)` and `a' + b' sqrt(d)` is rational iff
/// `a b' - a' b = 0`, so rational-ratio is an equivalence relation and
/// the largest pairwise-irrational subset picks one orbit per class.
#[derive(Clone, Debug)]
pub struct RatioReport {
    /// `rational[i][j]` over catalogue orbit indices.
    pub rational: Vec<Vec<bool>>,
    /// Equivalence classes (by rational ratio) among the carrier set.
    pub carrier_classes: Vec<Vec<usize>>,
    pub required: usize,
    pub pass: bool,
}

pub fn ratio_matrix(
    catalogue: &OrbitCatalogue,
    carrier_orbits: &[usize],
) -> Result<RatioReport, AnalyzerError> {
    let means: Vec<ExactScalar> = catalogue.orbits.iter().map(mean_index).collect();
    for (spec, mean) in catalogue.orbits.iter().zip(means.iter()) {
        if mean.is_zero() {
            return Err(AnalyzerError::ZeroMeanIndex {
                label: spec.label.clone(),
            });
        }
    }
    let r = means.len();
    let mut rational = Vec::with_capacity(r);
    for i in 0..r {
        let mut row = Vec::with_capacity(r);
        for j in 0..r {
            row.push(ratio_is_rational(&means[i], &means[j]));
        }
        rational.push(row);
    }
    let mut carrier_classes: Vec<Vec<usize>> = Vec::new();
    for &i in carrier_orbits {
        match carrier_classes
            .iter_mut()
            .find(|class| rational[class[0]][i])
        {
            Some(class) => class.push(i),
            None => carrier_classes.push(alloc::vec![i]),
        }
    }
    let required = DegreeWindow::expected_cardinality(catalogue.n);
    let pass = carrier_classes.len() >= required;
    Ok(RatioReport {
        rational,
        carrier_classes,
        required,
        pass,
    })
}

/// Cross-product test within one field: `(a + b s)/(a' + b' s)` is
/// rational iff `a b' = a' b`.
fn ratio_is_rational(x: &ExactScalar, y: &ExactScalar) -> bool {
    let cross = x.rational_part() * y.radical_part() - y.rational_part() * x.radical_part();
    cross.is_zero()
}

/// Action-over-mean-index ratios of the reoccurring orbits, with exact
/// pairwise deviations.
#[derive(Clone, Debug)]
pub struct ResonanceReport {
    /// `(orbit index, label, pi coefficient of action/mean)`.
    pub values: Vec<(usize, String, ExactScalar)>,
    /// `(i, j, coefficient difference)` for unequal pairs.
    pub deviations: Vec<(usize, usize, ExactScalar)>,
    pub consistent: bool,
}

pub fn resonance_check(catalogue: &OrbitCatalogue) -> Result<ResonanceReport, AnalyzerError> {
    let mut values = Vec::new();
    for (i, spec) in catalogue.orbits.iter().enumerate() {
        if spec.reoccurring {
            let c = mean_action_ratio(spec)?;
            values.push((i, spec.label.clone(), c.coefficient().clone()));
        }
    }
    if values.is_empty() {
        return Err(AnalyzerError::NoReoccurringOrbit);
    }
    let mut deviations = Vec::new();
    for a in 0..values.len() {
        for b in (a + 1)..values.len() {
            let diff = values[a].2.try_sub(&values[b].2)?;
            if !diff.is_zero() {
                deviations.push((values[a].0, values[b].0, diff));
            }
        }
    }
    let consistent = deviations.is_empty();
    Ok(ResonanceReport {
        values,
        deviations,
        consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::NegativeIterateConvention;
    use crate::jump::{solve_jump, verify_recurrence, JumpConfig};
    use alloc::vec;

    fn sc(text: &str) -> ExactScalar {
        ExactScalar::parse(text).unwrap()
    }

    fn sqrt3_alpha() -> Vec<ExactScalar> {
        vec![sc("2-sqrt(3)"), sc("1"), sc("sqrt(3)")]
    }

    #[test]
    fn ellipsoid_means_match_catalogue() {
        let cat = ellipsoid_catalogue(&sqrt3_alpha()).unwrap();
        assert!(!cat.resonant);
        let means: Vec<ExactScalar> = cat.orbits.iter().map(mean_index).collect();
        assert_eq!(means[0], sc("12+6*sqrt(3)"));
        assert_eq!(means[1], sc("6"));
        assert_eq!(means[2], sc("2*sqrt(3)"));
        // actions 2 pi / alpha_i
        assert_eq!(cat.orbits[0].action.coefficient(), &sc("2/(2-sqrt(3))"));
        assert_eq!(cat.orbits[1].action.coefficient(), &sc("2"));
        assert_eq!(cat.orbits[2].action.coefficient(), &sc("2/sqrt(3)"));
    }

    #[test]
    fn round_ellipsoid_is_resonant() {
        let cat = ellipsoid_catalogue(&[sc("1"), sc("1"), sc("1")]).unwrap();
        assert!(cat.resonant);
        for spec in &cat.orbits {
            assert_eq!(mean_index(spec), sc("6"));
        }
    }

    #[test]
    fn two_frequency_catalogue() {
        let cat = ellipsoid_catalogue(&[sc("1"), sc("sqrt(2)")]).unwrap();
        let means: Vec<ExactScalar> = cat.orbits.iter().map(mean_index).collect();
        assert_eq!(means[0], sc("2+2*sqrt(2)"));
        assert_eq!(means[1], sc("2+sqrt(2)"));
        assert_eq!(cat.orbits[0].action.coefficient(), &sc("2"));
        assert_eq!(cat.orbits[1].action.coefficient(), &sc("2/sqrt(2)"));
    }

    #[test]
    fn alpha_validation() {
        assert!(matches!(
            ellipsoid_catalogue(&[]),
            Err(AnalyzerError::EmptyAlpha)
        ));
        assert!(matches!(
            ellipsoid_catalogue(&[sc("0"), sc("1")]),
            Err(AnalyzerError::NonPositiveAlpha { position: 0 })
        ));
        assert!(matches!(
            ellipsoid_catalogue(&[sc("2"), sc("1")]),
            Err(AnalyzerError::UnsortedAlpha { position: 1 })
        ));
        assert!(matches!(
            ellipsoid_catalogue(&[sc("sqrt(2)"), sc("sqrt(3)")]),
            Err(AnalyzerError::MixedRadicands)
        ));
    }

    #[test]
    fn window_examples() {
        assert_eq!(degree_window(100, 3).unwrap().degrees, vec![98, 100, 102]);
        assert_eq!(degree_window(10, 2).unwrap().degrees, vec![9, 11]);
        assert_eq!(degree_window(8, 3).unwrap().degrees, vec![6, 8, 10]);
        assert!(matches!(
            degree_window(9, 3),
            Err(AnalyzerError::OddDegree { d: 9 })
        ));
        assert!(matches!(
            degree_window(4, 3),
            Err(AnalyzerError::DegreeTooSmall { .. })
        ));
    }

    #[test]
    fn window_cardinality_sweep() {
        for n in 2..=8u32 {
            let min = n as i64 + 5;
            let mut d = if min % 2 == 0 { min } else { min + 1 };
            while d <= n as i64 + 205 {
                let w = degree_window(d, n).unwrap();
                assert_eq!(
                    w.cardinality(),
                    DegreeWindow::expected_cardinality(n),
                    "n={n} d={d}"
                );
                d += 2;
            }
        }
    }

    fn ellipsoid_solution() -> (OrbitCatalogue, JumpSolution) {
        let cat = ellipsoid_catalogue(&sqrt3_alpha()).unwrap();
        let mut config = JumpConfig::new(2, 2, sc("1/1000"), 10_000_000);
        config.require_even_d = true;
        let sol = solve_jump(&cat.orbits, &config).unwrap();
        (cat, sol)
    }

    #[test]
    fn ellipsoid_carrier_coverage() {
        let (cat, sol) = ellipsoid_solution();
        let analysis = carrier_feasibility(&cat, &sol, 3).unwrap();
        assert_eq!(analysis.entries.len(), 3);
        assert!(analysis.clean(), "no flags, no conflicts, no gaps");
        assert_eq!(analysis.distinct_orbit_count(), 3);
        for entry in &analysis.entries {
            assert_eq!(entry.admissible.len(), 1, "degree {}", entry.degree);
        }
        // distinct orbits across the three degrees
        let orbits: Vec<usize> = analysis
            .entries
            .iter()
            .map(|e| e.admissible[0].0)
            .collect();
        let mut sorted = orbits.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![0, 1, 2]);
        // sandwich soundness, recomputed
        for e in &analysis.entries {
            for &(i, k) in &e.sandwich {
                let p = iterate_indices(&cat.orbits[i], k).unwrap();
                assert!(p.lower <= e.degree && e.degree <= p.upper);
            }
        }
    }

    #[test]
    fn carrier_gap_when_orbit_removed() {
        let (cat, sol) = ellipsoid_solution();
        let mut reduced_orbits = cat.orbits.clone();
        let removed = reduced_orbits.remove(2);
        let reduced = OrbitCatalogue::new(3, reduced_orbits, Provenance::User, false);
        // block counts still n-1 = 2, so construction succeeds
        let reduced = reduced.unwrap();
        let mut sol2 = sol.clone();
        sol2.k.truncate(2);
        let analysis = carrier_feasibility(&reduced, &sol2, 3).unwrap();
        assert!(
            !analysis.inconsistent_degrees.is_empty(),
            "a window degree lost its only admissible iterate ({})",
            removed.label
        );
    }

    #[test]
    fn sdm_candidate_flagged() {
        // One orbit: negative-hyperbolic block plus rotation 1/2. The
        // even iterates land at (d, d+2) and the preceding odd iterate
        // lands exactly at d-2, so the bottom window degree is carried
        // only by k_1 - 1.
        let spec = OrbitSpectrum::new(
            "s".to_string(),
            vec![
                TransverseBlock::HyperbolicNeg,
                TransverseBlock::Rotation(sc("1/2")),
            ],
            PiMultiple::new(sc("1")),
            true,
        )
        .unwrap();
        let cat = OrbitCatalogue::new(3, vec![spec], Provenance::User, false).unwrap();
        let mut config = JumpConfig::new(2, 2, sc("1/100"), 1000);
        config.require_even_d = true;
        let sol = solve_jump(&cat.orbits, &config).unwrap();
        let rec = verify_recurrence(
            &sol,
            &cat.orbits,
            3,
            &sc("1/20"),
            NegativeIterateConvention::default(),
        )
        .unwrap();
        assert!(rec.all_pass(), "shift identities hold on the fixture");
        let analysis = carrier_feasibility(&cat, &sol, 3).unwrap();
        assert!(!analysis.sdm_flags.is_empty(), "bottom degree flags k-1");
        let bottom = &analysis.entries[0];
        assert_eq!(bottom.degree, sol.d - 2);
        assert!(bottom.admissible.is_empty());
        assert_eq!(bottom.sdm_candidates.len(), 1);
    }

    #[test]
    fn rationality_partition_and_verdict() {
        let (cat, sol) = ellipsoid_solution();
        let report = classify_rationality(&cat, &[0, 1, 2], Some(&sol));
        assert_eq!(report.rational_count, 1);
        assert_eq!(report.irrational_count, 2);
        assert!(report.pass);
        assert!(report.witness.is_none());
        let rational: Vec<&str> = report
            .partition
            .iter()
            .filter(|p| p.3)
            .map(|p| p.1.as_str())
            .collect();
        assert_eq!(rational, vec!["x2"]);
    }

    #[test]
    fn two_rational_means_fail_with_witness() {
        let a = OrbitSpectrum::new(
            "a".to_string(),
            vec![TransverseBlock::Rotation(sc("3/2"))],
            PiMultiple::new(sc("1")),
            true,
        )
        .unwrap();
        let b = OrbitSpectrum::new(
            "b".to_string(),
            vec![TransverseBlock::Rotation(sc("3/4"))],
            PiMultiple::new(sc("1/2")),
            true,
        )
        .unwrap();
        let cat = OrbitCatalogue::new(2, vec![a, b], Provenance::User, false).unwrap();
        let config = JumpConfig {
            require_even_d: true,
            ..JumpConfig::new(2, 2, sc("1/100"), 10_000)
        };
        let sol = solve_jump(&cat.orbits, &config).unwrap();
        assert_eq!(sol.k[0] * 5, sol.d, "k_a * Delta_a = d exactly");
        let analysis = carrier_feasibility(&cat, &sol, 2).unwrap();
        let carriers = analysis.distinct_orbits.clone();
        assert_eq!(carriers.len(), 2);
        let report = classify_rationality(&cat, &carriers, Some(&sol));
        assert!(!report.pass);
        assert_eq!(report.rational_count, 2);
        let witness = report.witness.expect("equal-level witness");
        assert!(witness.contains(&format!("{}", sol.d)));
    }

    #[test]
    fn ratio_matrix_ellipsoid() {
        let cat = ellipsoid_catalogue(&sqrt3_alpha()).unwrap();
        let report = ratio_matrix(&cat, &[0, 1, 2]).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(report.rational[i][j], i == j, "({i},{j})");
                assert_eq!(report.rational[i][j], report.rational[j][i]);
            }
        }
        assert_eq!(report.carrier_classes.len(), 3);
        assert!(report.pass);
    }

    #[test]
    fn ratio_rational_cases() {
        // 6 and 12: rational ratio; 2 sqrt(3) and 6 sqrt(3): ratio 3.
        assert!(ratio_is_rational(&sc("6"), &sc("12")));
        assert!(ratio_is_rational(&sc("2*sqrt(3)"), &sc("6*sqrt(3)")));
        assert!(!ratio_is_rational(&sc("6"), &sc("2*sqrt(3)")));
    }

    #[test]
    fn resonance_constant_on_ellipsoid() {
        let cat = ellipsoid_catalogue(&sqrt3_alpha()).unwrap();
        let report = resonance_check(&cat).unwrap();
        assert!(report.consistent);
        for (_, _, c) in &report.values {
            assert_eq!(c, &sc("1/3"));
        }
    }

    #[test]
    fn resonance_deviation_reported() {
        let mut cat = ellipsoid_catalogue(&sqrt3_alpha()).unwrap();
        cat.orbits[1].action = PiMultiple::new(sc("3"));
        let report = resonance_check(&cat).unwrap();
        assert!(!report.consistent);
        // c(x2) becomes 3 pi / 6 = pi/2; deviation vs pi/3 is pi/6.
        assert!(report
            .deviations
            .iter()
            .any(|(_, _, diff)| diff.abs() == sc("1/6")));
    }

    #[test]
    fn resonance_requires_reoccurring_orbit() {
        let mut cat = ellipsoid_catalogue(&sqrt3_alpha()).unwrap();
        for o in &mut cat.orbits {
            o.reoccurring = false;
        }
        assert!(matches!(
            resonance_check(&cat),
            Err(AnalyzerError::NoReoccurringOrbit)
        ));
    }
}

#[cfg(test)]
mod more_tests {
    use super::*;
    use crate::index::OrbitSpectrum;
    use crate::scalar::PiMultiple;
    use alloc::vec;

    fn sc(text: &str) -> ExactScalar {
        ExactScalar::parse(text).unwrap()
    }

    #[test]
    fn all_irrational_catalogue_passes_with_zero_rational() {
        let orbits = vec![
            OrbitSpectrum::new(
                "y1".to_string(),
                vec![TransverseBlock::Rotation(sc("sqrt(3)"))],
                PiMultiple::new(sc("1")),
                true,
            )
            .unwrap(),
            OrbitSpectrum::new(
                "y2".to_string(),
                vec![TransverseBlock::Rotation(sc("2*sqrt(3)"))],
                PiMultiple::new(sc("1")),
                true,
            )
            .unwrap(),
        ];
        let cat = OrbitCatalogue::new(2, orbits, Provenance::User, false).unwrap();
        let report = classify_rationality(&cat, &[0, 1], None);
        assert_eq!(report.rational_count, 0);
        assert!(report.pass);
        assert!(report.witness.is_none());
    }

    #[test]
    fn carrier_feasibility_rejects_nonconvex_catalogue() {
        use crate::jump::{JumpSolution, OrthantVertex, VerificationRecord};
        use num_bigint::BigInt;
        let orbits = vec![OrbitSpectrum::new(
            "h".to_string(),
            vec![
                TransverseBlock::HyperbolicPos,
                TransverseBlock::HyperbolicPos,
            ],
            PiMultiple::new(sc("1")),
            true,
        )
        .unwrap()];
        let cat = OrbitCatalogue::new(3, orbits, Provenance::User, false).unwrap();
        let sol = JumpSolution {
            t: 6,
            chi: OrthantVertex {
                chi: vec![0],
                witness: vec![BigInt::from(0)],
            },
            k: vec![2],
            d: 6,
            epsilon: sc("1/100"),
            epsilon_tightened: false,
            eta: sc("1/20"),
            m: 1,
            n_div: 1,
            residuals: vec![],
            report: VerificationRecord::default(),
        };
        assert!(matches!(
            carrier_feasibility(&cat, &sol, 3),
            Err(AnalyzerError::NotDynamicallyConvex { .. })
        ));
    }

    #[test]
    fn single_reoccurring_orbit_is_trivially_consistent() {
        let orbits = vec![OrbitSpectrum::new(
            "solo".to_string(),
            vec![TransverseBlock::Rotation(sc("sqrt(3)"))],
            PiMultiple::new(sc("2")),
            true,
        )
        .unwrap()];
        let cat = OrbitCatalogue::new(2, orbits, Provenance::User, false).unwrap();
        let report = resonance_check(&cat).unwrap();
        assert!(report.consistent);
        assert!(report.deviations.is_empty());
        assert_eq!(report.values.len(), 1);
    }
}
