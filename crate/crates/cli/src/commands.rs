//! The four subcommands, exit-code contract:
//! 0 success, 1 verification failure, 2 input error, 3 search exhausted.

use std::fmt::Write as _;

use czjump_core::analyzer::{
    carrier_feasibility, classify_rationality, degree_window, ratio_matrix, resonance_check,
    OrbitCatalogue,
};
use czjump_core::index::{
    is_dynamically_convex, iterate_indices_with, mean_index, mean_index_of_iterate,
    signature_multiplicities_with, NegativeIterateConvention,
};
use czjump_core::jump::{
    search_t, solve_jump, verify_convexity_bounds, verify_recurrence, JumpConfig, JumpError,
    JumpSolution,
};
use czjump_core::scalar::ExactScalar;

use crate::catalogue::{catalogue_field, parse_catalogue};
use crate::report::{
    decimal, record_docs, solution_doc, solution_from_report, AnalyzeReport, CarrierDoc,
    CarrierEntryDoc, ConventionDoc, ConvexityRow, IndexReport, IndexRow, JumpConfigDoc,
    JumpReport, MeanRow, RatioDoc, RationalityDoc, ResonanceDoc, ResonanceRow, SuiteRow,
    VerdictDoc, VerifyReport, SCHEMA,
};

pub const EXIT_SUCCESS: i32 = 0;
pub const EXIT_VERIFICATION_FAILURE: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;
pub const EXIT_EXHAUSTED: i32 = 3;

/// Command outcome: exit code, human summary, canonical report body.
pub struct Outcome {
    pub exit: i32,
    pub human: String,
    pub json: Option<String>,
}

fn input_error(message: impl Into<String>) -> Outcome {
    Outcome {
        exit: EXIT_INPUT_ERROR,
        human: format!("input error: {}\n", message.into()),
        json: None,
    }
}

fn load_catalogue(text: &str) -> Result<OrbitCatalogue, Outcome> {
    parse_catalogue(text).map_err(|e| input_error(e.to_string()))
}

pub struct IndexArgs {
    pub k_min: i64,
    pub k_max: i64,
    pub convention: NegativeIterateConvention,
}

pub fn cmd_index(catalogue_text: &str, args: &IndexArgs) -> Outcome {
    let catalogue = match load_catalogue(catalogue_text) {
        Ok(c) => c,
        Err(o) => return o,
    };
    if args.k_min < 1 || args.k_max < args.k_min {
        return input_error("iterate range must satisfy 1 <= k-min <= k-max");
    }
    let mut rows = Vec::new();
    let mut human = String::new();
    let _ = writeln!(
        human,
        "index table, {} orbits, iterates {}..={}",
        catalogue.orbits.len(),
        args.k_min,
        args.k_max
    );
    for spec in &catalogue.orbits {
        let mean = mean_index(spec);
        let _ = writeln!(human, "orbit {}: mean index {} ({})", spec.label, mean, decimal(&mean));
        for k in args.k_min..=args.k_max {
            let pair = match iterate_indices_with(spec, k, args.convention) {
                Ok(p) => p,
                Err(e) => return input_error(e.to_string()),
            };
            let (bp, bm) = signature_multiplicities_with(spec, k, args.convention);
            let _ = writeln!(
                human,
                "  k={k}: mu = {pair}, multiplicities = ({bp}, {bm})"
            );
            rows.push(IndexRow {
                orbit: spec.label.clone(),
                k,
                mu_minus: pair.lower,
                mu_plus: pair.upper,
                b_plus: bp,
                b_minus: bm,
                mean_index: mean.to_string(),
                mean_index_iterate: mean_index_of_iterate(spec, k).to_string(),
            });
        }
    }
    let mut convexity = Vec::new();
    for spec in &catalogue.orbits {
        let (convex, margin) = match is_dynamically_convex(spec, catalogue.n) {
            Ok(v) => v,
            Err(e) => return input_error(e.to_string()),
        };
        let _ = writeln!(
            human,
            "orbit {}: dynamically convex = {convex} (margin {margin})",
            spec.label
        );
        convexity.push(ConvexityRow {
            orbit: spec.label.clone(),
            convex,
            margin,
        });
    }
    let report = IndexReport {
        schema: SCHEMA,
        command: "index".to_string(),
        n: catalogue.n,
        field: catalogue_field(&catalogue),
        resonant: catalogue.resonant,
        rows,
        convexity,
    };
    Outcome {
        exit: EXIT_SUCCESS,
        human,
        json: Some(crate::report::to_canonical_json(&report)),
    }
}

pub struct JumpArgs {
    pub m: i64,
    pub n_div: i64,
    pub epsilon: String,
    pub eta: String,
    pub l0: i64,
    pub t_max: i64,
    pub even_d: bool,
    pub convention: NegativeIterateConvention,
}

pub fn cmd_jump(catalogue_text: &str, args: &JumpArgs) -> Outcome {
    let catalogue = match load_catalogue(catalogue_text) {
        Ok(c) => c,
        Err(o) => return o,
    };
    let epsilon = match ExactScalar::parse(&args.epsilon) {
        Ok(e) => e,
        Err(e) => return input_error(format!("bad epsilon: {e}")),
    };
    let eta = match ExactScalar::parse(&args.eta) {
        Ok(e) => e,
        Err(e) => return input_error(format!("bad eta: {e}")),
    };
    let config = JumpConfig {
        m: args.m,
        n_div: args.n_div,
        epsilon: epsilon.clone(),
        eta,
        l0: args.l0,
        t_max: args.t_max,
        require_even_d: args.even_d,
        convention: args.convention,
    };
    let solution = match solve_jump(&catalogue.orbits, &config) {
        Ok(s) => s,
        Err(JumpError::Exhausted { scanned, best }) => {
            let mut human = format!(
                "search exhausted: no verified candidate for T <= {scanned}\n"
            );
            if let Some(b) = best {
                let _ = writeln!(
                    human,
                    "best near miss: T = {}, sup torus distance {} ({}) [{}]",
                    b.t,
                    b.sup_distance,
                    decimal(&b.sup_distance),
                    b.note
                );
            }
            return Outcome {
                exit: EXIT_EXHAUSTED,
                human,
                json: None,
            };
        }
        Err(e) => return input_error(e.to_string()),
    };
    build_jump_outcome(&catalogue, &solution, &epsilon, &config)
}

fn build_jump_outcome(
    catalogue: &OrbitCatalogue,
    solution: &JumpSolution,
    requested_epsilon: &ExactScalar,
    config: &JumpConfig,
) -> Outcome {
    let recurrence = match verify_recurrence(
        solution,
        &catalogue.orbits,
        config.l0,
        &solution.eta,
        config.convention,
    ) {
        Ok(r) => r,
        Err(e) => return input_error(e.to_string()),
    };
    let all_convex = catalogue
        .orbits
        .iter()
        .all(|s| matches!(is_dynamically_convex(s, catalogue.n), Ok((true, _))));
    let convexity = if all_convex {
        match verify_convexity_bounds(solution, &catalogue.orbits, catalogue.n, config.l0) {
            Ok(r) => Some(r),
            Err(e) => return input_error(e.to_string()),
        }
    } else {
        None
    };

    let report = JumpReport {
        schema: SCHEMA,
        command: "jump".to_string(),
        n: catalogue.n,
        field: catalogue_field(catalogue),
        config: JumpConfigDoc {
            m: solution.m,
            n_div: solution.n_div,
            epsilon_requested: requested_epsilon.to_string(),
            epsilon_effective: solution.epsilon.to_string(),
            epsilon_tightened: solution.epsilon_tightened,
            eta: solution.eta.to_string(),
            l0: config.l0,
            t_max: config.t_max,
            even_d: config.require_even_d,
        },
        conventions: ConventionDoc::current(config.convention),
        solution: solution_doc(solution),
        invariants: record_docs(&solution.report),
        recurrence: record_docs(&recurrence),
        convexity: convexity.as_ref().map(record_docs),
        verdict: String::new(),
    };
    let pass = report.all_pass();
    let report = JumpReport {
        verdict: if pass { "pass" } else { "fail" }.to_string(),
        ..report
    };

    let mut human = String::new();
    let _ = writeln!(
        human,
        "solution: T = {}, d = {}, k = {:?}",
        solution.t, solution.d, solution.k
    );
    let _ = writeln!(
        human,
        "epsilon = {} ({}){}",
        solution.epsilon,
        decimal(&solution.epsilon),
        if solution.epsilon_tightened {
            " [tightened below the alignment ceiling]"
        } else {
            ""
        }
    );
    for (tag, rec) in [
        ("invariant", Some(&solution.report)),
        ("recurrence", Some(&recurrence)),
        ("convexity", convexity.as_ref()),
    ] {
        if let Some(rec) = rec {
            for line in &rec.lines {
                let _ = writeln!(human, "{tag} {line}");
            }
        }
    }
    let _ = writeln!(human, "verdict: {}", if pass { "pass" } else { "FAIL" });

    Outcome {
        exit: if pass {
            EXIT_SUCCESS
        } else {
            EXIT_VERIFICATION_FAILURE
        },
        human,
        json: Some(crate::report::to_canonical_json(&report)),
    }
}

pub fn cmd_analyze(catalogue_text: &str, solution_json: Option<&str>) -> Outcome {
    let catalogue = match load_catalogue(catalogue_text) {
        Ok(c) => c,
        Err(o) => return o,
    };
    let mut human = String::new();
    let mut verdicts: Vec<VerdictDoc> = Vec::new();

    let means: Vec<MeanRow> = catalogue
        .orbits
        .iter()
        .map(|spec| {
            let mean = mean_index(spec);
            let _ = writeln!(
                human,
                "orbit {}: mean index {} ({}) [{}]",
                spec.label,
                mean,
                decimal(&mean),
                if mean.is_rational() { "rational" } else { "irrational" }
            );
            MeanRow {
                orbit: spec.label.clone(),
                mean_index: mean.to_string(),
                rational: mean.is_rational(),
            }
        })
        .collect();

    let warning = if catalogue.resonant {
        let msg = "resonant frequencies: infinitely many closed characteristics expected; \
                   multiplicity verdicts skipped"
            .to_string();
        let _ = writeln!(human, "warning: {msg}");
        Some(msg)
    } else {
        None
    };

    // resonance table is meaningful either way
    let resonance = match resonance_check(&catalogue) {
        Ok(rep) => {
            for (_, label, c) in &rep.values {
                let _ = writeln!(human, "action/mean for {label}: ({c})*pi");
            }
            if !rep.consistent {
                for (a, b, diff) in &rep.deviations {
                    let _ = writeln!(
                        human,
                        "resonance deviation between {} and {}: ({})*pi",
                        catalogue.orbits[*a].label, catalogue.orbits[*b].label, diff
                    );
                }
            }
            Some(ResonanceDoc {
                values: rep
                    .values
                    .iter()
                    .map(|(_, label, c)| ResonanceRow {
                        orbit: label.clone(),
                        coefficient: c.to_string(),
                    })
                    .collect(),
                consistent: rep.consistent,
                deviations: rep
                    .deviations
                    .iter()
                    .map(|(a, b, diff)| {
                        (
                            catalogue.orbits[*a].label.clone(),
                            catalogue.orbits[*b].label.clone(),
                            diff.to_string(),
                        )
                    })
                    .collect(),
            })
        }
        Err(_) => None,
    };

    if catalogue.resonant {
        let report = AnalyzeReport {
            schema: SCHEMA,
            command: "analyze".to_string(),
            n: catalogue.n,
            field: catalogue_field(&catalogue),
            resonant: true,
            warning,
            means,
            rationality: None,
            ratios: None,
            resonance,
            carriers: None,
            verdicts: Vec::new(),
        };
        return Outcome {
            exit: EXIT_SUCCESS,
            human,
            json: Some(crate::report::to_canonical_json(&report)),
        };
    }

    // carrier analysis when a solution is supplied
    let mut carrier_doc: Option<CarrierDoc> = None;
    let mut carrier_orbits: Vec<usize> = (0..catalogue.orbits.len()).collect();
    let mut solution: Option<JumpSolution> = None;
    if let Some(text) = solution_json {
        let parsed: JumpReport = match serde_json::from_str(text) {
            Ok(r) => r,
            Err(e) => return input_error(format!("bad solution file: {e}")),
        };
        let sol = match solution_from_report(&parsed) {
            Ok(s) => s,
            Err(e) => return input_error(format!("bad solution file: {e}")),
        };
        // re-verify before trusting the solution
        let reverified = match verify_recurrence(
            &sol,
            &catalogue.orbits,
            parsed.config.l0,
            &sol.eta,
            NegativeIterateConvention::default(),
        ) {
            Ok(r) => r,
            Err(e) => return input_error(e.to_string()),
        };
        verdicts.push(VerdictDoc {
            name: "solution-reverification".to_string(),
            pass: Some(reverified.all_pass()),
            detail: format!(
                "{} recurrence lines re-derived from the solution file",
                reverified.lines.len()
            ),
        });
        match carrier_feasibility(&catalogue, &sol, catalogue.n) {
            Ok(analysis) => {
                let window = degree_window(sol.d, catalogue.n)
                    .expect("carrier feasibility validated the window");
                let label = |i: usize| catalogue.orbits[i].label.clone();
                carrier_doc = Some(CarrierDoc {
                    window: window.degrees.clone(),
                    entries: analysis
                        .entries
                        .iter()
                        .map(|e| CarrierEntryDoc {
                            degree: e.degree,
                            sandwich: e.sandwich.iter().map(|&(i, k)| (label(i), k)).collect(),
                            admissible: e.admissible.iter().map(|&(i, k)| (label(i), k)).collect(),
                            sdm_candidates: e
                                .sdm_candidates
                                .iter()
                                .map(|&(i, k)| (label(i), k))
                                .collect(),
                        })
                        .collect(),
                    sdm_flags: analysis.sdm_flags.iter().map(|&(i, k)| (label(i), k)).collect(),
                    inconsistent_degrees: analysis.inconsistent_degrees.clone(),
                    conflicts: analysis
                        .conflicts
                        .iter()
                        .map(|&(d1, d2, (i, k))| (d1, d2, format!("{}^{}", label(i), k)))
                        .collect(),
                    distinct_orbit_count: analysis.distinct_orbit_count(),
                });
                for e in &analysis.entries {
                    let _ = writeln!(
                        human,
                        "degree {}: admissible {:?}, degenerate-maximum candidates {:?}",
                        e.degree,
                        e.admissible
                            .iter()
                            .map(|&(i, k)| format!("{}^{}", label(i), k))
                            .collect::<Vec<_>>(),
                        e.sdm_candidates
                            .iter()
                            .map(|&(i, k)| format!("{}^{}", label(i), k))
                            .collect::<Vec<_>>(),
                    );
                }
                let expected = czjump_core::analyzer::DegreeWindow::expected_cardinality(catalogue.n);
                verdicts.push(VerdictDoc {
                    name: "carrier-coverage".to_string(),
                    pass: Some(
                        analysis.inconsistent_degrees.is_empty()
                            && analysis.conflicts.is_empty()
                            && analysis.distinct_orbit_count() >= expected.min(catalogue.orbits.len()),
                    ),
                    detail: format!(
                        "{} window degrees, {} distinct carrier orbits, {} gaps, {} conflicts",
                        window.degrees.len(),
                        analysis.distinct_orbit_count(),
                        analysis.inconsistent_degrees.len(),
                        analysis.conflicts.len()
                    ),
                });
                verdicts.push(VerdictDoc {
                    name: "no-degenerate-maximum".to_string(),
                    pass: Some(analysis.sdm_flags.is_empty()),
                    detail: if analysis.sdm_flags.is_empty() {
                        "no degree is carried only by a k-1 iterate".to_string()
                    } else {
                        format!(
                            "flagged: {:?} (finiteness assumption would be contradicted)",
                            analysis
                                .sdm_flags
                                .iter()
                                .map(|&(i, k)| format!("{}^{}", label(i), k))
                                .collect::<Vec<_>>()
                        )
                    },
                });
                let mut carriers: Vec<usize> = analysis.distinct_orbits.clone();
                for e in &analysis.entries {
                    for &(i, _) in &e.admissible {
                        if !carriers.contains(&i) {
                            carriers.push(i);
                        }
                    }
                }
                carriers.sort_unstable();
                if !carriers.is_empty() {
                    carrier_orbits = carriers;
                }
            }
            Err(e) => return input_error(e.to_string()),
        }
        solution = Some(sol);
    }

    let rationality = classify_rationality(&catalogue, &carrier_orbits, solution.as_ref());
    verdicts.push(VerdictDoc {
        name: "irrational-mean-count".to_string(),
        pass: Some(rationality.irrational_count >= rationality.required_irrational),
        detail: format!(
            "{} irrational mean indices among carriers, {} required",
            rationality.irrational_count, rationality.required_irrational
        ),
    });
    verdicts.push(VerdictDoc {
        name: "rational-mean-uniqueness".to_string(),
        pass: Some(rationality.rational_count <= 1),
        detail: match &rationality.witness {
            Some(w) => w.clone(),
            None => format!("{} rational mean index among carriers", rationality.rational_count),
        },
    });

    let ratios = match ratio_matrix(&catalogue, &carrier_orbits) {
        Ok(r) => r,
        Err(e) => return input_error(e.to_string()),
    };
    verdicts.push(VerdictDoc {
        name: "pairwise-ratio-irrationality".to_string(),
        pass: Some(ratios.pass),
        detail: format!(
            "{} pairwise-irrational carrier classes, {} required",
            ratios.carrier_classes.len(),
            ratios.required
        ),
    });

    if let Some(res) = &resonance {
        verdicts.push(VerdictDoc {
            name: "resonance-constant".to_string(),
            pass: Some(res.consistent),
            detail: if res.consistent {
                format!(
                    "shared action/mean constant ({})*pi",
                    res.values.first().map(|v| v.coefficient.as_str()).unwrap_or("?")
                )
            } else {
                format!("{} deviating pairs", res.deviations.len())
            },
        });
    }

    for v in &verdicts {
        let _ = writeln!(
            human,
            "verdict {}: {} — {}",
            v.name,
            match v.pass {
                Some(true) => "pass",
                Some(false) => "FAIL",
                None => "skipped",
            },
            v.detail
        );
    }

    let all_pass = verdicts.iter().all(|v| v.pass.unwrap_or(true));
    let report = AnalyzeReport {
        schema: SCHEMA,
        command: "analyze".to_string(),
        n: catalogue.n,
        field: catalogue_field(&catalogue),
        resonant: false,
        warning,
        means,
        rationality: Some(RationalityDoc {
            carriers: carrier_orbits
                .iter()
                .map(|&i| catalogue.orbits[i].label.clone())
                .collect(),
            rational_count: rationality.rational_count,
            irrational_count: rationality.irrational_count,
            required_irrational: rationality.required_irrational,
            pass: rationality.pass,
            witness: rationality.witness.clone(),
        }),
        ratios: Some(RatioDoc {
            rational: ratios.rational.clone(),
            classes: ratios
                .carrier_classes
                .iter()
                .map(|class| class.iter().map(|&i| catalogue.orbits[i].label.clone()).collect())
                .collect(),
            required: ratios.required,
            pass: ratios.pass,
        }),
        resonance,
        carriers: carrier_doc,
        verdicts,
    };
    Outcome {
        exit: if all_pass {
            EXIT_SUCCESS
        } else {
            EXIT_VERIFICATION_FAILURE
        },
        human,
        json: Some(crate::report::to_canonical_json(&report)),
    }
}

pub fn cmd_verify(filter: Option<&str>, fixture_text: Option<Result<String, String>>) -> Outcome {
    let mut suites: Vec<SuiteRow> = Vec::new();
    if let Some(loaded) = fixture_text {
        match loaded {
            Ok(text) => match parse_catalogue(&text) {
                Ok(cat) => suites.push(SuiteRow {
                    name: "fixture-parse".to_string(),
                    cases: cat.orbits.len(),
                    pass: true,
                    detail: "supplied fixture parses".to_string(),
                }),
                Err(e) => return input_error(format!("fixture: {e}")),
            },
            Err(e) => return input_error(format!("fixture: {e}")),
        }
    }
    suites.extend(crate::selftest::run_suites(filter));
    let mut human = String::new();
    for s in &suites {
        let _ = writeln!(
            human,
            "suite {}: {} ({} cases) — {}",
            s.name,
            if s.pass { "pass" } else { "FAIL" },
            s.cases,
            s.detail
        );
    }
    let all_pass = suites.iter().all(|s| s.pass);
    let _ = writeln!(human, "overall: {}", if all_pass { "pass" } else { "FAIL" });
    let report = VerifyReport {
        schema: SCHEMA,
        command: "verify".to_string(),
        suites,
    };
    Outcome {
        exit: if all_pass {
            EXIT_SUCCESS
        } else {
            EXIT_VERIFICATION_FAILURE
        },
        human,
        json: Some(crate::report::to_canonical_json(&report)),
    }
}

/// `search` support for acceptance and exploration: exposes the raw
/// vertex search on a one-coordinate vector.
pub fn single_coordinate_search(
    value: &str,
    chi: u8,
    epsilon: &str,
    t_max: i64,
    count: usize,
) -> Result<(Vec<i64>, bool), String> {
    let entry = ExactScalar::parse(value).map_err(|e| e.to_string())?;
    let epsilon = ExactScalar::parse(epsilon).map_err(|e| e.to_string())?;
    let v = czjump_core::jump::TorusVector {
        field: if entry.is_rational() { 1 } else { entry.radicand() },
        entries: vec![entry],
        tags: vec![czjump_core::jump::CoordinateTag::Mean { orbit: 0 }],
        m: 1,
    };
    let vertex = czjump_core::jump::OrthantVertex {
        chi: vec![chi],
        witness: vec![num_bigint::BigInt::from(if chi == 0 { 1 } else { -1 })],
    };
    let out = search_t(&v, &vertex, &epsilon, t_max, count).map_err(|e| e.to_string())?;
    Ok((out.hits, out.exhausted))
}
