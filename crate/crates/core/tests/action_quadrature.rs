//! Numerical quadrature oracle for the catalogue action convention.
//!
//! The closed orbit of `1/2 sum alpha_j (p_j^2 + q_j^2) = 1` in plane
//! `i` is the circle of radius `r` with `alpha_i r^2 / 2 = 1`. Its
//! action is the line integral of `(p dq - q dp)/2` over one period of
//! the characteristic flow, which this oracle evaluates by midpoint
//! quadrature and compares against the `2*pi/alpha_i` coefficient the
//! catalogue builder assigns. Floating point is confined to this
//! test-side oracle; the library itself never consults it.

use czjump_core::analyzer::ellipsoid_catalogue;
use czjump_core::scalar::ExactScalar;

fn as_f64(x: &ExactScalar) -> f64 {
    let (lo, hi) = x.to_interval(15);
    let lo = lo.numer().to_string().parse::<f64>().unwrap()
        / lo.denom().to_string().parse::<f64>().unwrap();
    let hi = hi.numer().to_string().parse::<f64>().unwrap()
        / hi.denom().to_string().parse::<f64>().unwrap();
    (lo + hi) / 2.0
}

/// Integrates `(p dq - q dp)/2` around the planar circular orbit of
/// frequency `alpha`, using the flow `(p', q') = (-w q, w p)` with
/// `w = alpha/2` and the normalization radius `r^2 = 2/alpha`.
fn quadrature_action(alpha: f64, steps: usize) -> f64 {
    let w = alpha / 2.0;
    let period = 2.0 * std::f64::consts::PI / w;
    let r = (2.0 / alpha).sqrt();
    let dt = period / steps as f64;
    let mut acc = 0.0;
    for s in 0..steps {
        let t = (s as f64 + 0.5) * dt;
        let (p, q) = (r * (w * t).cos(), r * (w * t).sin());
        let (dp, dq) = (-w * q, w * p);
        acc += 0.5 * (p * dq - q * dp) * dt;
    }
    acc
}

#[test]
fn catalogue_actions_match_the_quadrature_oracle() {
    let cases: Vec<Vec<ExactScalar>> = vec![
        vec![
            ExactScalar::parse("2-sqrt(3)").unwrap(),
            ExactScalar::parse("1").unwrap(),
            ExactScalar::parse("sqrt(3)").unwrap(),
        ],
        vec![
            ExactScalar::parse("1").unwrap(),
            ExactScalar::parse("sqrt(2)").unwrap(),
        ],
    ];
    for alpha in cases {
        let cat = ellipsoid_catalogue(&alpha).unwrap();
        for (a, orbit) in alpha.iter().zip(cat.orbits.iter()) {
            let numeric = quadrature_action(as_f64(a), 200_000);
            let exact_coeff = as_f64(orbit.action.coefficient());
            let exact = exact_coeff * std::f64::consts::PI;
            assert!(
                (numeric - exact).abs() < 1e-9 * exact.abs(),
                "orbit {}: quadrature {numeric} vs catalogue {exact}",
                orbit.label
            );
        }
    }
}

#[test]
fn quadrature_confirms_the_resonance_constant() {
    let alpha = [
        ExactScalar::parse("2-sqrt(3)").unwrap(),
        ExactScalar::parse("1").unwrap(),
        ExactScalar::parse("sqrt(3)").unwrap(),
    ];
    let cat = ellipsoid_catalogue(&alpha).unwrap();
    // action/mean should be pi/(sum alpha_j) = pi/3 on every orbit
    let sum: f64 = alpha.iter().map(as_f64).sum();
    assert!((sum - 3.0).abs() < 1e-12);
    for (a, orbit) in alpha.iter().zip(cat.orbits.iter()) {
        let numeric_action = quadrature_action(as_f64(a), 200_000);
        let mean = as_f64(&czjump_core::index::mean_index(orbit));
        let ratio = numeric_action / mean;
        assert!(
            (ratio - std::f64::consts::PI / 3.0).abs() < 1e-9,
            "orbit {}: ratio {ratio}",
            orbit.label
        );
    }
}
