//! Built-in fixtures: a tight scalar frame and a diagonal star-bound frame
//! on `[0, 1]`, plus the Parseval canonicalization of both. The fixtures job
//! re-derives their known Gram matrices and bounds at tight tolerances and
//! fails loudly on any breach.

use serde_json::{json, Value};

use modframe_core::algebra::AlgebraElement;
use modframe_core::frames;
use ndarray::Array2;
use num_complex::Complex64;

use crate::config::JobConfig;
use crate::emit::json_f64;
use crate::jobs::JobOutcome;
use crate::CliError;

pub const EX22_JSON: &str = include_str!("../fixtures/ex22.json");
pub const EX33_JSON: &str = include_str!("../fixtures/ex33.json");

pub fn fixture_config(name: &str) -> Result<JobConfig, CliError> {
    let text = match name {
        "ex22" => EX22_JSON,
        "ex33" => EX33_JSON,
        other => {
            return Err(CliError::Validation(format!(
                "unknown fixture {other}; available: ex22, ex33"
            )))
        }
    };
    JobConfig::from_json(text)
}

struct Check {
    name: &'static str,
    passed: bool,
    measured: f64,
    tolerance: f64,
}

fn check(name: &'static str, measured: f64, tolerance: f64) -> Check {
    Check { name, passed: measured.abs() <= tolerance, measured, tolerance }
}

fn frob_to(mat: &Array2<Complex64>, target: &Array2<Complex64>) -> f64 {
    (mat - target).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Runs both fixtures and the Parseval canonicalization end to end.
pub fn run_fixtures() -> Result<JobOutcome, CliError> {
    let mut checks: Vec<Check> = Vec::new();

    // Tight scalar fixture: G = I/3, A = B = 1/3.
    let ex22 = fixture_config("ex22")?;
    let ms22 = ex22.measure_space()?;
    let family22 = ex22.frame_family(&ex22.family, "family")?;
    let report22 = frames::frame_report(&family22, &ms22, ex22.tolerances.report)
        .map_err(|e| CliError::Numerical(e.to_string()))?;
    let third_eye = Array2::<Complex64>::eye(2).mapv(|e| e / 3.0);
    checks.push(check("ex22.gram_matches_third_identity", frob_to(report22.gram.matrix(), &third_eye), 1e-12));
    checks.push(Check {
        name: "ex22.is_tight_frame",
        passed: report22.is_frame && report22.is_tight,
        measured: report22.tightness_gap.unwrap_or(f64::INFINITY),
        tolerance: 1e-8,
    });
    let bounds22 = report22.bounds.expect("tight fixture is a frame");
    checks.push(check("ex22.lower_bound_is_one_third", bounds22.lower - 1.0 / 3.0, 1e-12));
    checks.push(check("ex22.upper_bound_is_one_third", bounds22.upper - 1.0 / 3.0, 1e-12));

    // Diagonal star fixture: G = diag(1/3, 7/3) with diagonal certificates.
    let ex33 = fixture_config("ex33")?;
    let ms33 = ex33.measure_space()?;
    let family33 = ex33.frame_family(&ex33.family, "family")?;
    let report33 = frames::frame_report(&family33, &ms33, ex33.tolerances.report)
        .map_err(|e| CliError::Numerical(e.to_string()))?;
    let diag_target = AlgebraElement::from_diagonal(&[
        Complex64::new(1.0 / 3.0, 0.0),
        Complex64::new(7.0 / 3.0, 0.0),
    ]);
    checks.push(check("ex33.gram_matches_diagonal", frob_to(report33.gram.matrix(), diag_target.matrix()), 1e-12));
    let bounds33 = report33.bounds.expect("diagonal fixture is a frame");
    checks.push(check("ex33.lower_bound", bounds33.lower - 1.0 / 3.0, 1e-12));
    checks.push(check("ex33.upper_bound", bounds33.upper - 7.0 / 3.0, 1e-12));
    let star_spec = match ex33.bounds.as_ref().expect("fixture carries star bounds") {
        crate::config::BoundsSpec::Star(sb) => sb,
        _ => unreachable!("ex33 carries star bounds"),
    };
    let star = ex33.star_bounds(star_spec)?;
    let verdict = frames::verify_star_bounds(
        &ex33.algebra(),
        &family33,
        &ms33,
        &star,
        star_spec.mode.into(),
        ex33.samples,
        ex33.seed,
        ex33.tolerances.certify,
    )
    .map_err(|e| CliError::Numerical(e.to_string()))?;
    checks.push(Check {
        name: "ex33.star_certificate",
        passed: verdict.is_certified(),
        measured: match &verdict {
            frames::StarBoundVerdict::Certified { lower_margin, .. } => *lower_margin,
            frames::StarBoundVerdict::Falsified { lower_margin, .. } => *lower_margin,
            frames::StarBoundVerdict::NotFalsified { lower_margin, .. } => *lower_margin,
        },
        tolerance: ex33.tolerances.certify,
    });

    // Canonical Parseval families of both fixtures.
    for (name, family, ms) in [
        ("ex22.parseval_deviation", &family22, &ms22),
        ("ex33.parseval_deviation", &family33, &ms33),
    ] {
        let gram = frames::gram(family, ms).map_err(|e| CliError::Numerical(e.to_string()))?;
        let parseval = frames::canonical_parseval(family, &gram, 1e-10)
            .map_err(|e| CliError::Numerical(e.to_string()))?;
        let parseval_gram =
            frames::gram(&parseval, ms).map_err(|e| CliError::Numerical(e.to_string()))?;
        let deviation = frob_to(parseval_gram.matrix(), &Array2::eye(parseval_gram.dim()));
        checks.push(Check { name, passed: deviation <= 1e-8, measured: deviation, tolerance: 1e-8 });
    }

    let all_passed = checks.iter().all(|c| c.passed);
    let checks_json: Vec<Value> = checks
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "passed": c.passed,
                "measured": json_f64(c.measured),
                "tolerance": json_f64(c.tolerance),
            })
        })
        .collect();
    let report = json!({
        "engine": { "name": "modframe", "version": env!("CARGO_PKG_VERSION") },
        "job": "fixtures",
        "results": {
            "checks": Value::Array(checks_json),
            "all_passed": all_passed,
        },
    });
    let negative_verdict = if all_passed {
        None
    } else {
        let failed: Vec<&str> =
            checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
        Some(format!("fixture checks failed: {}", failed.join(", ")))
    };
    Ok(JobOutcome { report, spectrum: Vec::new(), negative_verdict })
}
