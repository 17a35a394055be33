//! Job execution: builds engine objects from a validated config, runs the
//! requested pipeline and assembles the report.

use serde_json::{json, Value};

use modframe_core::frames::{
    self, Bounds, FamilyForm, FrameFamily, FrameReport, StarBoundVerdict,
};
use modframe_core::stability;

use crate::config::{BoundsSpec, FamilySpec, JobConfig, JobKind};
use crate::emit::{config_hash, json_f64, matrix_json, spectrum_json};
use crate::CliError;

const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// A finished job: the full JSON report, the Gram spectrum behind the CSV
/// format, and whether the outcome is a negative verdict (exit code 3).
pub struct JobOutcome {
    pub report: Value,
    pub spectrum: Vec<f64>,
    pub negative_verdict: Option<String>,
}

fn numerical(e: modframe_core::Error) -> CliError {
    CliError::Numerical(e.to_string())
}

/// Runs a config end to end. Deterministic: identical configs produce
/// byte-identical reports.
pub fn execute_job(config: &JobConfig) -> Result<JobOutcome, CliError> {
    let config_value = serde_json::to_value(config)
        .map_err(|e| CliError::Validation(format!("config re-serialization: {e}")))?;
    let (results, spectrum, negative_verdict) = match config.job {
        JobKind::Verify => run_verify(config)?,
        JobKind::Canonize => run_canonize(config)?,
        JobKind::Image => run_image(config)?,
        JobKind::Stability => run_stability(config)?,
        JobKind::Fixtures => {
            return Err(CliError::Validation(
                "fixtures runs from built-in configs; use the fixtures subcommand".into(),
            ))
        }
    };
    let report = json!({
        "engine": { "name": "modframe", "version": ENGINE_VERSION },
        "job": config.job.to_string(),
        "config": config_value.clone(),
        "config_sha256": config_hash(&config_value),
        "results": results,
    });
    Ok(JobOutcome { report, spectrum, negative_verdict })
}

fn family_json(family: &FrameFamily) -> Value {
    match family.form() {
        FamilyForm::Polynomial { coefficients } => json!({
            "polynomial": {
                "coefficients": Value::Array(coefficients.iter().map(matrix_json).collect()),
            }
        }),
        FamilyForm::Tabulated { values } => json!({
            "tabulated": {
                "matrices": Value::Array(values.iter().map(matrix_json).collect()),
            }
        }),
    }
}

fn frame_report_json(report: &FrameReport) -> Value {
    json!({
        "is_frame": report.is_frame,
        "is_tight": report.is_tight,
        "is_parseval": report.is_parseval,
        "lambda_min": json_f64(report.lambda_min),
        "lambda_max": json_f64(report.lambda_max),
        "bounds": report.bounds.map(|b| json!({
            "lower": json_f64(b.lower),
            "upper": json_f64(b.upper),
        })).unwrap_or(Value::Null),
        "tightness_gap": report.tightness_gap.map(json_f64).unwrap_or(Value::Null),
        "parseval_deviation": json_f64(report.parseval_deviation),
        "condition": report.condition.map(json_f64).unwrap_or(Value::Null),
        "gram": matrix_json(report.gram.matrix()),
        "gram_spectrum": spectrum_json(report.gram.eigenvalues()),
    })
}

fn run_verify(config: &JobConfig) -> Result<(Value, Vec<f64>, Option<String>), CliError> {
    let ms = config.measure_space()?;
    let family = config.frame_family(&config.family, "family")?;
    let report = frames::frame_report(&family, &ms, config.tolerances.report).map_err(numerical)?;
    let spectrum = report.gram.eigenvalues().to_vec();

    let mut negative = if report.is_frame {
        None
    } else {
        Some(format!(
            "family is not a frame (lambda_min = {:.6e})",
            report.lambda_min
        ))
    };

    let mut results = json!({ "frame_report": frame_report_json(&report) });
    if let Some(bounds) = &config.bounds {
        let candidate = match bounds {
            BoundsSpec::Scalar(sb) => {
                let check = frames::verify_scalar_bounds(
                    &report.gram,
                    sb.lower,
                    sb.upper,
                    config.tolerances.certify,
                );
                if !check.accepted && negative.is_none() {
                    negative = Some("candidate scalar bounds rejected".into());
                }
                json!({
                    "scalar": {
                        "lower": json_f64(sb.lower),
                        "upper": json_f64(sb.upper),
                        "accepted": check.accepted,
                        "lower_margin": json_f64(check.lower_margin),
                        "upper_margin": json_f64(check.upper_margin),
                    }
                })
            }
            BoundsSpec::Star(sb) => {
                let star = config.star_bounds(sb)?;
                let verdict = frames::verify_star_bounds(
                    &config.algebra(),
                    &family,
                    &ms,
                    &star,
                    sb.mode.into(),
                    config.samples,
                    config.seed,
                    config.tolerances.certify,
                )
                .map_err(numerical)?;
                let verdict_json = match &verdict {
                    StarBoundVerdict::Certified { lower_margin, upper_margin } => json!({
                        "verdict": "certified",
                        "lower_margin": json_f64(*lower_margin),
                        "upper_margin": json_f64(*upper_margin),
                    }),
                    StarBoundVerdict::Falsified { witness, lower_margin, upper_margin } => {
                        if negative.is_none() {
                            negative = Some("candidate star bounds falsified".into());
                        }
                        json!({
                            "verdict": "falsified",
                            "lower_margin": json_f64(*lower_margin),
                            "upper_margin": json_f64(*upper_margin),
                            "witness": matrix_json(witness.matrix()),
                        })
                    }
                    StarBoundVerdict::NotFalsified { samples, lower_margin, upper_margin } => json!({
                        "verdict": "not_falsified",
                        "samples": samples,
                        "lower_margin": json_f64(*lower_margin),
                        "upper_margin": json_f64(*upper_margin),
                    }),
                };
                let mut star_json = verdict_json;
                star_json["mode"] = json!(format!("{:?}", sb.mode).to_lowercase());
                json!({ "star": star_json })
            }
        };
        results["candidate_bounds"] = candidate;
    }
    Ok((results, spectrum, negative))
}

fn run_canonize(config: &JobConfig) -> Result<(Value, Vec<f64>, Option<String>), CliError> {
    let ms = config.measure_space()?;
    let family = config.frame_family(&config.family, "family")?;
    let gram = frames::gram(&family, &ms).map_err(numerical)?;
    let spectrum = gram.eigenvalues().to_vec();
    let parseval =
        frames::canonical_parseval(&family, &gram, config.tolerances.frame).map_err(numerical)?;
    let dual = frames::canonical_dual(&family, &gram, config.tolerances.frame).map_err(numerical)?;
    let parseval_gram = frames::gram(&parseval, &ms).map_err(numerical)?;
    let eye = ndarray::Array2::<num_complex::Complex64>::eye(parseval_gram.dim());
    let deviation = (&parseval_gram.as_element()
        - &modframe_core::AlgebraElement::new(eye).expect("identity"))
        .frobenius_norm();
    let results = json!({
        "gram_spectrum": spectrum_json(gram.eigenvalues()),
        "parseval_family": family_json(&parseval),
        "dual_family": family_json(&dual),
        "parseval_deviation": json_f64(deviation),
        "parseval_gram_spectrum": spectrum_json(parseval_gram.eigenvalues()),
    });
    Ok((results, spectrum, None))
}

fn run_image(config: &JobConfig) -> Result<(Value, Vec<f64>, Option<String>), CliError> {
    let ms = config.measure_space()?;
    let family = config.frame_family(&config.family, "family")?;
    let gram = frames::gram(&family, &ms).map_err(numerical)?;
    let map = config.adjointable_map()?;
    let input_bounds = match &config.bounds {
        Some(BoundsSpec::Scalar(sb)) => Bounds::Scalar(
            frames::FrameBounds::new(sb.lower, sb.upper).map_err(numerical)?,
        ),
        Some(BoundsSpec::Star(sb)) => Bounds::Star(config.star_bounds(sb)?),
        None => Bounds::Scalar(
            frames::optimal_scalar_bounds(&gram, config.tolerances.frame).map_err(numerical)?,
        ),
    };
    let image =
        frames::image_frame(&family, &gram, &input_bounds, &map, config.tolerances.frame)
            .map_err(numerical)?;
    // Cross-check the algebraic Gram against quadrature on the transported
    // family.
    let direct = frames::gram(&image.family, &ms).map_err(numerical)?;
    let coherence =
        (&direct.as_element() - &image.gram.as_element()).frobenius_norm();
    let optimal = frames::optimal_scalar_bounds(&image.gram, config.tolerances.frame).ok();
    let predicted = match &image.predicted_bounds {
        Bounds::Scalar(fb) => json!({
            "scalar": { "lower": json_f64(fb.lower), "upper": json_f64(fb.upper) }
        }),
        Bounds::Star(sb) => json!({
            "star": {
                "lower": matrix_json(sb.lower().matrix()),
                "upper": matrix_json(sb.upper().matrix()),
            }
        }),
    };
    let spectrum = image.gram.eigenvalues().to_vec();
    let results = json!({
        "image_family": family_json(&image.family),
        "image_gram": matrix_json(image.gram.matrix()),
        "image_gram_spectrum": spectrum_json(image.gram.eigenvalues()),
        "gram_coherence": json_f64(coherence),
        "surjectivity_gap": json_f64(map.surjectivity_gap()),
        "map_norm": json_f64(map.operator_norm()),
        "predicted_bounds": predicted,
        "optimal_bounds": optimal.map(|b| json!({
            "lower": json_f64(b.lower),
            "upper": json_f64(b.upper),
        })).unwrap_or(Value::Null),
    });
    Ok((results, spectrum, None))
}

fn run_stability(config: &JobConfig) -> Result<(Value, Vec<f64>, Option<String>), CliError> {
    let ms = config.measure_space()?;
    let base = config.frame_family(&config.family, "family")?;
    let second_spec: &FamilySpec = config.second_family.as_ref().expect("validated");
    let perturbed = config.frame_family(second_spec, "second_family")?;
    let report = stability::stability_report(
        &base,
        &perturbed,
        &ms,
        config.samples,
        config.seed,
        config.tolerances.certify,
    )
    .map_err(numerical)?;
    let results = json!({
        "base_bounds": {
            "lower": json_f64(report.base_bounds.lower),
            "upper": json_f64(report.base_bounds.upper),
        },
        "perturbed_bounds": {
            "lower": json_f64(report.perturbed_bounds.lower),
            "upper": json_f64(report.perturbed_bounds.upper),
        },
        "m_certified": json_f64(report.m_certified),
        "m_theorem_forward": json_f64(report.m_theorem_forward),
        "derived_bounds": {
            "lower": json_f64(report.derived_bounds.lower),
            "upper": json_f64(report.derived_bounds.upper),
        },
        "sampled_max_ratio": json_f64(report.sampled_max_ratio),
        "samples": report.samples,
        "base_gram_spectrum": spectrum_json(report.grams.base.eigenvalues()),
        "perturbed_gram_spectrum": spectrum_json(report.grams.perturbed.eigenvalues()),
        "difference_gram_spectrum": spectrum_json(report.grams.difference.eigenvalues()),
    });
    // The CSV spectrum is the frame Gram spectrum of a single family;
    // a stability job has no such primary spectrum.
    Ok((results, Vec::new(), None))
}
