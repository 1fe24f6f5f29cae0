//! Batch verification runner: example + check selection, seeded sampling,
//! residual aggregation and report emission.

use crate::catalog::{self, Example};
use crate::error::{GeomError, Result};
use crate::identities::{self as id, IdentityCheck};
use crate::sample::sample_points;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub example: String,
    /// The requested check names; `["all"]` expands to the example's
    /// applicable defaults.
    pub checks: Vec<String>,
    pub points: usize,
    pub seed: u64,
    /// Explicit tolerance override; when absent every check uses its own
    /// pinned default.
    pub tol: Option<f64>,
    pub format: Format,
}

impl RunConfig {
    pub fn new(example: &str, checks: &[&str]) -> Self {
        RunConfig {
            example: example.to_string(),
            checks: checks.iter().map(|s| s.to_string()).collect(),
            points: 100,
            seed: 42,
            tol: None,
            format: Format::Json,
        }
    }
}

/// The engine's sign and normalization choices, embedded in every report
/// so the numbers are interpretable without reading source.
#[derive(Clone, Debug, Serialize)]
pub struct Conventions {
    pub curvature_sign: &'static str,
    pub mean_curvature: &'static str,
    pub codifferential_sign: &'static str,
    pub exterior_derivative: &'static str,
}

pub fn conventions() -> Conventions {
    Conventions {
        curvature_sign: "R(X,Y,Z,W) = g(∇_X∇_Y Z − ∇_Y∇_X Z − ∇_[X,Y] Z, W); K(X,Y) = R(X,Y,Y,X) = +1 on the unit round sphere",
        mean_curvature: "H = Σ_a h∇_{E_a} E_a, the unnormalized trace over a vertical orthonormal frame",
        codifferential_sign: "δΦ(X) = −Σ_legs (∇_E Φ)(E, X) over a φ-adapted orthonormal frame",
        exterior_derivative: "dη(X,Y) = X(η(Y)) − Y(η(X)) − η([X,Y]), unnormalized",
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub config: RunConfig,
    pub conventions: Conventions,
    pub checks: Vec<IdentityCheck>,
    pub passed: bool,
}

type Runner = fn(&Example, &[Vec<f64>]) -> Result<Vec<f64>>;

pub struct CheckSpec {
    pub name: &'static str,
    pub default_tol: f64,
    runner: Runner,
}

type SubRunner = fn(&crate::submersion::SubmersionInstance, &[Vec<f64>]) -> Result<Vec<f64>>;

fn sub_only(ex: &Example, f: SubRunner, points: &[Vec<f64>]) -> Result<Vec<f64>> {
    f(ex.submersion()?, points)
}

/// The full check vocabulary, in stable order. Tolerances are the pinned
/// per-check defaults; `--tol` overrides all of them at once.
pub fn all_checks() -> Vec<CheckSpec> {
    vec![
        CheckSpec {
            name: "metric_spd",
            default_tol: 0.0,
            runner: |ex, pts| id::metric_spd_check(ex, pts),
        },
        CheckSpec {
            name: "ad_fd_consistency",
            default_tol: 1e-6,
            runner: |ex, pts| id::ad_fd_check(ex, pts),
        },
        CheckSpec {
            name: "connection_compat",
            default_tol: 1e-9,
            runner: |ex, pts| id::connection_compat_check(ex, pts),
        },
        CheckSpec {
            name: "riemann_symmetries",
            default_tol: 1e-9,
            runner: |ex, pts| id::riemann_symmetries_check(ex, pts),
        },
        CheckSpec {
            name: "structure_axioms",
            default_tol: 1e-10,
            runner: |ex, pts| id::structure_axioms_check(ex, pts),
        },
        CheckSpec {
            name: "class_sasakian",
            default_tol: 1e-8,
            runner: |ex, pts| id::classification_check(ex, id::StructureClass::Sasakian, pts),
        },
        CheckSpec {
            name: "class_cosymplectic",
            default_tol: 1e-8,
            runner: |ex, pts| id::classification_check(ex, id::StructureClass::Cosymplectic, pts),
        },
        CheckSpec {
            name: "class_almost_cosymplectic",
            default_tol: 1e-8,
            runner: |ex, pts| {
                id::classification_check(ex, id::StructureClass::AlmostCosymplectic, pts)
            },
        },
        CheckSpec {
            name: "a_star_identities",
            default_tol: 1e-8,
            runner: |ex, pts| id::a_star_identities_check(ex, pts),
        },
        CheckSpec {
            name: "n_vanishing",
            default_tol: 1e-8,
            runner: |ex, pts| {
                let which = match ex.name() {
                    "olszak_exp" | "olszak_product" => id::NVanishing::N2N4,
                    _ => id::NVanishing::All,
                };
                id::n_vanishing_check(ex, which, pts)
            },
        },
        CheckSpec {
            name: "n3_witness",
            default_tol: 1e-12,
            runner: |ex, pts| id::n3_witness_check(ex, pts),
        },
        CheckSpec {
            name: "harmonicity",
            default_tol: 1e-8,
            runner: |ex, pts| id::harmonicity_check(ex, pts),
        },
        CheckSpec {
            name: "codiff_frame_independence",
            default_tol: 1e-9,
            runner: |ex, pts| id::frame_independence_check(ex, pts),
        },
        CheckSpec {
            name: "riemannian_submersion",
            default_tol: 1e-9,
            runner: |ex, pts| sub_only(ex, id::riemannian_submersion_check, pts),
        },
        CheckSpec {
            name: "pi_related",
            default_tol: 1e-8,
            runner: |ex, pts| sub_only(ex, id::pi_related_check, pts),
        },
        CheckSpec {
            name: "pullback_form",
            default_tol: 1e-9,
            runner: |ex, pts| sub_only(ex, id::pullback_form_check, pts),
        },
        CheckSpec {
            name: "oneill_symmetries",
            default_tol: 1e-8,
            runner: |ex, pts| sub_only(ex, id::oneill_symmetries_check, pts),
        },
        CheckSpec {
            name: "warped_t",
            default_tol: 1e-9,
            runner: |ex, pts| sub_only(ex, id::warped_t_check, pts),
        },
        CheckSpec {
            name: "umbilical_fibres",
            default_tol: 1e-9,
            runner: |ex, pts| sub_only(ex, id::umbilical_check, pts),
        },
        CheckSpec {
            name: "b_tensor",
            default_tol: 1e-8,
            runner: |ex, pts| sub_only(ex, id::b_tensor_check, pts),
        },
        CheckSpec {
            name: "structure_equation",
            default_tol: 1e-7,
            runner: |ex, pts| {
                id::structure_equation_check(ex.submersion()?, pts, id::CodiffScope::Full)
            },
        },
        CheckSpec {
            name: "structure_equation_horizontal",
            default_tol: 1e-7,
            runner: |ex, pts| {
                id::structure_equation_check(ex.submersion()?, pts, id::CodiffScope::Horizontal)
            },
        },
        CheckSpec {
            name: "structure_equation_vertical",
            default_tol: 1e-7,
            runner: |ex, pts| {
                id::structure_equation_check(ex.submersion()?, pts, id::CodiffScope::Vertical)
            },
        },
        CheckSpec {
            name: "curvature_vertical",
            default_tol: 1e-7,
            runner: |ex, pts| {
                id::curvature_submersion_check(ex.submersion()?, pts, id::CurvatureScope::Vertical)
            },
        },
        CheckSpec {
            name: "curvature_horizontal",
            default_tol: 1e-7,
            runner: |ex, pts| {
                id::curvature_submersion_check(
                    ex.submersion()?,
                    pts,
                    id::CurvatureScope::Horizontal,
                )
            },
        },
        CheckSpec {
            name: "horizontal_integrability",
            default_tol: 1e-8,
            runner: |ex, pts| sub_only(ex, id::horizontal_integrability_check, pts),
        },
        CheckSpec {
            name: "kahler_base_criterion",
            default_tol: 1e-9,
            runner: |ex, pts| sub_only(ex, id::kahler_base_criterion_check, pts),
        },
        CheckSpec {
            name: "base_kahler",
            default_tol: 1e-9,
            runner: |ex, pts| sub_only(ex, id::base_kahler_check, pts),
        },
        CheckSpec {
            name: "gray_k1",
            default_tol: 1e-9,
            runner: |ex, pts| id::gray_check(ex, id::GrayKind::K1, pts),
        },
        CheckSpec {
            name: "gray_k2",
            default_tol: 1e-9,
            runner: |ex, pts| id::gray_check(ex, id::GrayKind::K2, pts),
        },
        CheckSpec {
            name: "gray_k3",
            default_tol: 1e-9,
            runner: |ex, pts| id::gray_check(ex, id::GrayKind::K3, pts),
        },
        CheckSpec {
            name: "gray_k1phi",
            default_tol: 1e-9,
            runner: |ex, pts| id::gray_check(ex, id::GrayKind::K1Phi, pts),
        },
        CheckSpec {
            name: "gray_k2phi",
            default_tol: 1e-9,
            runner: |ex, pts| id::gray_check(ex, id::GrayKind::K2Phi, pts),
        },
        CheckSpec {
            name: "gray_k3phi",
            default_tol: 1e-9,
            runner: |ex, pts| id::gray_check(ex, id::GrayKind::K3Phi, pts),
        },
        CheckSpec {
            name: "gray_k1phi_fibre",
            default_tol: 1e-9,
            runner: |ex, pts| id::gray_fibre_check(ex.submersion()?, id::GrayKind::K1Phi, pts),
        },
        CheckSpec {
            name: "gray_k2phi_fibre",
            default_tol: 1e-9,
            runner: |ex, pts| id::gray_fibre_check(ex.submersion()?, id::GrayKind::K2Phi, pts),
        },
        CheckSpec {
            name: "gray_k3phi_fibre",
            default_tol: 1e-9,
            runner: |ex, pts| id::gray_fibre_check(ex.submersion()?, id::GrayKind::K3Phi, pts),
        },
    ]
}

pub fn check_names() -> Vec<&'static str> {
    all_checks().iter().map(|c| c.name).collect()
}

/// The checks `--checks all` expands to, per example: the identities the
/// instance is expected to satisfy. Any check can still be requested
/// explicitly to measure how it fails outside its hypotheses.
pub fn default_checks(example: &str) -> Result<Vec<&'static str>> {
    let substrate = vec![
        "metric_spd",
        "ad_fd_consistency",
        "connection_compat",
        "riemann_symmetries",
    ];
    let submersion_core = vec!["riemannian_submersion", "pi_related", "oneill_symmetries"];
    let contact_complex = vec![
        "structure_axioms",
        "pullback_form",
        "b_tensor",
        "codiff_frame_independence",
        "structure_equation",
        "structure_equation_horizontal",
        "structure_equation_vertical",
        "curvature_vertical",
        "curvature_horizontal",
        "base_kahler",
    ];
    let cosymplectic_suite = vec![
        "class_cosymplectic",
        "class_almost_cosymplectic",
        "a_star_identities",
        "n_vanishing",
        "harmonicity",
        "horizontal_integrability",
        "kahler_base_criterion",
        "gray_k1",
        "gray_k2",
        "gray_k3",
        "gray_k1phi",
        "gray_k2phi",
        "gray_k3phi",
        "gray_k1phi_fibre",
        "gray_k2phi_fibre",
        "gray_k3phi_fibre",
    ];
    let mut out: Vec<&'static str> = substrate.clone();
    match example {
        "hopf_s3" => {
            out.extend(submersion_core);
            out.extend(contact_complex);
            out.extend([
                "class_sasakian",
                "n_vanishing",
                "gray_k1",
                "gray_k2",
                "gray_k3",
                "gray_k1phi_fibre",
                "gray_k2phi_fibre",
                "gray_k3phi_fibre",
            ]);
        }
        "cosymplectic_product_flat" | "cosymplectic_product_s2" | "flat_r5" => {
            out.extend(submersion_core);
            out.extend(contact_complex);
            out.extend(cosymplectic_suite);
        }
        "olszak_product" => {
            out.extend(submersion_core);
            out.extend(contact_complex);
            out.extend([
                "class_almost_cosymplectic",
                "a_star_identities",
                "n_vanishing",
                "n3_witness",
                "harmonicity",
                "horizontal_integrability",
                "kahler_base_criterion",
            ]);
        }
        "warped_quadratic" | "warped_exponential" | "warped_constant" | "warped_r2_fibre" => {
            out.extend(submersion_core);
            out.extend([
                "warped_t",
                "umbilical_fibres",
                "curvature_vertical",
                "curvature_horizontal",
                "horizontal_integrability",
            ]);
        }
        "olszak_exp" => {
            out.extend([
                "structure_axioms",
                "class_almost_cosymplectic",
                "a_star_identities",
                "n_vanishing",
                "n3_witness",
                "harmonicity",
                "codiff_frame_independence",
            ]);
        }
        "olszak_constant" => {
            out.extend([
                "structure_axioms",
                "class_cosymplectic",
                "class_almost_cosymplectic",
                "a_star_identities",
                "n_vanishing",
                "harmonicity",
                "codiff_frame_independence",
            ]);
        }
        other => return Err(GeomError::UnknownExample(other.to_string())),
    }
    // stable order, no duplicates
    let order = check_names();
    let mut seen = std::collections::BTreeSet::new();
    let mut sorted = Vec::new();
    for name in order {
        if out.contains(&name) && seen.insert(name) {
            sorted.push(name);
        }
    }
    Ok(sorted)
}

/// Execute a run configuration. Residual failures are recorded in the
/// report (and flip `passed`), never raised; errors are reserved for
/// invalid configurations and unmet preconditions.
pub fn run(config: &RunConfig) -> Result<Report> {
    // reject unknown names before any computation
    if !catalog::example_names().contains(&config.example.as_str()) {
        return Err(GeomError::UnknownExample(config.example.clone()));
    }
    let requested: Vec<&str> = config.checks.iter().map(|s| s.as_str()).collect();
    let names: Vec<&'static str> = if requested == ["all"] {
        default_checks(&config.example)?
    } else {
        let vocab = check_names();
        let mut out = Vec::new();
        for name in &requested {
            match vocab.iter().find(|v| v == &name) {
                Some(v) => out.push(*v),
                None => return Err(GeomError::UnknownCheck(name.to_string())),
            }
        }
        out
    };
    if config.points == 0 {
        return Err(GeomError::PreconditionNotMet(
            "points must be at least 1".into(),
        ));
    }
    let example = catalog::build_example(&config.example)?;
    let points = sample_points(example.sample_domain(), config.points, config.seed);
    let specs = all_checks();
    let mut checks = Vec::new();
    for name in names {
        let spec = specs.iter().find(|s| s.name == name).expect("known check");
        let residuals = (spec.runner)(&example, &points)?;
        let tol = config.tol.unwrap_or(spec.default_tol);
        checks.push(IdentityCheck::from_residuals(spec.name, &residuals, tol));
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok(Report {
        config: config.clone(),
        conventions: conventions(),
        checks,
        passed,
    })
}

/// Serialize a report: stable-key JSON or an aligned text table.
pub fn emit(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut out = String::new();
            out.push_str(&format!(
                "example: {}   points: {}   seed: {}\n",
                report.config.example, report.config.points, report.config.seed
            ));
            out.push_str(&format!(
                "{:<28} {:>12} {:>12} {:>10}  {}\n",
                "check", "max", "mean", "tol", "status"
            ));
            for c in &report.checks {
                out.push_str(&format!(
                    "{:<28} {:>12.3e} {:>12.3e} {:>10.1e}  {}\n",
                    c.name,
                    c.residual_max,
                    c.residual_mean,
                    c.tolerance,
                    if c.passed { "pass" } else { "FAIL" }
                ));
            }
            out.push_str(&format!(
                "overall: {}\n",
                if report.passed { "pass" } else { "FAIL" }
            ));
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_check_list_passes_vacuously() {
        let config = RunConfig::new("olszak_constant", &[]);
        let report = run(&config).unwrap();
        assert!(report.checks.is_empty());
        assert!(report.passed);
    }

    #[test]
    fn unknown_names_rejected_before_building() {
        let config = RunConfig::new("no_such_example", &["structure_axioms"]);
        assert!(matches!(run(&config), Err(GeomError::UnknownExample(_))));
        let config = RunConfig::new("hopf_s3", &["no_such_check"]);
        assert!(matches!(run(&config), Err(GeomError::UnknownCheck(_))));
    }

    #[test]
    fn zero_points_is_a_config_error() {
        let mut config = RunConfig::new("olszak_constant", &["structure_axioms"]);
        config.points = 0;
        assert!(run(&config).is_err());
    }

    #[test]
    fn every_vocabulary_name_is_unique_and_defaults_resolve() {
        let names = check_names();
        let set: std::collections::BTreeSet<_> = names.iter().collect();
        assert_eq!(set.len(), names.len());
        for ex in catalog::example_names() {
            for check in default_checks(ex).unwrap() {
                assert!(names.contains(&check), "{check} not in vocabulary");
            }
        }
    }
}
