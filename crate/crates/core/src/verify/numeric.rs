use std::fmt;

use super::report::{CheckSummary, Mode, Status, Subject, VerificationReport};
use super::sampler::sample_zero_set;
use super::{norm, SamplerConfig, VerifyError};
use crate::diffops::{self, residual_scale, Operator};
use crate::scalarfield::{DomainGuard, FieldError, Jet2, ScalarField};

#[derive(Clone, Debug, PartialEq)]
pub enum Check {
    Harmonic,
    InfHarmonic,
    PHarmonic(Vec<f64>),
    GraphMinimal,
    LevelsetMinimal,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Check::Harmonic => write!(f, "harmonic"),
            Check::InfHarmonic => write!(f, "inf_harmonic"),
            Check::PHarmonic(ps) => {
                let ps: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
                write!(f, "p_harmonic({})", ps.join(","))
            }
            Check::GraphMinimal => write!(f, "graph_minimal"),
            Check::LevelsetMinimal => write!(f, "levelset_minimal"),
        }
    }
}

impl Check {
    fn operators(&self) -> Vec<Operator> {
        match self {
            Check::Harmonic => vec![Operator::Laplacian],
            Check::InfHarmonic => vec![Operator::InfLaplacian],
            Check::PHarmonic(ps) => ps.iter().map(|&p| Operator::PLaplacian(p)).collect(),
            Check::GraphMinimal => vec![Operator::GraphResidual],
            Check::LevelsetMinimal => vec![Operator::LevelsetResidual],
        }
    }
}

/// Residual normalizer `(1+‖∇‖)³(1+‖Hess‖)`, times `(1+‖z‖)^{max(0, 3d−4)}`
/// when the field is a single polynomial of degree `d`.
pub fn normalized_scale(f: &ScalarField, jet: &Jet2, z: &[f64]) -> f64 {
    let base = residual_scale(jet);
    match f.as_polynomial().and_then(|p| p.total_degree()) {
        Some(d) => {
            let e = (3 * d as i32 - 4).max(0);
            base * (1.0 + norm(z)).powi(e)
        }
        None => base,
    }
}

struct Accum {
    label: String,
    max_residual: f64,
    max_normalized: f64,
    scale_used: f64,
}

impl Accum {
    fn new(label: String) -> Self {
        Accum { label, max_residual: 0.0, max_normalized: 0.0, scale_used: 1.0 }
    }

    fn record(&mut self, residual: f64, scale: f64) {
        let r = residual.abs();
        let normalized = if r.is_finite() { r / scale } else { f64::INFINITY };
        self.max_residual = self.max_residual.max(r);
        if normalized > self.max_normalized || normalized.is_nan() {
            self.max_normalized = normalized;
            self.scale_used = scale;
        }
    }

    fn summary(&self) -> CheckSummary {
        CheckSummary {
            check: self.label.clone(),
            max_residual: self.max_residual,
            max_normalized: self.max_normalized,
            scale_used: self.scale_used,
        }
    }
}

fn label(op: Operator) -> String {
    match op {
        Operator::Laplacian => "harmonic".into(),
        Operator::InfLaplacian => "inf_harmonic".into(),
        Operator::PLaplacian(p) => format!("p_harmonic({p})"),
        Operator::GraphResidual => "graph_minimal".into(),
        Operator::LevelsetResidual => "levelset_minimal".into(),
    }
}

fn evaluate(
    f: &ScalarField,
    ops: &[Operator],
    acc: &mut [Accum],
    z: &[f64],
    jet: &Jet2,
) -> Result<(), VerifyError> {
    let scale = normalized_scale(f, jet, z);
    for (op, a) in ops.iter().zip(acc.iter_mut()) {
        let r = diffops::apply(*op, jet)?;
        a.record(r.value, scale);
    }
    Ok(())
}

fn assemble(
    f: &ScalarField,
    accs: Vec<Accum>,
    points: usize,
    status_override: Option<Status>,
    cfg: &SamplerConfig,
    tol: f64,
) -> VerificationReport {
    let summaries: Vec<CheckSummary> = accs.iter().map(Accum::summary).collect();
    let worst = summaries
        .iter()
        .max_by(|a, b| a.max_normalized.total_cmp(&b.max_normalized));
    let max_normalized = worst.map_or(0.0, |s| s.max_normalized);
    let scale_used = worst.map_or(1.0, |s| s.scale_used);
    let max_residual = summaries.iter().map(|s| s.max_residual).fold(0.0, f64::max);
    let pass = max_normalized <= tol;
    VerificationReport {
        subject: Subject::Expression { expression: f.describe() },
        mode: Mode::Numeric,
        status: status_override.unwrap_or(if pass { Status::Pass } else { Status::Fail }),
        quotient: None,
        remainder: None,
        max_residual,
        max_normalized,
        scale_used,
        points,
        seed: cfg.seed,
        tolerances: cfg.tolerances(tol),
        checks: summaries,
    }
}

/// Draws in-domain points from the box, skipping those that are out of
/// domain, too close to the origin, or (when `need_gradient`) critical.
fn box_points(
    f: &ScalarField,
    cfg: &SamplerConfig,
    need_gradient: bool,
) -> Result<Vec<(Vec<f64>, Jet2)>, VerifyError> {
    let guard = DomainGuard::default();
    let mut rng = cfg.rng();
    let mut out = Vec::with_capacity(cfg.count);
    for _ in 0..cfg.max_attempts() {
        if out.len() == cfg.count {
            break;
        }
        let z = cfg.draw(&mut rng, f.nvars());
        if norm(&z) < cfg.min_point_norm {
            continue;
        }
        let Ok(jet) = f.eval_jet2(&z, &guard) else { continue };
        if need_gradient && jet.gradient_norm_sq().sqrt() < cfg.min_grad_norm {
            continue;
        }
        out.push((z, jet));
    }
    if out.len() < cfg.count {
        return Err(VerifyError::SamplingExhausted { found: out.len(), requested: cfg.count });
    }
    Ok(out)
}

/// Evaluates each requested operator at `cfg.count` seeded points (zero-set
/// points for `LevelsetMinimal`) and passes iff every normalized residual is
/// at most `tol`.
pub fn verify_field_numeric(
    f: &ScalarField,
    checks: &[Check],
    cfg: &SamplerConfig,
    tol: f64,
) -> Result<VerificationReport, VerifyError> {
    if checks.is_empty() {
        return Err(VerifyError::InvalidInput("no checks requested".into()));
    }
    cfg.validate()?;
    let box_ops: Vec<Operator> = checks
        .iter()
        .filter(|c| **c != Check::LevelsetMinimal)
        .flat_map(Check::operators)
        .collect();
    let mut accs: Vec<Accum> = box_ops.iter().map(|&op| Accum::new(label(op))).collect();
    let mut points = 0;
    if !box_ops.is_empty() {
        let need_gradient = box_ops.iter().any(|op| matches!(op, Operator::PLaplacian(_)));
        for (z, jet) in box_points(f, cfg, need_gradient)? {
            evaluate(f, &box_ops, &mut accs, &z, &jet)?;
            points += 1;
        }
    }
    if checks.contains(&Check::LevelsetMinimal) {
        let mut acc = vec![Accum::new(label(Operator::LevelsetResidual))];
        let guard = DomainGuard::default();
        for z in sample_zero_set(f, cfg)? {
            let jet = f.eval_jet2(&z, &guard)?;
            evaluate(f, &[Operator::LevelsetResidual], &mut acc, &z, &jet)?;
            points += 1;
        }
        accs.extend(acc);
    }
    Ok(assemble(f, accs, points, None, cfg, tol))
}

/// Like [`verify_field_numeric`] at caller-supplied points. A point outside
/// the field's domain ends the run with status `out-of-domain`.
pub fn verify_field_at_points(
    f: &ScalarField,
    checks: &[Check],
    points: &[Vec<f64>],
    tol: f64,
) -> Result<VerificationReport, VerifyError> {
    if checks.is_empty() {
        return Err(VerifyError::InvalidInput("no checks requested".into()));
    }
    let ops: Vec<Operator> = checks.iter().flat_map(Check::operators).collect();
    let mut accs: Vec<Accum> = ops.iter().map(|&op| Accum::new(label(op))).collect();
    let guard = DomainGuard::default();
    let cfg = SamplerConfig::default();
    let mut evaluated = 0;
    for z in points {
        let jet = match f.eval_jet2(z, &guard) {
            Ok(j) => j,
            Err(FieldError::OutOfDomain { .. }) => {
                return Ok(assemble(f, accs, evaluated, Some(Status::OutOfDomain), &cfg, tol));
            }
            Err(e) => return Err(e.into()),
        };
        evaluate(f, &ops, &mut accs, z, &jet)?;
        evaluated += 1;
    }
    Ok(assemble(f, accs, evaluated, None, &cfg, tol))
}

/// Checks `⟨∇F, ξ⟩ = expected` for the rotation generator
/// `ξ = Σ (−y_k ∂/∂x_k + x_k ∂/∂y_k)` over the given `(x, y)` index pairs.
pub fn rotational_derivative_check(
    f: &ScalarField,
    pairs: &[(usize, usize)],
    expected: f64,
    cfg: &SamplerConfig,
    tol: f64,
) -> Result<VerificationReport, VerifyError> {
    cfg.validate()?;
    if let Some(&(a, b)) = pairs.iter().find(|(a, b)| *a >= f.nvars() || *b >= f.nvars()) {
        return Err(VerifyError::InvalidInput(format!(
            "pair ({a}, {b}) outside a {}-variable field",
            f.nvars()
        )));
    }
    let mut acc = Accum::new("rotational_derivative".into());
    let pts = box_points(f, cfg, false)?;
    for (z, jet) in &pts {
        let g = jet.gradient();
        let d: f64 = pairs.iter().map(|&(xi, yi)| -z[yi] * g[xi] + z[xi] * g[yi]).sum();
        acc.record(d - expected, 1.0);
    }
    Ok(assemble(f, vec![acc], pts.len(), None, cfg, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{ch_height, helicoid_height};
    use crate::exactpoly::Polynomial;

    #[test]
    fn ch_height_three_is_harmonic_and_inf_harmonic() {
        let f = ch_height(3).unwrap();
        let r = verify_field_numeric(
            &f,
            &[Check::Harmonic, Check::InfHarmonic],
            &SamplerConfig::default().with_seed(1),
            1e-9,
        )
        .unwrap();
        assert!(r.passed(), "{}", r.to_json());
        assert_eq!(r.points, 100);
        assert_eq!(r.checks.len(), 2);
    }

    #[test]
    fn square_is_not_harmonic() {
        let f = ScalarField::from_poly(&Polynomial::var(2, 0).pow(2));
        let r = verify_field_numeric(&f, &[Check::Harmonic], &SamplerConfig::default(), 1e-9).unwrap();
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.max_residual, 2.0);
    }

    #[test]
    fn empty_checks_rejected() {
        let f = helicoid_height();
        assert!(verify_field_numeric(&f, &[], &SamplerConfig::default(), 1e-9).is_err());
    }

    #[test]
    fn helicoid_rotation_rate_is_one() {
        let r = rotational_derivative_check(
            &helicoid_height(),
            &[(0, 1)],
            1.0,
            &SamplerConfig::default(),
            1e-9,
        )
        .unwrap();
        assert!(r.passed());
        let wrong = rotational_derivative_check(
            &helicoid_height(),
            &[(0, 1)],
            2.0,
            &SamplerConfig::default(),
            1e-9,
        )
        .unwrap();
        assert_eq!(wrong.status, Status::Fail);
    }

    #[test]
    fn explicit_out_of_domain_point() {
        let r = verify_field_at_points(
            &helicoid_height(),
            &[Check::Harmonic],
            &[vec![1.0, 1.0], vec![0.0, 1.0]],
            1e-9,
        )
        .unwrap();
        assert_eq!(r.status, Status::OutOfDomain);
        assert_eq!(r.points, 1);
    }

    #[test]
    fn pair_indices_validated() {
        let err = rotational_derivative_check(
            &helicoid_height(),
            &[(0, 2)],
            1.0,
            &SamplerConfig::default(),
            1e-9,
        );
        assert!(err.is_err());
    }
}
