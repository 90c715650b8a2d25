use super::{norm, SamplerConfig, VerifyError};
use crate::scalarfield::{DomainGuard, ScalarField};

/// Points on `{U = 0}`, found by damped Newton steps along `∇U` from
/// uniform random starts. Every returned point satisfies
/// `|U| ≤ surface_tol·(1+‖∇U‖)`, `‖∇U‖ ≥ min_grad_norm` and
/// `‖z‖ ≥ min_point_norm`. Deterministic in `cfg.seed`.
pub fn sample_zero_set(u: &ScalarField, cfg: &SamplerConfig) -> Result<Vec<Vec<f64>>, VerifyError> {
    cfg.validate()?;
    let guard = DomainGuard::default();
    let mut rng = cfg.rng();
    let mut points = Vec::with_capacity(cfg.count);
    for _ in 0..cfg.max_attempts() {
        if points.len() == cfg.count {
            break;
        }
        let start = cfg.draw(&mut rng, u.nvars());
        if let Some(z) = newton_project(u, start, cfg, &guard) {
            points.push(z);
        }
    }
    if points.len() < cfg.count {
        return Err(VerifyError::SamplingExhausted { found: points.len(), requested: cfg.count });
    }
    Ok(points)
}

fn accepted(value: f64, grad_norm: f64, z: &[f64], cfg: &SamplerConfig) -> bool {
    value.abs() <= cfg.surface_tol * (1.0 + grad_norm)
        && grad_norm >= cfg.min_grad_norm
        && norm(z) >= cfg.min_point_norm
}

fn newton_project(u: &ScalarField, mut z: Vec<f64>, cfg: &SamplerConfig, guard: &DomainGuard) -> Option<Vec<f64>> {
    for _ in 0..=cfg.newton_max_iter {
        let jet = u.eval_jet2(&z, guard).ok()?;
        let value = jet.value();
        let g2 = jet.gradient_norm_sq();
        let gn = g2.sqrt();
        if value.abs() <= cfg.surface_tol * (1.0 + gn) {
            return accepted(value, gn, &z, cfg).then_some(z);
        }
        if gn < cfg.min_grad_norm || !value.is_finite() {
            return None;
        }
        let step: Vec<f64> = jet.gradient().iter().map(|g| -value * g / g2).collect();
        // Halve the step until |U| decreases.
        let mut t = 1.0;
        let mut next = None;
        for _ in 0..30 {
            let trial: Vec<f64> = z.iter().zip(&step).map(|(a, s)| a + t * s).collect();
            if let Ok(v) = u.eval(&trial, guard) {
                if v.abs() < value.abs() {
                    next = Some(trial);
                    break;
                }
            }
            t *= 0.5;
        }
        z = next?;
    }
    None
}
