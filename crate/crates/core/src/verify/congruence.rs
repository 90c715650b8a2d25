use std::f64::consts::FRAC_PI_4;

use serde::{Deserialize, Serialize};

use super::report::{CheckSummary, Mode, Status, Subject, VerificationReport};
use super::{norm, SamplerConfig, VerifyError};
use crate::exactpoly::Polynomial;
use crate::verify::report::polynomial_hash;

fn check_matrix(m: &[Vec<f64>], n: usize) -> Result<(), VerifyError> {
    if m.len() != n || m.iter().any(|row| row.len() != n) {
        return Err(VerifyError::InvalidInput(format!("matrix must be {n}×{n}")));
    }
    Ok(())
}

fn apply(m: &[Vec<f64>], z: &[f64]) -> Vec<f64> {
    m.iter().map(|row| row.iter().zip(z).map(|(a, b)| a * b).sum()).collect()
}

fn degree(p: &Polynomial, q: &Polynomial) -> i32 {
    p.total_degree().unwrap_or(0).max(q.total_degree().unwrap_or(0)) as i32
}

/// Checks `|P(Mz) − scale·Q(z)| ≤ tol·(1+‖z‖)^deg` at `cfg.count` seeded points.
pub fn verify_congruence_numeric(
    p: &Polynomial,
    q: &Polynomial,
    matrix: &[Vec<f64>],
    scale: f64,
    cfg: &SamplerConfig,
    tol: f64,
) -> Result<VerificationReport, VerifyError> {
    cfg.validate()?;
    if p.nvars() != q.nvars() {
        return Err(VerifyError::InvalidInput(format!(
            "P has {} variables, Q has {}",
            p.nvars(),
            q.nvars()
        )));
    }
    check_matrix(matrix, p.nvars())?;
    let deg = degree(p, q);
    let mut rng = cfg.rng();
    let (mut max_residual, mut max_normalized, mut scale_used) = (0.0f64, 0.0f64, 1.0);
    for _ in 0..cfg.count {
        let z = cfg.draw(&mut rng, p.nvars());
        let lhs = p.eval_f64(&apply(matrix, &z))?;
        let rhs = scale * q.eval_f64(&z)?;
        let r = (lhs - rhs).abs();
        let s = (1.0 + norm(&z)).powi(deg);
        max_residual = max_residual.max(r);
        if r / s > max_normalized || r.is_nan() {
            max_normalized = r / s;
            scale_used = s;
        }
    }
    let pass = max_normalized <= tol;
    Ok(VerificationReport {
        subject: Subject::Pair { p_sha256: polynomial_hash(p), q_sha256: polynomial_hash(q) },
        mode: Mode::Numeric,
        status: if pass { Status::Pass } else { Status::Fail },
        quotient: None,
        remainder: None,
        max_residual,
        max_normalized,
        scale_used,
        points: cfg.count,
        seed: cfg.seed,
        tolerances: cfg.tolerances(tol),
        checks: vec![CheckSummary {
            check: "congruence".into(),
            max_residual,
            max_normalized,
            scale_used,
        }],
    })
}

/// Rotation by `angle` in the coordinate plane `(i, j)`, as an `n × n` matrix.
pub fn plane_rotation(n: usize, i: usize, j: usize, angle: f64) -> Vec<Vec<f64>> {
    let mut m: Vec<Vec<f64>> = (0..n)
        .map(|r| (0..n).map(|c| if r == c { 1.0 } else { 0.0 }).collect())
        .collect();
    let (s, c) = angle.sin_cos();
    m[i][i] = c;
    m[i][j] = -s;
    m[j][i] = s;
    m[j][j] = c;
    m
}

fn matmul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    (0..n)
        .map(|r| (0..n).map(|c| (0..n).map(|k| a[r][k] * b[k][c]).sum()).collect())
        .collect()
}

/// Best congruence `P(Mz) ≈ scale·Q(z)` found among rotations by ±π/4 in
/// two disjoint coordinate planes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CongruenceFit {
    pub planes: [[usize; 2]; 2],
    pub angles: [f64; 2],
    pub matrix: Vec<Vec<f64>>,
    pub scale: f64,
    pub residual: f64,
}

/// Fits `scale` by least squares for every candidate and returns the first
/// one whose normalized residual is within `tol`, or the best overall.
pub fn search_plane_rotation_congruence(
    p: &Polynomial,
    q: &Polynomial,
    cfg: &SamplerConfig,
    tol: f64,
) -> Result<CongruenceFit, VerifyError> {
    cfg.validate()?;
    let n = p.nvars();
    if n != q.nvars() || n < 4 {
        return Err(VerifyError::InvalidInput(
            "need two polynomials in the same number (≥ 4) of variables".into(),
        ));
    }
    let deg = degree(p, q);
    let mut rng = cfg.rng();
    let samples: Vec<Vec<f64>> = (0..cfg.count).map(|_| cfg.draw(&mut rng, n)).collect();
    let q_vals: Vec<f64> = samples.iter().map(|z| q.eval_f64(z)).collect::<Result<_, _>>()?;
    let qq: f64 = q_vals.iter().map(|v| v * v).sum();
    if qq == 0.0 {
        return Err(VerifyError::InvalidInput("Q vanishes at every sample".into()));
    }
    let mut planes = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            planes.push([i, j]);
        }
    }
    let mut best: Option<CongruenceFit> = None;
    for (a, pa) in planes.iter().enumerate() {
        for pb in &planes[a + 1..] {
            if pb.iter().any(|k| pa.contains(k)) {
                continue;
            }
            for sa in [1.0, -1.0] {
                for sb in [1.0, -1.0] {
                    let angles = [sa * FRAC_PI_4, sb * FRAC_PI_4];
                    let m = matmul(
                        &plane_rotation(n, pa[0], pa[1], angles[0]),
                        &plane_rotation(n, pb[0], pb[1], angles[1]),
                    );
                    let p_vals: Vec<f64> = samples
                        .iter()
                        .map(|z| p.eval_f64(&apply(&m, z)))
                        .collect::<Result<_, _>>()?;
                    let scale = p_vals.iter().zip(&q_vals).map(|(a, b)| a * b).sum::<f64>() / qq;
                    let residual = samples
                        .iter()
                        .zip(p_vals.iter().zip(&q_vals))
                        .map(|(z, (pv, qv))| (pv - scale * qv).abs() / (1.0 + norm(z)).powi(deg))
                        .fold(0.0, f64::max);
                    let fit = CongruenceFit { planes: [*pa, *pb], angles, matrix: m, scale, residual };
                    if residual <= tol {
                        return Ok(fit);
                    }
                    if best.as_ref().is_none_or(|b| residual < b.residual) {
                        best = Some(fit);
                    }
                }
            }
        }
    }
    best.ok_or_else(|| VerifyError::InvalidInput("no candidate planes".into()))
}
