//! Laplacian, ∞-Laplacian, p-Laplacian and the two minimal-surface
//! residuals, numerically on a [`Jet2`] and exactly on polynomials.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::exactpoly::{Polynomial, Rational};
use crate::scalarfield::{DomainGuard, FieldError, Jet2, ScalarField};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DiffError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("p-Laplacian with p = {p} is singular at a critical point")]
    SingularPoint { p: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Operator {
    Laplacian,
    InfLaplacian,
    PLaplacian(f64),
    GraphResidual,
    LevelsetResidual,
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operator::Laplacian => write!(f, "laplacian"),
            Operator::InfLaplacian => write!(f, "inf_laplacian"),
            Operator::PLaplacian(p) => write!(f, "p_laplacian({p})"),
            Operator::GraphResidual => write!(f, "graph_residual"),
            Operator::LevelsetResidual => write!(f, "levelset_residual"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OperatorResult {
    pub op: Operator,
    pub value: f64,
    pub gradient_norm_sq: f64,
}

pub fn laplacian(jet: &Jet2) -> f64 {
    (0..jet.dim()).map(|i| jet.hessian(i, i)).sum()
}

/// `Σ Fᵢ Fⱼ Fᵢⱼ`, i.e. `⟨∇F, ∇(½‖∇F‖²)⟩`.
pub fn inf_laplacian(jet: &Jet2) -> f64 {
    let g = jet.gradient();
    let n = jet.dim();
    let mut acc = 0.0;
    for i in 0..n {
        let row: f64 = (0..n).map(|j| jet.hessian(i, j) * g[j]).sum();
        acc += g[i] * row;
    }
    acc
}

/// `‖∇F‖^{p−4} [(p−2) Δ∞F + ‖∇F‖² ΔF]`.
pub fn p_laplacian(jet: &Jet2, p: f64) -> Result<f64, DiffError> {
    let g2 = jet.gradient_norm_sq();
    if g2 == 0.0 && p < 4.0 {
        return Err(DiffError::SingularPoint { p });
    }
    let prefactor = g2.sqrt().powf(p - 4.0);
    Ok(prefactor * ((p - 2.0) * inf_laplacian(jet) + g2 * laplacian(jet)))
}

/// Numerator of the graph minimal surface equation, `(1+‖∇F‖²)ΔF − Δ∞F`.
pub fn graph_residual(jet: &Jet2) -> f64 {
    (1.0 + jet.gradient_norm_sq()) * laplacian(jet) - inf_laplacian(jet)
}

/// `‖∇U‖²ΔU − Δ∞U`; vanishes on `{U = 0}` iff the level set is minimal there.
pub fn levelset_residual(jet: &Jet2) -> f64 {
    jet.gradient_norm_sq() * laplacian(jet) - inf_laplacian(jet)
}

/// Normalizer for residual tolerances: `(1+‖∇F‖)³·(1+‖Hess F‖_F)`.
pub fn residual_scale(jet: &Jet2) -> f64 {
    (1.0 + jet.gradient_norm_sq().sqrt()).powi(3) * (1.0 + jet.hessian_norm())
}

pub fn apply(op: Operator, jet: &Jet2) -> Result<OperatorResult, DiffError> {
    let value = match op {
        Operator::Laplacian => laplacian(jet),
        Operator::InfLaplacian => inf_laplacian(jet),
        Operator::PLaplacian(p) => p_laplacian(jet, p)?,
        Operator::GraphResidual => graph_residual(jet),
        Operator::LevelsetResidual => levelset_residual(jet),
    };
    Ok(OperatorResult { op, value, gradient_norm_sq: jet.gradient_norm_sq() })
}

fn jet_at(f: &ScalarField, pt: &[f64]) -> Result<Jet2, DiffError> {
    Ok(f.eval_jet2(pt, &DomainGuard::default())?)
}

pub fn laplacian_at(f: &ScalarField, pt: &[f64]) -> Result<f64, DiffError> {
    Ok(laplacian(&jet_at(f, pt)?))
}

pub fn inf_laplacian_at(f: &ScalarField, pt: &[f64]) -> Result<f64, DiffError> {
    Ok(inf_laplacian(&jet_at(f, pt)?))
}

pub fn p_laplacian_at(f: &ScalarField, pt: &[f64], p: f64) -> Result<f64, DiffError> {
    p_laplacian(&jet_at(f, pt)?, p)
}

pub fn graph_residual_at(f: &ScalarField, pt: &[f64]) -> Result<f64, DiffError> {
    Ok(graph_residual(&jet_at(f, pt)?))
}

pub fn levelset_residual_at(u: &ScalarField, pt: &[f64]) -> Result<f64, DiffError> {
    Ok(levelset_residual(&jet_at(u, pt)?))
}

pub fn sym_laplacian(p: &Polynomial) -> Polynomial {
    (0..p.nvars()).fold(Polynomial::zero(p.nvars()), |acc, i| {
        let pii = p.partial(i).and_then(|d| d.partial(i)).expect("index in range");
        acc + pii
    })
}

fn grad_norm_sq(grad: &[Polynomial], nvars: usize) -> Polynomial {
    grad.iter().fold(Polynomial::zero(nvars), |acc, g| acc + g * g)
}

// Δ∞P = ½ ⟨∇P, ∇‖∇P‖²⟩: two passes of n products instead of n² triple products.
fn inf_laplacian_from(grad: &[Polynomial], norm_sq: &Polynomial) -> Polynomial {
    let n = norm_sq.nvars();
    let sum = grad.iter().enumerate().fold(Polynomial::zero(n), |acc, (i, g)| {
        acc + g * &norm_sq.partial(i).expect("index in range")
    });
    sum.scale(&Rational::new(1.into(), 2.into()))
}

pub fn sym_inf_laplacian(p: &Polynomial) -> Polynomial {
    let grad = p.gradient();
    let s = grad_norm_sq(&grad, p.nvars());
    inf_laplacian_from(&grad, &s)
}

/// Exact level-set residual `‖∇P‖²ΔP − Δ∞P`.
pub fn sym_levelset_residual(p: &Polynomial) -> Polynomial {
    let grad = p.gradient();
    let s = grad_norm_sq(&grad, p.nvars());
    &s * &sym_laplacian(p) - inf_laplacian_from(&grad, &s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::rat;

    fn g() -> DomainGuard {
        DomainGuard::default()
    }

    fn v(n: usize, i: usize) -> Polynomial {
        Polynomial::var(n, i)
    }

    fn clifford() -> Polynomial {
        v(4, 0) * v(4, 3) - v(4, 1) * v(4, 2)
    }

    fn helicoid() -> ScalarField {
        ScalarField::variable(2, 1).div(ScalarField::variable(2, 0)).atan()
    }

    fn half_norm_sq() -> ScalarField {
        let p = (v(2, 0) * v(2, 0) + v(2, 1) * v(2, 1)).scale(&Rational::new(1.into(), 2.into()));
        ScalarField::from_poly(&p)
    }

    // Direct triple sum Σᵢⱼ PᵢPⱼPᵢⱼ, independent of the ½∇‖∇P‖² route.
    fn inf_laplacian_direct(p: &Polynomial) -> Polynomial {
        let n = p.nvars();
        let mut acc = Polynomial::zero(n);
        for i in 0..n {
            for j in 0..n {
                let pi = p.partial(i).unwrap();
                let pj = p.partial(j).unwrap();
                let pij = pi.partial(j).unwrap();
                acc = acc + pi * pj * pij;
            }
        }
        acc
    }

    #[test]
    fn laplacian_examples() {
        let sq = ScalarField::from_poly(&(v(2, 0) * v(2, 0) + v(2, 1) * v(2, 1)));
        assert_eq!(laplacian_at(&sq, &[0.3, -2.0]).unwrap(), 4.0);
        assert!(laplacian_at(&helicoid(), &[1.0, 1.0]).unwrap().abs() < 1e-12);
    }

    #[test]
    fn inf_laplacian_examples() {
        let lin = ScalarField::from_poly(&(v(2, 0) + v(2, 1).scale(&rat(3))));
        assert_eq!(inf_laplacian_at(&lin, &[0.2, 0.9]).unwrap(), 0.0);
        // Fᵢ = zᵢ, Fᵢⱼ = δᵢⱼ, so Δ∞ = ‖z‖² = 2 at (1,1).
        assert_eq!(inf_laplacian_at(&half_norm_sq(), &[1.0, 1.0]).unwrap(), 2.0);
    }

    #[test]
    fn p_laplacian_examples() {
        let f = half_norm_sq();
        // (4−2)·Δ∞ + ‖∇F‖²·Δ = 2·1 + 1·2 at (1,0).
        assert_eq!(p_laplacian_at(&f, &[1.0, 0.0], 4.0).unwrap(), 4.0);
        let pt = [0.4, -1.3];
        assert!((p_laplacian_at(&f, &pt, 2.0).unwrap() - laplacian_at(&f, &pt).unwrap()).abs() < 1e-14);
        assert_eq!(
            p_laplacian_at(&f, &[0.0, 0.0], 3.0),
            Err(DiffError::SingularPoint { p: 3.0 })
        );
        assert_eq!(p_laplacian_at(&f, &[0.0, 0.0], 4.0).unwrap(), 0.0);
    }

    #[test]
    fn graph_residual_examples() {
        let lin = ScalarField::from_poly(&(v(2, 0) - v(2, 1)));
        assert_eq!(graph_residual_at(&lin, &[3.0, 1.0]).unwrap(), 0.0);
        // ∇ = (2,0), Δ = 4, Δ∞ = 8(x²+y²) = 8: (1+4)·4 − 8.
        let sq = ScalarField::from_poly(&(v(2, 0) * v(2, 0) + v(2, 1) * v(2, 1)));
        assert_eq!(graph_residual_at(&sq, &[1.0, 0.0]).unwrap(), 12.0);
        assert!(graph_residual_at(&helicoid(), &[2.0, 1.0]).unwrap().abs() < 1e-12);
    }

    #[test]
    fn levelset_residual_examples() {
        let lin = ScalarField::from_poly(&(v(3, 0) + v(3, 2)));
        assert_eq!(levelset_residual_at(&lin, &[1.0, 2.0, 3.0]).unwrap(), 0.0);
        let cl = ScalarField::from_poly(&clifford());
        let pt = [0.3, -1.2, 0.7, 2.1];
        let expected = -2.0 * clifford().eval_f64(&pt).unwrap();
        assert!((levelset_residual_at(&cl, &pt).unwrap() - expected).abs() < 1e-12);
        let u = helicoid().embed(0, 3) - ScalarField::variable(3, 2);
        assert!(levelset_residual_at(&u, &[1.0, 1.0, 0.5]).unwrap().abs() < 1e-12);
    }

    #[test]
    fn symbolic_clifford() {
        let p = clifford();
        assert!(sym_laplacian(&p).is_zero());
        assert_eq!(sym_inf_laplacian(&p), p.scale(&rat(2)));
        assert_eq!(sym_levelset_residual(&p), p.scale(&rat(-2)));
    }

    #[test]
    fn symbolic_sum_of_squares() {
        for m in 1..=4 {
            let p = (0..m).fold(Polynomial::zero(m), |acc, i| acc + v(m, i) * v(m, i));
            assert_eq!(sym_laplacian(&p), Polynomial::from_int(m, 2 * m as i64));
            assert_eq!(sym_inf_laplacian(&p), p.scale(&rat(8)));
        }
    }

    #[test]
    fn symbolic_linear_is_zero() {
        let p = v(3, 0).scale(&rat(2)) - v(3, 1) + Polynomial::from_int(3, 5);
        assert!(sym_laplacian(&p).is_zero());
        assert!(sym_inf_laplacian(&p).is_zero());
        assert!(sym_levelset_residual(&p).is_zero());
    }

    #[test]
    fn half_gradient_route_matches_triple_sum() {
        let p = v(3, 0).pow(3) - v(3, 1) * v(3, 2).scale(&rat(4)) + v(3, 0) * v(3, 1) * v(3, 2);
        assert_eq!(sym_inf_laplacian(&p), inf_laplacian_direct(&p));
        let q = v(4, 3) * (v(4, 0).pow(2) - v(4, 1).pow(2)) - v(4, 2) * v(4, 0) * v(4, 1).scale(&rat(2));
        assert_eq!(sym_inf_laplacian(&q), inf_laplacian_direct(&q));
    }

    #[test]
    fn scale_is_at_least_one() {
        let j = half_norm_sq().eval_jet2(&[0.0, 0.0], &g()).unwrap();
        assert_eq!(residual_scale(&j), 1.0 + 2f64.sqrt());
    }
}
