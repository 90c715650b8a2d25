//! Central finite differences, used as an oracle independent of the jets.

use super::{DomainGuard, FieldError, ScalarField};

/// Central-difference gradient, `O(h²)`.
pub fn fd_gradient(f: &ScalarField, pt: &[f64], h: f64, guard: &DomainGuard) -> Result<Vec<f64>, FieldError> {
    let mut p = pt.to_vec();
    let mut grad = Vec::with_capacity(pt.len());
    for i in 0..pt.len() {
        p[i] = pt[i] + h;
        let fp = f.eval(&p, guard)?;
        p[i] = pt[i] - h;
        let fm = f.eval(&p, guard)?;
        p[i] = pt[i];
        grad.push((fp - fm) / (2.0 * h));
    }
    Ok(grad)
}

/// Central-difference gradient and row-major Hessian, both `O(h²)`.
/// The Hessian is symmetrized by averaging.
pub fn fd_hessian(
    f: &ScalarField,
    pt: &[f64],
    h: f64,
    guard: &DomainGuard,
) -> Result<(Vec<f64>, Vec<f64>), FieldError> {
    let n = pt.len();
    let grad = fd_gradient(f, pt, h, guard)?;
    let f0 = f.eval(pt, guard)?;
    let mut p = pt.to_vec();
    let mut eval_at = |shifts: &[(usize, f64)]| -> Result<f64, FieldError> {
        for &(i, s) in shifts {
            p[i] += s;
        }
        let v = f.eval(&p, guard);
        p.copy_from_slice(pt);
        v
    };
    let mut hess = vec![0.0; n * n];
    for i in 0..n {
        let fp = eval_at(&[(i, h)])?;
        let fm = eval_at(&[(i, -h)])?;
        hess[i * n + i] = (fp - 2.0 * f0 + fm) / (h * h);
        for j in 0..i {
            let fpp = eval_at(&[(i, h), (j, h)])?;
            let fpm = eval_at(&[(i, h), (j, -h)])?;
            let fmp = eval_at(&[(i, -h), (j, h)])?;
            let fmm = eval_at(&[(i, -h), (j, -h)])?;
            let d = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
            hess[i * n + j] = d;
            hess[j * n + i] = d;
        }
    }
    for i in 0..n {
        for j in 0..i {
            let avg = 0.5 * (hess[i * n + j] + hess[j * n + i]);
            hess[i * n + j] = avg;
            hess[j * n + i] = avg;
        }
    }
    Ok((grad, hess))
}

/// `max |a - b| / (1 + max |a|)`: relative for large entries, absolute near zero.
pub fn relative_error(a: &[f64], b: &[f64]) -> f64 {
    let diff = a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let mag = a.iter().map(|x| x.abs()).fold(0.0, f64::max);
    diff / (1.0 + mag)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::Polynomial;

    #[test]
    fn cubic_monomial() {
        let f = ScalarField::from_poly(&Polynomial::var(1, 0).pow(3));
        let (g, h) = fd_hessian(&f, &[2.0], 1e-4, &DomainGuard::default()).unwrap();
        assert!((g[0] - 12.0).abs() < 1e-6);
        assert!((h[0] - 12.0).abs() < 1e-4);
    }

    #[test]
    fn linear_field_has_flat_hessian() {
        let p = Polynomial::var(3, 0) - Polynomial::var(3, 2).scale(&crate::exactpoly::rat(4));
        let f = ScalarField::from_poly(&p);
        let (_, h) = fd_hessian(&f, &[0.3, 1.1, -0.4], 1e-4, &DomainGuard::default()).unwrap();
        assert!(h.iter().all(|v| v.abs() < 1e-8));
    }

    #[test]
    fn helicoid_matches_jet() {
        let f = ScalarField::variable(2, 1).div(ScalarField::variable(2, 0)).atan();
        let guard = DomainGuard::default();
        let pt = [1.0, 1.0];
        let j = f.eval_jet2(&pt, &guard).unwrap();
        let (g, h) = fd_hessian(&f, &pt, 1e-4, &guard).unwrap();
        assert!(relative_error(j.gradient(), &g) < 1e-5);
        assert!(relative_error(j.hessian_flat(), &h) < 1e-5);
    }

    #[test]
    fn stencil_outside_domain_errors() {
        let f = ScalarField::variable(1, 0).recip();
        assert!(fd_hessian(&f, &[1e-4], 1e-4, &DomainGuard::default()).is_err());
    }
}
