use super::report::{Mode, Status, Subject, Tolerances, VerificationReport};
use super::VerifyError;
use crate::diffops::sym_levelset_residual;
use crate::exactpoly::{Polynomial, PolynomialJson};

/// Certifies minimality of `{P = 0}` by exact division of the level-set
/// residual `‖∇P‖²ΔP − Δ∞P` by `P`.
pub fn verify_cone_symbolic(p: &Polynomial) -> Result<VerificationReport, VerifyError> {
    if p.is_zero() {
        return Err(VerifyError::InvalidInput("cannot verify the zero polynomial".into()));
    }
    let residual = sym_levelset_residual(p);
    let (quotient, remainder) = residual.divide(p)?;
    let pass = remainder.is_zero();
    debug_assert!(!pass || &quotient * p == residual);
    Ok(VerificationReport {
        subject: Subject::polynomial(p),
        mode: Mode::Symbolic,
        status: if pass { Status::Pass } else { Status::Fail },
        quotient: pass.then(|| PolynomialJson::from(&quotient)),
        remainder: (!pass).then(|| PolynomialJson::from(&remainder)),
        max_residual: remainder.max_abs_coefficient(),
        max_normalized: remainder.max_abs_coefficient(),
        scale_used: 1.0,
        points: 0,
        seed: 0,
        tolerances: Tolerances::exact(),
        checks: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{clifford_cone, lawson_cone_r4};
    use crate::exactpoly::rat;

    #[test]
    fn clifford_quotient_is_minus_two() {
        let r = verify_cone_symbolic(&clifford_cone()).unwrap();
        assert!(r.passed());
        let q = Polynomial::try_from(r.quotient.unwrap()).unwrap();
        assert_eq!(q, Polynomial::from_int(4, -2));
    }

    #[test]
    fn lawson_cubic_passes() {
        assert!(verify_cone_symbolic(&lawson_cone_r4(2).unwrap()).unwrap().passed());
    }

    #[test]
    fn hyperbola_control_fails() {
        // ΔP = 0 and Δ∞P = 2·x1·x2, so the residual −2·x1·x2 leaves remainder −2.
        let p = Polynomial::var(2, 0) * Polynomial::var(2, 1) - Polynomial::from_int(2, 1);
        let r = verify_cone_symbolic(&p).unwrap();
        assert_eq!(r.status, Status::Fail);
        assert!(r.quotient.is_none());
        let rem = Polynomial::try_from(r.remainder.unwrap()).unwrap();
        assert_eq!(rem, Polynomial::constant(2, rat(-2)));
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert!(verify_cone_symbolic(&Polynomial::zero(3)).is_err());
    }
}
