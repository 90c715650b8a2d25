//! Defining polynomials of the algebraic minimal cones.
//!
//! Coordinates are interleaved pairs: pair `k` (0-based) occupies indices
//! `2k` (x) and `2k + 1` (y).

use num_bigint::BigInt;
use num_integer::Integer;

use super::ConstructionError;
use crate::exactpoly::{rat, Polynomial, Rational};

fn x(nvars: usize, pair: usize) -> Polynomial {
    Polynomial::var(nvars, 2 * pair)
}

fn y(nvars: usize, pair: usize) -> Polynomial {
    Polynomial::var(nvars, 2 * pair + 1)
}

fn positive(name: &str, v: u32) -> Result<(), ConstructionError> {
    if v == 0 {
        Err(ConstructionError::InvalidParameter(format!("{name} must be a positive integer")))
    } else {
        Ok(())
    }
}

/// `Σ (x_k² − y_k²)` over pairs `first..first + count`.
pub fn t1(nvars: usize, first: usize, count: usize) -> Polynomial {
    (first..first + count).fold(Polynomial::zero(nvars), |acc, k| {
        acc + x(nvars, k).pow(2) - y(nvars, k).pow(2)
    })
}

/// `Σ 2 x_k y_k` over pairs `first..first + count`.
pub fn t2(nvars: usize, first: usize, count: usize) -> Polynomial {
    (first..first + count).fold(Polynomial::zero(nvars), |acc, k| {
        acc + (x(nvars, k) * y(nvars, k)).scale(&rat(2))
    })
}

/// Real and imaginary parts of `(a + i b)^n` by binomial expansion.
pub fn re_im_complex_power(a: &Polynomial, b: &Polynomial, n: u32) -> (Polynomial, Polynomial) {
    let nvars = a.nvars();
    let mut a_pows = vec![Polynomial::from_int(nvars, 1)];
    let mut b_pows = vec![Polynomial::from_int(nvars, 1)];
    for k in 1..=n as usize {
        a_pows.push(&a_pows[k - 1] * a);
        b_pows.push(&b_pows[k - 1] * b);
    }
    let mut re = Polynomial::zero(nvars);
    let mut im = Polynomial::zero(nvars);
    let mut binom = BigInt::from(1);
    for j in 0..=n as usize {
        let term = (&a_pows[n as usize - j] * &b_pows[j]).scale(&Rational::from_integer(binom.clone()));
        // i^j cycles through 1, i, −1, −i.
        match j % 4 {
            0 => re = re + term,
            1 => im = im + term,
            2 => re = re - term,
            _ => im = im - term,
        }
        binom = binom * BigInt::from(n as usize - j) / BigInt::from(j + 1);
    }
    (re, im)
}

/// `tan(N·arctan t)` as `(numerator, denominator)`, univariate in `t`:
/// `Im((1+it)^N) / Re((1+it)^N)`.
pub fn tan_multiple_rational(n: u32) -> Result<(Polynomial, Polynomial), ConstructionError> {
    positive("N", n)?;
    let (re, im) = re_im_complex_power(&Polynomial::from_int(1, 1), &Polynomial::var(1, 0), n);
    Ok((im, re))
}

/// Cone over the Clifford torus as it arises from the planar helicoid:
/// `x1·y2 − y1·x2` in R⁴.
pub fn clifford_cone() -> Polynomial {
    x(4, 0) * y(4, 1) - y(4, 0) * x(4, 1)
}

/// `‖X‖² − ‖Y‖²` on `n` interleaved pairs.
pub fn clifford_quadric(n: u32) -> Result<Polynomial, ConstructionError> {
    positive("n", n)?;
    Ok(t1(2 * n as usize, 0, n as usize))
}

/// `y2·Re((x1+iy1)^N) − x2·Im((x1+iy1)^N)` in R⁴, homogeneous of degree N+1.
pub fn lawson_cone_r4(n: u32) -> Result<Polynomial, ConstructionError> {
    positive("N", n)?;
    let (re, im) = re_im_complex_power(&x(4, 0), &y(4, 0), n);
    Ok(y(4, 1) * re - x(4, 1) * im)
}

/// `y_{n+1}·T1 − x_{n+1}·T2` in R^{2n+2}.
pub fn tkachev_cubic(n: u32) -> Result<Polynomial, ConstructionError> {
    tkachev_power_cone(n, 1)
}

/// `y_{n+1}·Re((T1+iT2)^N) − x_{n+1}·Im((T1+iT2)^N)` in R^{2n+2},
/// homogeneous of degree 2N+1.
pub fn tkachev_power_cone(n: u32, order: u32) -> Result<Polynomial, ConstructionError> {
    positive("n", n)?;
    positive("N", order)?;
    let n = n as usize;
    let nvars = 2 * n + 2;
    let (re, im) = re_im_complex_power(&t1(nvars, 0, n), &t2(nvars, 0, n), order);
    Ok(y(nvars, n) * re - x(nvars, n) * im)
}

/// `y_{2n+1}(T1S1 − T2S2) − x_{2n+1}(T2S1 + T1S2)` in R^{4n+2}, with T on the
/// first n pairs and S on the next n.
pub fn quintic_cone_4n2(n: u32) -> Result<Polynomial, ConstructionError> {
    positive("n", n)?;
    let n = n as usize;
    let nvars = 4 * n + 2;
    let (ta, tb) = (t1(nvars, 0, n), t2(nvars, 0, n));
    let (sa, sb) = (t1(nvars, n, n), t2(nvars, n, n));
    let re = &ta * &sa - &tb * &sb;
    let im = &tb * &sa + &ta * &sb;
    Ok(y(nvars, 2 * n) * re - x(nvars, 2 * n) * im)
}

/// `Im Π_j (x_j + i y_j)^{k_j}` in R^{2n}; requires `gcd(k) = 1`.
pub fn product_arg_cone(k: &[u32]) -> Result<Polynomial, ConstructionError> {
    if k.is_empty() {
        return Err(ConstructionError::InvalidParameter("k must be non-empty".into()));
    }
    for &kj in k {
        positive("every k_j", kj)?;
    }
    let g = k.iter().fold(0u32, |g, &kj| g.gcd(&kj));
    if g != 1 {
        return Err(ConstructionError::GcdViolation { k: k.to_vec(), gcd: g });
    }
    let nvars = 2 * k.len();
    let mut re = Polynomial::from_int(nvars, 1);
    let mut im = Polynomial::zero(nvars);
    for (j, &kj) in k.iter().enumerate() {
        let (fr, fi) = re_im_complex_power(&x(nvars, j), &y(nvars, j), kj);
        let next_re = &re * &fr - &im * &fi;
        im = &re * &fi + &im * &fr;
        re = next_re;
    }
    Ok(im)
}
