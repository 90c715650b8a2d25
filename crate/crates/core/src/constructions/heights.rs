//! Transcendental height functions and the level-set splittings built from them.

use super::cones::{t1, t2};
use super::ConstructionError;
use crate::exactpoly::Rational;
use crate::scalarfield::ScalarField;

/// `arctan(y1/x1)` on R², defined off `{x1 = 0}`.
pub fn helicoid_height() -> ScalarField {
    ScalarField::variable(2, 1)
        .div(ScalarField::variable(2, 0))
        .atan()
}

/// `arctan(V/U)` on R^{2n} with `U = ‖X‖² − ‖Y‖²` and `V = 2⟨X, Y⟩`
/// over interleaved pairs.
pub fn pair_angle(n: u32) -> Result<ScalarField, ConstructionError> {
    if n == 0 {
        return Err(ConstructionError::InvalidParameter("n must be a positive integer".into()));
    }
    let n = n as usize;
    let u = ScalarField::from_poly(&t1(2 * n, 0, n));
    let v = ScalarField::from_poly(&t2(2 * n, 0, n));
    Ok(v.div(u).atan())
}

/// The CH height `½ arctan(V/U)` on R^{2n}.
pub fn ch_height(n: u32) -> Result<ScalarField, ConstructionError> {
    let angle = pair_angle(n)?;
    let half = ScalarField::exact_constant(angle.nvars(), Rational::new(1.into(), 2.into()));
    Ok(half * angle)
}

/// One summand of a superposition: `field` reads the ambient coordinates
/// `offset..offset + field.nvars()`.
#[derive(Clone, Debug)]
pub struct SuperposeBlock {
    pub field: ScalarField,
    pub offset: usize,
    pub weight: f64,
}

impl SuperposeBlock {
    pub fn new(field: ScalarField, offset: usize, weight: f64) -> Self {
        SuperposeBlock { field, offset, weight }
    }

    pub fn range(&self) -> std::ops::Range<usize> {
        self.offset..self.offset + self.field.nvars()
    }
}

/// `Σ μᵢ^{1/3} Fᵢ` over disjoint variable blocks, with the real cube root
/// for negative weights. Then `Δ∞` of the sum is `Σ μᵢ Δ∞Fᵢ`.
pub fn superpose(blocks: &[SuperposeBlock]) -> Result<ScalarField, ConstructionError> {
    if blocks.is_empty() {
        return Err(ConstructionError::InvalidParameter("no blocks to superpose".into()));
    }
    for (i, a) in blocks.iter().enumerate() {
        for b in &blocks[i + 1..] {
            let (ra, rb) = (a.range(), b.range());
            if ra.start < rb.end && rb.start < ra.end {
                return Err(ConstructionError::OverlappingBlocks { first: ra, second: rb });
            }
        }
    }
    let nvars = blocks.iter().map(|b| b.range().end).max().unwrap_or(0);
    let mut total: Option<ScalarField> = None;
    for b in blocks {
        let term = b.field.embed(b.offset, nvars).scale(b.weight.cbrt());
        total = Some(match total {
            None => term,
            Some(t) => t + term,
        });
    }
    Ok(total.expect("non-empty"))
}

/// `Σ cⱼ Fⱼ` where block `j` is the CH height on `sizes[j]` pairs (the
/// planar helicoid when the size is 1). The graph is invariant under
/// rotating block `j` by `t` while translating the height by `cⱼ t`.
pub fn multi_screw_height(sizes: &[u32], coefficients: &[f64]) -> Result<ScalarField, ConstructionError> {
    if sizes.len() != coefficients.len() {
        return Err(ConstructionError::InvalidParameter(format!(
            "{} blocks but {} coefficients",
            sizes.len(),
            coefficients.len()
        )));
    }
    let mut offset = 0;
    let mut blocks = Vec::with_capacity(sizes.len());
    for (&size, &c) in sizes.iter().zip(coefficients) {
        let field = match size {
            1 => helicoid_height(),
            n => ch_height(n)?,
        };
        let nv = field.nvars();
        // superpose applies a cube root, so pass c³ to get coefficient c.
        blocks.push(SuperposeBlock::new(field, offset, c * c * c));
        offset += nv;
    }
    superpose(&blocks)
}

/// `U = −z_{n+1} + f`: the graph of `f` as a zero set in one more dimension.
/// The new coordinate is the last index.
pub fn graph_split(f: &ScalarField) -> ScalarField {
    let n = f.nvars();
    f.embed(0, n + 1) - ScalarField::variable(n + 1, n)
}

/// `V = −arctan(z_{n+1}/z₀) + f` on n+2 coordinates. `z₀` sits at index `n`
/// and `z_{n+1}` at index `n + 1`, so for `f` on interleaved pairs the zero
/// set is the graph `y_{m+1} = x_{m+1}·tan f`.
pub fn arctan_split(f: &ScalarField) -> ScalarField {
    let n = f.nvars();
    let angle = ScalarField::variable(n + 2, n + 1)
        .div(ScalarField::variable(n + 2, n))
        .atan();
    f.embed(0, n + 2) - angle
}

/// Height `z₀·tan f` of the graph `z_{n+1} = z₀ tan f`, with `z₀` at index `n`.
pub fn tan_graph_height(f: &ScalarField) -> ScalarField {
    let n = f.nvars();
    ScalarField::variable(n + 1, n) * f.embed(0, n + 1).tan()
}

/// `(x, y)` index pairs of `count` interleaved coordinate planes starting at
/// pair `first`, as used by the screw-motion generator.
pub fn rotational_pairs(first: usize, count: usize) -> Vec<(usize, usize)> {
    (first..first + count).map(|j| (2 * j, 2 * j + 1)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffops::{inf_laplacian_at, laplacian_at};
    use crate::scalarfield::{DomainGuard, FieldError};
    use std::f64::consts::FRAC_PI_4;

    fn g() -> DomainGuard {
        DomainGuard::default()
    }

    #[test]
    fn helicoid_values() {
        let f = helicoid_height();
        assert!((f.eval(&[1.0, 1.0], &g()).unwrap() - FRAC_PI_4).abs() < 1e-15);
        let j = f.eval_jet2(&[1.0, 0.0], &g()).unwrap();
        assert_eq!(j.gradient(), [0.0, 1.0]);
    }

    #[test]
    fn ch_height_n1_is_arctan_on_principal_branch() {
        let f = ch_height(1).unwrap();
        let limit = (std::f64::consts::PI / 8.0).tan();
        for k in -9..=9 {
            let t = limit * k as f64 / 10.0;
            assert!((f.eval(&[1.0, t], &g()).unwrap() - t.atan()).abs() < 1e-12);
        }
    }

    #[test]
    fn ch_height_branch_locus_is_out_of_domain() {
        let f = ch_height(2).unwrap();
        // X = (1, 0), Y = (0, 1) in interleaved order (x1, y1, x2, y2).
        let err = f.eval(&[1.0, 0.0, 0.0, 1.0], &g()).unwrap_err();
        assert!(matches!(err, FieldError::OutOfDomain { .. }));
    }

    #[test]
    fn single_unit_block_is_identity() {
        let f = superpose(&[SuperposeBlock::new(helicoid_height(), 0, 1.0)]).unwrap();
        let pt = [0.7, -0.3];
        assert_eq!(f.eval(&pt, &g()).unwrap(), helicoid_height().eval(&pt, &g()).unwrap());
    }

    #[test]
    fn negative_weight_uses_real_cube_root() {
        let f = superpose(&[SuperposeBlock::new(helicoid_height(), 0, -8.0)]).unwrap();
        let pt = [1.0, 1.0];
        assert!((f.eval(&pt, &g()).unwrap() + 2.0 * FRAC_PI_4).abs() < 1e-15);
    }

    #[test]
    fn overlapping_blocks_rejected() {
        let blocks = [
            SuperposeBlock::new(helicoid_height(), 0, 1.0),
            SuperposeBlock::new(helicoid_height(), 1, 1.0),
        ];
        assert!(matches!(
            superpose(&blocks),
            Err(ConstructionError::OverlappingBlocks { .. })
        ));
    }

    #[test]
    fn two_helicoids_stay_inf_harmonic() {
        let f = superpose(&[
            SuperposeBlock::new(helicoid_height(), 0, 1.0),
            SuperposeBlock::new(helicoid_height(), 2, 1.0),
        ])
        .unwrap();
        let pt = [0.4, 1.1, -0.8, 0.3];
        assert!(inf_laplacian_at(&f, &pt).unwrap().abs() < 1e-12);
        assert!(laplacian_at(&f, &pt).unwrap().abs() < 1e-12);
    }

    #[test]
    fn graph_split_of_constant_is_hyperplane() {
        let f = ScalarField::constant(2, 3.0);
        let u = graph_split(&f);
        assert_eq!(u.eval(&[5.0, -1.0, 3.0], &g()).unwrap(), 0.0);
        assert_eq!(u.eval(&[5.0, -1.0, 1.0], &g()).unwrap(), 2.0);
    }

    #[test]
    fn arctan_split_of_helicoid_vanishes_on_clifford_cone() {
        let v = arctan_split(&helicoid_height());
        // x1·y2 = y1·x2 with x1, x2 > 0 on the principal branch.
        let (x1, y1, x2) = (1.3, 0.4, 0.9);
        let y2 = x2 * y1 / x1;
        assert!(v.eval(&[x1, y1, x2, y2], &g()).unwrap().abs() < 1e-15);
    }

    #[test]
    fn multi_screw_checks_arity() {
        assert!(multi_screw_height(&[4, 1], &[1.0]).is_err());
        assert_eq!(multi_screw_height(&[4, 1, 1], &[1.0, 2.0, 3.0]).unwrap().nvars(), 12);
    }
}
