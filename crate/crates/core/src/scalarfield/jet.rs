/// Value, gradient and Hessian of a scalar function at one point.
///
/// The Hessian is stored row-major and kept exactly symmetric: every
/// operation computes the upper triangle and mirrors it.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet2 {
    n: usize,
    value: f64,
    grad: Vec<f64>,
    hess: Vec<f64>,
}

impl Jet2 {
    pub fn constant(n: usize, value: f64) -> Self {
        Jet2 { n, value, grad: vec![0.0; n], hess: vec![0.0; n * n] }
    }

    /// Seed for the coordinate `z_index` with value `value`.
    pub fn variable(n: usize, index: usize, value: f64) -> Self {
        let mut j = Self::constant(n, value);
        j.grad[index] = 1.0;
        j
    }

    pub(crate) fn from_parts(n: usize, value: f64, grad: Vec<f64>, mut hess: Vec<f64>) -> Self {
        debug_assert_eq!(grad.len(), n);
        debug_assert_eq!(hess.len(), n * n);
        for i in 0..n {
            for j in 0..i {
                hess[i * n + j] = hess[j * n + i];
            }
        }
        Jet2 { n, value, grad, hess }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn gradient(&self) -> &[f64] {
        &self.grad
    }

    pub fn hessian(&self, i: usize, j: usize) -> f64 {
        self.hess[i * self.n + j]
    }

    /// Row-major `n × n` Hessian.
    pub fn hessian_flat(&self) -> &[f64] {
        &self.hess
    }

    pub fn gradient_norm_sq(&self) -> f64 {
        self.grad.iter().map(|g| g * g).sum()
    }

    /// Frobenius norm of the Hessian.
    pub fn hessian_norm(&self) -> f64 {
        self.hess.iter().map(|h| h * h).sum::<f64>().sqrt()
    }

    pub fn add(&self, other: &Jet2) -> Jet2 {
        Jet2 {
            n: self.n,
            value: self.value + other.value,
            grad: self.grad.iter().zip(&other.grad).map(|(a, b)| a + b).collect(),
            hess: self.hess.iter().zip(&other.hess).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn add_assign(&mut self, other: &Jet2) {
        self.value += other.value;
        for (a, b) in self.grad.iter_mut().zip(&other.grad) {
            *a += b;
        }
        for (a, b) in self.hess.iter_mut().zip(&other.hess) {
            *a += b;
        }
    }

    pub fn scale(&self, c: f64) -> Jet2 {
        Jet2 {
            n: self.n,
            value: c * self.value,
            grad: self.grad.iter().map(|g| c * g).collect(),
            hess: self.hess.iter().map(|h| c * h).collect(),
        }
    }

    pub fn mul(&self, other: &Jet2) -> Jet2 {
        let n = self.n;
        let (u, v) = (self.value, other.value);
        let grad = self
            .grad
            .iter()
            .zip(&other.grad)
            .map(|(gu, gv)| u * gv + v * gu)
            .collect();
        let mut hess = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let k = i * n + j;
                hess[k] = u * other.hess[k]
                    + v * self.hess[k]
                    + self.grad[i] * other.grad[j]
                    + other.grad[i] * self.grad[j];
            }
        }
        Jet2::from_parts(n, u * v, grad, hess)
    }

    /// Composition `g ∘ self` given `g(u)`, `g'(u)`, `g''(u)` at `u = self.value`.
    pub fn chain(&self, g: f64, dg: f64, d2g: f64) -> Jet2 {
        let n = self.n;
        let grad = self.grad.iter().map(|x| dg * x).collect();
        let mut hess = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let k = i * n + j;
                hess[k] = dg * self.hess[k] + d2g * self.grad[i] * self.grad[j];
            }
        }
        Jet2::from_parts(n, g, grad, hess)
    }
}
