//! Gauss–Legendre nodes and weights at any [`Real`] precision.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// An `m`-point rule on `[-1, 1]`, exact for polynomials of degree `2m - 1`.
#[derive(Debug, Clone)]
pub struct GaussLegendre<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

/// `(P_m(x), P_m'(x))` via the three-term recurrence.
fn legendre_with_derivative<T: Real>(m: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    for k in 2..=m {
        let kk = T::of_int(k as i64);
        let p2 = ((kk + kk - T::one()) * x * p1 - (kk - T::one()) * p0) / kk;
        p0 = p1;
        p1 = p2;
    }
    let mm = T::of_int(m as i64);
    let dp = mm * (x * p1 - p0) / (x * x - T::one());
    (p1, dp)
}

impl<T: Real> GaussLegendre<T> {
    pub fn new(m: usize) -> Result<Self> {
        if m < 1 {
            return Err(Error::domain("a Gauss–Legendre rule needs at least one node"));
        }
        let mut nodes = vec![T::zero(); m];
        let mut weights = vec![T::zero(); m];
        let tol = T::of(4.0 * T::unit_roundoff());
        for i in 0..m.div_ceil(2) {
            let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
            let mut x = T::of(guess);
            let mut dp = T::one();
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(m, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= tol {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(m, x);
            if d.is_finite() {
                dp = d;
            }
            let w = T::of(2.0) / ((T::one() - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[m - 1 - i] = x;
            weights[i] = w;
            weights[m - 1 - i] = w;
        }
        if m % 2 == 1 {
            nodes[m / 2] = T::zero();
        }
        Ok(GaussLegendre { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// `∫_a^b f` approximated by the rule mapped onto `[a, b]`.
    pub fn integrate<F: FnMut(T) -> T>(&self, a: T, b: T, mut f: F) -> T {
        let half = (b - a) / T::of(2.0);
        let mid = (a + b) / T::of(2.0);
        let mut acc = T::zero();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += *w * f(mid + half * *x);
        }
        acc * half
    }
}
