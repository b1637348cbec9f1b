//! Tensor-product Gauss-Legendre quadrature over axis-aligned boxes.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Axis-aligned box, also used as support bounding box.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxDomain {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl BoxDomain {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Self {
        assert_eq!(lo.len(), hi.len());
        assert!(lo.iter().zip(&hi).all(|(a, b)| a <= b), "degenerate box");
        BoxDomain { lo, hi }
    }

    pub fn cube(dim: usize, half_width: f64) -> Self {
        BoxDomain {
            lo: vec![-half_width; dim],
            hi: vec![half_width; dim],
        }
    }

    pub fn centered(center: &[f64], half_width: f64) -> Self {
        BoxDomain {
            lo: center.iter().map(|c| c - half_width).collect(),
            hi: center.iter().map(|c| c + half_width).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo.iter().zip(&self.hi).any(|(a, b)| a >= b)
    }

    pub fn volume(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(a, b)| b - a).product()
    }

    pub fn inflate(&self, margin: f64) -> BoxDomain {
        BoxDomain {
            lo: self.lo.iter().map(|a| a - margin).collect(),
            hi: self.hi.iter().map(|b| b + margin).collect(),
        }
    }

    /// Minkowski sum of boxes.
    pub fn sum(&self, other: &BoxDomain) -> BoxDomain {
        BoxDomain {
            lo: self.lo.iter().zip(&other.lo).map(|(a, b)| a + b).collect(),
            hi: self.hi.iter().zip(&other.hi).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn union(&self, other: &BoxDomain) -> BoxDomain {
        BoxDomain {
            lo: self
                .lo
                .iter()
                .zip(&other.lo)
                .map(|(a, b)| a.min(*b))
                .collect(),
            hi: self
                .hi
                .iter()
                .zip(&other.hi)
                .map(|(a, b)| a.max(*b))
                .collect(),
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(v, (a, b))| *v >= *a && *v <= *b)
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1);
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        // Chebyshev-based initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=n {
        let pj = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
        p0 = p1;
        p1 = pj;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Tensor-product rule over a box; nodes stored flat with stride `dim`.
pub struct TensorRule {
    dim: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl TensorRule {
    pub fn new(domain: &BoxDomain, order: usize) -> Self {
        let dim = domain.dim();
        let (x1, w1) = gauss_legendre(order);
        let count = order.pow(dim as u32);
        let mut nodes = Vec::with_capacity(count * dim);
        let mut weights = Vec::with_capacity(count);
        let mut idx = vec![0usize; dim];
        loop {
            let mut weight = 1.0;
            for (d, &i) in idx.iter().enumerate() {
                let a = domain.lo[d];
                let b = domain.hi[d];
                nodes.push(0.5 * (a + b) + 0.5 * (b - a) * x1[i]);
                weight *= 0.5 * (b - a) * w1[i];
            }
            weights.push(weight);
            // advance multi-index
            let mut d = 0;
            loop {
                if d == dim {
                    return TensorRule {
                        dim,
                        nodes,
                        weights,
                    };
                }
                idx[d] += 1;
                if idx[d] < order {
                    break;
                }
                idx[d] = 0;
                d += 1;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[f64], f64)> {
        self.nodes
            .chunks_exact(self.dim)
            .zip(self.weights.iter().copied())
    }

    pub fn integrate_complex<F: FnMut(&[f64]) -> Complex64>(&self, mut f: F) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (node, w) in self.iter() {
            acc += f(node) * w;
        }
        acc
    }

    pub fn integrate_real<F: FnMut(&[f64]) -> f64>(&self, mut f: F) -> f64 {
        let mut acc = 0.0;
        for (node, w) in self.iter() {
            acc += f(node) * w;
        }
        acc
    }
}

/// Quadrature of `phi * density` over a box with a crude error estimate:
/// the difference between the requested order and half the order.
pub fn integrate_with_error<F>(domain: &BoxDomain, order: usize, f: F) -> (Complex64, f64)
where
    F: Fn(&[f64]) -> Complex64,
{
    assert!(!domain.is_degenerate(), "degenerate integration domain");
    let full = TensorRule::new(domain, order).integrate_complex(&f);
    let coarse_order = (order / 2).max(1);
    let coarse = TensorRule::new(domain, coarse_order).integrate_complex(&f);
    (full, (full - coarse).norm())
}
