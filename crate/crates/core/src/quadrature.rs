//! Gauss–Hermite rules for the heat kernel (4πr)^{−1/2} e^{−t²/4r}.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

pub const MIN_NODES: usize = 16;

/// Nodes and weights for ∫ e^{−x²} g(x) dx.
#[derive(Clone, Debug, PartialEq)]
pub struct HermiteRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Orthonormal Hermite polynomials p̃₀..p̃_n at x (weight e^{−x²}).
fn hermite_orthonormal(n: usize, x: f64) -> Vec<f64> {
    let mut p = Vec::with_capacity(n + 1);
    p.push(std::f64::consts::PI.powf(-0.25));
    if n >= 1 {
        p.push(x * 2f64.sqrt() * p[0]);
    }
    for k in 1..n {
        let next = x * (2.0 / (k + 1) as f64).sqrt() * p[k] - (k as f64 / (k + 1) as f64).sqrt() * p[k - 1];
        p.push(next);
    }
    p
}

impl HermiteRule {
    /// Golub–Welsch eigenvalues, polished by Newton steps on p̃_n, with
    /// Christoffel weights 1/Σ_{k<n} p̃_k(x)².
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("rule needs at least one node".into()));
        }
        let jac = DMatrix::from_fn(n, n, |i, j| {
            if i + 1 == j || j + 1 == i {
                ((i.max(j)) as f64 / 2.0).sqrt()
            } else {
                0.0
            }
        });
        let mut nodes: Vec<f64> = SymmetricEigen::new(jac).eigenvalues.iter().copied().collect();
        nodes.sort_by(f64::total_cmp);
        for x in nodes.iter_mut() {
            for _ in 0..3 {
                let p = hermite_orthonormal(n, *x);
                let dp = (2.0 * n as f64).sqrt() * p[n - 1];
                if dp == 0.0 {
                    break;
                }
                *x -= p[n] / dp;
            }
        }
        // Enforce exact symmetry of the rule about zero.
        for i in 0..n / 2 {
            let s = 0.5 * (nodes[n - 1 - i] - nodes[i]);
            nodes[i] = -s;
            nodes[n - 1 - i] = s;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        let weights = nodes
            .iter()
            .map(|&x| 1.0 / hermite_orthonormal(n - 1, x).iter().map(|p| p * p).sum::<f64>())
            .collect();
        Ok(Self { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// The rule for the probability kernel (4πr)^{−1/2}e^{−t²/4r} dt via t = 2√r·x.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    hermite: HermiteRule,
}

impl QuadratureRule {
    pub fn new(q: usize) -> Result<Self> {
        if q < MIN_NODES {
            return Err(Error::InvalidArgument(format!("quadrature needs Q ≥ {MIN_NODES}, got {q}")));
        }
        Ok(Self { hermite: HermiteRule::new(q)? })
    }

    pub fn q(&self) -> usize {
        self.hermite.len()
    }

    /// (t_j, ω_j) with Σω_j = 1.
    pub fn scaled(&self, r: f64) -> Vec<(f64, f64)> {
        let s = 2.0 * r.sqrt();
        let norm = std::f64::consts::PI.sqrt();
        self.hermite.nodes.iter().zip(&self.hermite.weights).map(|(x, w)| (s * x, w / norm)).collect()
    }

    /// ∫ g(t) (4πr)^{−1/2}e^{−t²/4r} dt.
    pub fn integrate(&self, r: f64, g: impl Fn(f64) -> f64) -> f64 {
        pairwise_sum(&self.scaled(r).iter().map(|&(t, w)| w * g(t)).collect::<Vec<_>>())
    }
}

/// Recursive pairwise summation, fixed order.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// (4πr)^{−1/2}∫e^{−t²/4r} t^{2n} dt = 2(2n−1)!/(n−1)!·rⁿ (1 for n = 0).
pub fn gaussian_even_moment(n: u32, r: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let num: f64 = (1..2 * n).map(|k| k as f64).product();
    let den: f64 = (1..n).map(|k| k as f64).product();
    2.0 * num / den * r.powi(n as i32)
}
