//! Product quadrature on the unit sphere.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::specfun::harmonics::{sph_harm_table, table_len};

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..(n + 1) / 2 {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 1..n {
                let kf = k as f64;
                let p2 = ((2.0 * kf + 1.0) * z * p1 - kf * p0) / (kf + 1.0);
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else { p1 };
            let pn1 = if n <= 1 { 1.0 } else { p0 };
            dp = nf * (z * pn - pn1) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// One quadrature node on the sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereNode {
    pub theta: f64,
    pub phi: f64,
    pub weight: f64,
}

/// Gauss–Legendre in `cos θ` times the uniform rule in `φ`.
///
/// Integrates `Y_l^m* Y_p^s` exactly when `l + p ≤ 2 n_theta - 1` and
/// `|m - s| < n_phi`.
#[derive(Debug, Clone)]
pub struct SphereGrid {
    n_theta: usize,
    n_phi: usize,
    nodes: Vec<SphereNode>,
}

impl SphereGrid {
    pub fn new(n_theta: usize, n_phi: usize) -> Result<Self> {
        if n_theta == 0 || n_phi == 0 {
            return Err(Error::InvalidParameter(format!(
                "grid needs at least one node per direction, got {n_theta}x{n_phi}"
            )));
        }
        let (x, w) = gauss_legendre(n_theta);
        let dphi = 2.0 * PI / n_phi as f64;
        let mut nodes = Vec::with_capacity(n_theta * n_phi);
        for (xi, wi) in x.iter().zip(&w) {
            let theta = xi.clamp(-1.0, 1.0).acos();
            for j in 0..n_phi {
                nodes.push(SphereNode { theta, phi: j as f64 * dphi, weight: wi * dphi });
            }
        }
        Ok(Self { n_theta, n_phi, nodes })
    }

    /// The default 64 × 128 grid.
    pub fn standard() -> Self {
        Self::new(64, 128).expect("nonempty grid")
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn n_phi(&self) -> usize {
        self.n_phi
    }

    pub fn nodes(&self) -> &[SphereNode] {
        &self.nodes
    }

    /// Largest `l` such that products of harmonics up to degree `l` are
    /// integrated exactly.
    pub fn exact_degree(&self) -> usize {
        (2 * self.n_theta - 1).min(self.n_phi.saturating_sub(1)) / 2
    }

    pub fn total_weight(&self) -> f64 {
        self.nodes.iter().map(|n| n.weight).sum()
    }

    /// `Y_l^m` at every node, node-major, each row indexed by
    /// [`lm_index`](crate::specfun::harmonics::lm_index).
    pub fn harmonics(&self, l_max: usize) -> Vec<Vec<Complex64>> {
        self.nodes.iter().map(|n| sph_harm_table(l_max, n.theta, n.phi)).collect()
    }

    /// `∫ f dΩ` for samples `f` given node by node.
    pub fn integrate(&self, values: &[Complex64]) -> Complex64 {
        self.nodes.iter().zip(values).map(|(n, v)| v * n.weight).sum()
    }

    /// Projections `∫ Y_l^m* f dΩ` for all `l ≤ l_max`.
    pub fn project(&self, values: &[Complex64], l_max: usize) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); table_len(l_max)];
        for (n, v) in self.nodes.iter().zip(values) {
            let y = sph_harm_table(l_max, n.theta, n.phi);
            let fv = v * n.weight;
            for (o, yk) in out.iter_mut().zip(&y) {
                *o += yk.conj() * fv;
            }
        }
        out
    }
}
