//! de Sitter hyperboloid in global coordinates.
//!
//! The 2+1 dimensional de Sitter space is the one-sheeted hyperboloid
//! `X·X = -α²` in 3+1 Minkowski space with signature `(+,-,-,-)`. Points are
//! addressed by the chart `(t, θ, φ)`:
//!
//! ```text
//! X⁰ = α sinh(t/α)
//! X¹ = α cosh(t/α) sin θ cos φ
//! X² = α cosh(t/α) sin θ sin φ
//! X³ = α cosh(t/α) cos θ
//! ```
//!
//! Units are `ħ = 1`; the field mass enters only through the dimensionless
//! parameter `M = αμ`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Bargmann classification of the one-particle representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Series {
    /// `M > 1`, complex degree `ν = -1/2 ± i√(M²-1)`.
    Principal,
    /// `0 < M < 1`, real degree.
    Complementary,
}

/// Which root of `ν(ν+1) = 3/4 - M²` is used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
pub enum NuBranch {
    /// `ν = -1/2 + √(1-M²)` (the default).
    #[default]
    Plus,
    /// `ν = -1/2 - √(1-M²)`.
    Minus,
}

/// Physical configuration: de Sitter radius, mass parameter and the derived
/// Legendre degree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeSitterParams {
    alpha: f64,
    mass: f64,
    nu: Complex64,
    series: Series,
    branch: NuBranch,
}

impl DeSitterParams {
    /// Parameters with the default `ν` branch.
    pub fn new(alpha: f64, mass: f64) -> Result<Self> {
        Self::with_branch(alpha, mass, NuBranch::Plus)
    }

    pub fn with_branch(alpha: f64, mass: f64, branch: NuBranch) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
        }
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::InvalidParameter(format!("M must be positive, got {mass}")));
        }
        if mass == 1.0 {
            return Err(Error::ExcludedMass);
        }
        let sign = match branch {
            NuBranch::Plus => 1.0,
            NuBranch::Minus => -1.0,
        };
        let (nu, series) = if mass < 1.0 {
            (Complex64::new(-0.5 + sign * (1.0 - mass * mass).sqrt(), 0.0), Series::Complementary)
        } else {
            (Complex64::new(-0.5, sign * (mass * mass - 1.0).sqrt()), Series::Principal)
        };
        Ok(Self { alpha, mass, nu, series, branch })
    }

    /// Builds the parameters from a particle mass `m_p` and curvature coupling
    /// `ξ`, using `μ² = m_p² + ξR` with scalar curvature `R = 6/α²`.
    pub fn from_particle(m_p: f64, xi: f64, alpha: f64) -> Result<Self> {
        let mu2 = m_p * m_p + xi * 6.0 / (alpha * alpha);
        if !(mu2 > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "effective mass squared must be positive, got {mu2}"
            )));
        }
        Self::new(alpha, alpha * mu2.sqrt())
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Dimensionless mass `M = αμ`.
    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Field mass `μ = M/α`.
    pub fn mu(&self) -> f64 {
        self.mass / self.alpha
    }

    pub fn nu(&self) -> Complex64 {
        self.nu
    }

    pub fn series(&self) -> Series {
        self.series
    }

    pub fn branch(&self) -> NuBranch {
        self.branch
    }

    /// Casimir eigenvalue `q = 3/4 - ν(ν+1) = M²`.
    pub fn casimir_q(&self) -> f64 {
        0.75 - (self.nu * (self.nu + 1.0)).re
    }
}

/// A point of the chart `(t, θ, φ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacetimePoint {
    pub t: f64,
    pub theta: f64,
    pub phi: f64,
}

impl SpacetimePoint {
    pub fn new(t: f64, theta: f64, phi: f64) -> Self {
        Self { t, theta, phi }
    }
}

/// Minkowski product with signature `(+,-,-,-)`.
pub fn minkowski_dot(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3]
}

/// Embedding coordinates `(X⁰, X¹, X², X³)` of a chart point.
pub fn embed(params: &DeSitterParams, p: &SpacetimePoint) -> [f64; 4] {
    let a = params.alpha;
    let s = p.t / a;
    let r = a * s.cosh();
    let (st, ct) = p.theta.sin_cos();
    let (sp, cp) = p.phi.sin_cos();
    [a * s.sinh(), r * st * cp, r * st * sp, r * ct]
}

/// Radius of the spatial slice, `a(t) = α cosh(t/α)`.
pub fn scale_factor(params: &DeSitterParams, t: f64) -> f64 {
    params.alpha * (t / params.alpha).cosh()
}

/// Columns `∂X/∂t`, `∂X/∂θ`, `∂X/∂φ`, each a 4-vector.
pub fn embedding_jacobian(params: &DeSitterParams, p: &SpacetimePoint) -> [[f64; 4]; 3] {
    let a = params.alpha;
    let s = p.t / a;
    let (sh, ch) = (s.sinh(), s.cosh());
    let (st, ct) = p.theta.sin_cos();
    let (sp, cp) = p.phi.sin_cos();
    [
        [ch, sh * st * cp, sh * st * sp, sh * ct],
        [0.0, a * ch * ct * cp, a * ch * ct * sp, -a * ch * st],
        [0.0, -a * ch * st * sp, a * ch * st * cp, 0.0],
    ]
}

/// Induced metric `g_ij = η(∂_i X, ∂_j X)` in the chart, reconstructed from
/// central differences of [`embed`].
pub fn metric_fd(params: &DeSitterParams, p: &SpacetimePoint, h: f64) -> [[f64; 3]; 3] {
    let shift = |k: usize, d: f64| {
        let mut q = *p;
        match k {
            0 => q.t += d,
            1 => q.theta += d,
            _ => q.phi += d,
        }
        embed(params, &q)
    };
    let cols: Vec<[f64; 4]> = (0..3)
        .map(|k| {
            let (p2, p1, m1, m2) = (shift(k, 2.0 * h), shift(k, h), shift(k, -h), shift(k, -2.0 * h));
            let mut d = [0.0; 4];
            for a in 0..4 {
                d[a] = (-p2[a] + 8.0 * p1[a] - 8.0 * m1[a] + m2[a]) / (12.0 * h);
            }
            d
        })
        .collect();
    let mut g = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            g[i][j] = minkowski_dot(&cols[i], &cols[j]);
        }
    }
    g
}

/// Step sizes for the finite-difference stencils in chart coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdSteps {
    pub t: f64,
    pub theta: f64,
    pub phi: f64,
}

impl FdSteps {
    pub fn uniform(h: f64) -> Self {
        Self { t: h, theta: h, phi: h }
    }

    /// `h_t = 1e-3·α`, `h_θ = h_φ = 1e-3`.
    pub fn default_for(params: &DeSitterParams) -> Self {
        Self { t: 1e-3 * params.alpha, theta: 1e-3, phi: 1e-3 }
    }
}

/// Five-point first and second central differences along one chart
/// direction. Returns `(f', f'')`.
pub(crate) fn five_point<F>(f: &F, h: f64) -> Result<(Complex64, Complex64)>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let (fp2, fp1, f0, fm1, fm2) = (f(2.0 * h)?, f(h)?, f(0.0)?, f(-h)?, f(-2.0 * h)?);
    let d1 = (-fp2 + fp1 * 8.0 - fm1 * 8.0 + fm2) / (12.0 * h);
    let d2 = (-fp2 + fp1 * 16.0 - f0 * 30.0 + fm1 * 16.0 - fm2) / (12.0 * h * h);
    Ok((d1, d2))
}

/// Five-point estimate of `(□ + μ²) f` at `p`.
///
/// Truncation error is `O(h⁴)` per direction. Points within `4h_θ` of a pole
/// are rejected because of the `1/sin θ` terms.
pub fn kg_operator_fd<F>(
    params: &DeSitterParams,
    f: F,
    p: &SpacetimePoint,
    h: &FdSteps,
) -> Result<Complex64>
where
    F: Fn(&SpacetimePoint) -> Result<Complex64>,
{
    if p.theta < 4.0 * h.theta || std::f64::consts::PI - p.theta < 4.0 * h.theta {
        return Err(Error::PoleProximity { theta: p.theta });
    }
    let a = params.alpha;
    let (dt, dtt) = five_point(&|d| f(&SpacetimePoint { t: p.t + d, ..*p }), h.t)?;
    let (dth, dthth) = five_point(&|d| f(&SpacetimePoint { theta: p.theta + d, ..*p }), h.theta)?;
    let (_, dphph) = five_point(&|d| f(&SpacetimePoint { phi: p.phi + d, ..*p }), h.phi)?;
    let f0 = f(p)?;

    let s = p.t / a;
    let (st, ct) = p.theta.sin_cos();
    let angular = dthth + dth * (ct / st) + dphph / (st * st);
    let boxf = dtt + dt * (2.0 / a * s.tanh()) - angular / (a * a * s.cosh().powi(2));
    Ok(boxf + f0 * params.mu().powi(2))
}
