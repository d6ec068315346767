//! Discrete symmetries, Lorentz generators as differential operators, and
//! Casimir checks.
//!
//! Generators act on functions of the embedding coordinates:
//!
//! ```text
//! N_ij = X^j ∂_i - X^i ∂_j      (rotations, i, j ∈ {1,2,3})
//! N_0k = X^k ∂_0 + X^0 ∂_k      (boosts)
//! ```
//!
//! Each is tangent to the hyperboloid, so it is converted to chart
//! components through the embedding Jacobian and applied with five-point
//! differences in `(t, θ, φ)`.

use num_complex::Complex64;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::geometry::{embed, embedding_jacobian, DeSitterParams, SpacetimePoint};
use crate::json;
use crate::modes::{inner_product, Field, ModeBasis, ModeField, Sector, SphereGrid, StateCoefficients};
use crate::specfun::wigner::{wigner_d, EulerAngles};

/// Reflections and time reversal acting on states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Discrete {
    /// `X¹ → -X¹`, i.e. `φ → π - φ`.
    P1,
    /// `X² → -X²`, i.e. `φ → -φ`.
    P2,
    /// `X³ → -X³`, i.e. `θ → π - θ`.
    P3,
    /// Antipodal map on every slice.
    P,
    /// `t → -t` with complex conjugation.
    T,
}

fn parity(k: i64) -> f64 {
    if k.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Coefficient map of a discrete symmetry in the orthonormal harmonic
/// convention.
///
/// * `P1`: `φ'_{l,m} = φ_{l,-m}`
/// * `P2`: `φ'_{l,m} = (-1)^m φ_{l,-m}`
/// * `P3`: `φ'_{l,m} = (-1)^{l+m} φ_{l,m}`
/// * `P`: `φ'_{l,m} = (-1)^l φ_{l,m}`
/// * `T`: `φ'_{l,m} = (-1)^m conj(φ_{l,-m})`, so that the new field is
///   `conj(ψ(-t, θ, φ))`.
pub fn apply_discrete(sym: Discrete, state: &StateCoefficients) -> StateCoefficients {
    let src = state;
    let mut out = StateCoefficients::from_fn(state.l_max(), |l, m| match sym {
        Discrete::P1 => src.get_or_zero(l, -m),
        Discrete::P2 => src.get_or_zero(l, -m) * parity(m),
        Discrete::P3 => src.get_or_zero(l, m) * parity(l as i64 + m),
        Discrete::P => src.get_or_zero(l, m) * parity(l as i64),
        Discrete::T => src.get_or_zero(l, -m).conj() * parity(m),
    });
    if state.is_normalized() {
        out.normalize().expect("symmetries preserve the norm");
    }
    out
}

/// The geometric action of a discrete symmetry on a chart point.
pub fn transform_point(sym: Discrete, p: &SpacetimePoint) -> SpacetimePoint {
    use std::f64::consts::PI;
    match sym {
        Discrete::P1 => SpacetimePoint { phi: PI - p.phi, ..*p },
        Discrete::P2 => SpacetimePoint { phi: -p.phi, ..*p },
        Discrete::P3 => SpacetimePoint { theta: PI - p.theta, ..*p },
        Discrete::P => SpacetimePoint { theta: PI - p.theta, phi: p.phi + PI, ..*p },
        Discrete::T => SpacetimePoint { t: -p.t, ..*p },
    }
}

/// Generators of the de Sitter group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeneratorId {
    N12,
    N23,
    N31,
    N01,
    N02,
    N03,
}

impl GeneratorId {
    pub const ALL: [GeneratorId; 6] =
        [Self::N12, Self::N23, Self::N31, Self::N01, Self::N02, Self::N03];

    pub fn name(&self) -> &'static str {
        match self {
            Self::N12 => "N12",
            Self::N23 => "N23",
            Self::N31 => "N31",
            Self::N01 => "N01",
            Self::N02 => "N02",
            Self::N03 => "N03",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|g| g.name().eq_ignore_ascii_case(s))
    }

    pub fn is_boost(&self) -> bool {
        matches!(self, Self::N01 | Self::N02 | Self::N03)
    }

    /// Embedding components `V^a` of the vector field at `x`.
    pub fn vector(&self, x: &[f64; 4]) -> [f64; 4] {
        let mut v = [0.0; 4];
        let rot = |v: &mut [f64; 4], i: usize, j: usize| {
            v[i] = x[j];
            v[j] = -x[i];
        };
        let boost = |v: &mut [f64; 4], k: usize| {
            v[0] = x[k];
            v[k] = x[0];
        };
        match self {
            Self::N12 => rot(&mut v, 1, 2),
            Self::N23 => rot(&mut v, 2, 3),
            Self::N31 => rot(&mut v, 3, 1),
            Self::N01 => boost(&mut v, 1),
            Self::N02 => boost(&mut v, 2),
            Self::N03 => boost(&mut v, 3),
        }
        v
    }
}

impl std::fmt::Display for GeneratorId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Chart components `(c_t, c_θ, c_φ)` of a generator at `p`, from the normal
/// equations `(JᵀJ) c = JᵀV`.
pub fn chart_components(gen: GeneratorId, params: &DeSitterParams, p: &SpacetimePoint) -> Result<[f64; 3]> {
    let j = embedding_jacobian(params, p);
    let v = gen.vector(&embed(params, p));
    let mut g = [[0.0; 3]; 3];
    let mut rhs = [0.0; 3];
    for a in 0..3 {
        for b in 0..3 {
            g[a][b] = (0..4).map(|k| j[a][k] * j[b][k]).sum();
        }
        rhs[a] = (0..4).map(|k| j[a][k] * v[k]).sum();
    }
    let d = det3(&g);
    let scale = g[0][0] * g[1][1] * g[2][2];
    if !(d.abs() > 1e-14 * scale) {
        return Err(Error::PoleProximity { theta: p.theta });
    }
    let mut c = [0.0; 3];
    for (col, out) in c.iter_mut().enumerate() {
        let mut m = g;
        for row in 0..3 {
            m[row][col] = rhs[row];
        }
        *out = det3(&m) / d;
    }
    Ok(c)
}

fn first_diff<F>(f: &F, h: f64) -> Result<Complex64>
where
    F: Fn(f64) -> Result<Complex64>,
{
    Ok((-f(2.0 * h)? + f(h)? * 8.0 - f(-h)? * 8.0 + f(-2.0 * h)?) / (12.0 * h))
}

/// `gen · f` at `p`, with five-point chart derivatives of step `h`.
pub fn apply_generator_fd<F>(
    gen: GeneratorId,
    params: &DeSitterParams,
    f: &F,
    p: &SpacetimePoint,
    h: f64,
) -> Result<Complex64>
where
    F: Fn(&SpacetimePoint) -> Result<Complex64> + ?Sized,
{
    if p.theta.sin().abs() < 4.0 * h {
        return Err(Error::PoleProximity { theta: p.theta });
    }
    let c = chart_components(gen, params, p)?;
    let mut out = Complex64::new(0.0, 0.0);
    if c[0] != 0.0 {
        out += first_diff(&|d| f(&SpacetimePoint { t: p.t + d * params.alpha(), ..*p }), h)?
            * (c[0] / params.alpha());
    }
    if c[1] != 0.0 {
        out += first_diff(&|d| f(&SpacetimePoint { theta: p.theta + d, ..*p }), h)? * c[1];
    }
    if c[2] != 0.0 {
        out += first_diff(&|d| f(&SpacetimePoint { phi: p.phi + d, ..*p }), h)? * c[2];
    }
    Ok(out)
}

/// `g₁ · (g₂ · f)` at `p` with step `h` at both levels.
pub fn apply_nested_fd<F>(
    outer: GeneratorId,
    inner: GeneratorId,
    params: &DeSitterParams,
    f: &F,
    p: &SpacetimePoint,
    h: f64,
) -> Result<Complex64>
where
    F: Fn(&SpacetimePoint) -> Result<Complex64> + ?Sized,
{
    let g = |q: &SpacetimePoint| apply_generator_fd(inner, params, f, q, h);
    apply_generator_fd(outer, params, &g, p, h)
}

/// `gen · u_{l,m}` as a [`Field`]; its time derivative is a finite
/// difference.
#[derive(Debug, Clone, Copy)]
pub struct GeneratorField<'a> {
    pub gen: GeneratorId,
    pub basis: &'a ModeBasis,
    pub l: usize,
    pub m: i64,
    pub h: f64,
}

impl Field for GeneratorField<'_> {
    fn value(&self, p: &SpacetimePoint) -> Result<Complex64> {
        let f = |q: &SpacetimePoint| self.basis.mode(self.l, self.m, Sector::Positive, q);
        apply_generator_fd(self.gen, self.basis.params(), &f, p, self.h)
    }
}

/// Measured projections of a generator applied to one mode.
#[derive(Debug, Clone)]
pub struct LadderReport {
    pub generator: GeneratorId,
    pub mass: f64,
    pub l: usize,
    pub m: i64,
    /// `(l', m', ⟨u_{l',m'}, N u_{l,m}⟩)` for `|l'-l| ≤ 1`, `|m'-m| ≤ 1`.
    pub entries: Vec<(usize, i64, Complex64)>,
    /// Largest projection onto any other mode with `l' ≤ l + 2`.
    pub max_outside: f64,
}

impl LadderReport {
    pub fn get(&self, l: usize, m: i64) -> Complex64 {
        self.entries
            .iter()
            .find(|e| e.0 == l && e.1 == m)
            .map(|e| e.2)
            .unwrap_or_default()
    }

    pub fn to_json(&self) -> Value {
        let entries = self
            .entries
            .iter()
            .map(|&(l, m, c)| {
                json::object([
                    ("l'", Value::from(l)),
                    ("m'", Value::from(m)),
                    ("re", json::num(c.re)),
                    ("im", json::num(c.im)),
                ])
            })
            .collect();
        json::object([
            ("generator", Value::from(self.generator.name())),
            ("M", json::num(self.mass)),
            ("l", Value::from(self.l)),
            ("m", Value::from(self.m)),
            ("entries", Value::Array(entries)),
            ("max_outside", json::num(self.max_outside)),
        ])
    }
}

/// Projections `⟨u_{l',m'}, gen · u_{l,m}⟩` on the slice `t`.
///
/// `basis` must reach `l + 2` so that the selection rules can be checked one
/// shell beyond the expected support.
pub fn ladder_coefficients(
    gen: GeneratorId,
    basis: &ModeBasis,
    l: usize,
    m: i64,
    t: f64,
    grid: &SphereGrid,
) -> Result<LadderReport> {
    if basis.l_max() < l + 2 {
        return Err(Error::InvalidParameter(format!(
            "basis l_max {} must be at least l + 2 = {}",
            basis.l_max(),
            l + 2
        )));
    }
    let params = basis.params();
    let g = GeneratorField { gen, basis, l, m, h: 1e-4 };
    let (gv, gd) = g.sample(t, grid)?;
    let sampled = Sampled { v: gv, d: gd };
    let mut entries = Vec::new();
    let mut max_outside = 0.0f64;
    for lp in 0..=(l + 2) {
        for mp in -(lp as i64)..=(lp as i64) {
            let u = ModeField { basis, l: lp, m: mp, sector: Sector::Positive };
            let c = inner_product(params, &u, &sampled.at(t), t, grid)?;
            if (lp as i64 - l as i64).abs() <= 1 && (mp - m).abs() <= 1 {
                entries.push((lp, mp, c));
            } else {
                max_outside = max_outside.max(c.norm());
            }
        }
    }
    Ok(LadderReport { generator: gen, mass: params.mass(), l, m, entries, max_outside })
}

/// Precomputed samples on one slice, exposed as a [`Field`] that only
/// answers on that slice through [`Field::sample`].
struct Sampled {
    v: Vec<Complex64>,
    d: Vec<Complex64>,
}

struct SampledAt<'a> {
    s: &'a Sampled,
    t: f64,
}

impl Sampled {
    fn at(&self, t: f64) -> SampledAt<'_> {
        SampledAt { s: self, t }
    }
}

impl Field for SampledAt<'_> {
    fn value(&self, _p: &SpacetimePoint) -> Result<Complex64> {
        Err(Error::InvalidParameter("sampled field has no pointwise values".into()))
    }

    fn sample(&self, t: f64, grid: &SphereGrid) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
        if t != self.t || grid.nodes().len() != self.s.v.len() {
            return Err(Error::InvalidParameter("sampled field queried off its slice".into()));
        }
        Ok((self.s.v.clone(), self.s.d.clone()))
    }
}

/// Casimir estimates at a probe point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CasimirEstimate {
    /// `(Q u)/u`, expected `M²`.
    pub q: Complex64,
    /// `(R u)/max|u|`, expected `0`.
    pub r: Complex64,
}

/// `Q = Σ N_ij² - Σ N_0k²` and `R = -(N01 N23 + N02 N31 + N03 N12)` applied
/// to `u_{l,m}` with nested differences of step `h`.
pub fn casimir_check(basis: &ModeBasis, l: usize, m: i64, p: &SpacetimePoint, h: f64) -> Result<CasimirEstimate> {
    let params = basis.params();
    let f = |q: &SpacetimePoint| basis.mode(l, m, Sector::Positive, q);
    let u = f(p)?;
    let radial = basis.radial(l, p.t, Sector::Positive)?.value.norm();
    let scale = radial * ((2 * l + 1) as f64 / (4.0 * std::f64::consts::PI)).sqrt();
    if u.norm() < 1e-3 * scale {
        return Err(Error::SmallProbe(u.norm()));
    }
    use GeneratorId::*;
    let mut q = Complex64::new(0.0, 0.0);
    for g in [N12, N23, N31] {
        q += apply_nested_fd(g, g, params, &f, p, h)?;
    }
    for g in [N01, N02, N03] {
        q -= apply_nested_fd(g, g, params, &f, p, h)?;
    }
    let mut r = Complex64::new(0.0, 0.0);
    for (a, b) in [(N01, N23), (N02, N31), (N03, N12)] {
        r -= apply_nested_fd(a, b, params, &f, p, h)?;
    }
    Ok(CasimirEstimate { q: q / u, r: r / scale })
}

/// Rotates a state: shell `l` is multiplied by the Wigner matrix
/// `D^l(ξ, ε, τ)`, so that the new field at `p` equals the old one at
/// `R⁻¹ p`.
pub fn rotate_state(state: &StateCoefficients, angles: &EulerAngles) -> StateCoefficients {
    let mut out = StateCoefficients::from_fn(state.l_max(), |l, k| {
        let li = l as i64;
        (-li..=li).map(|m| wigner_d(li, k, m, angles) * state.get_or_zero(l, m)).sum()
    });
    if state.is_normalized() {
        out.normalize().expect("rotations preserve the norm");
    }
    out
}

/// `(θ, φ)` of `R⁻¹ x` for the unit vector `x(θ, φ)`.
pub fn rotate_back(angles: &EulerAngles, theta: f64, phi: f64) -> (f64, f64) {
    let r = angles.matrix();
    let x = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
    let y: Vec<f64> = (0..3).map(|i| (0..3).map(|k| r[k][i] * x[k]).sum()).collect();
    (y[2].clamp(-1.0, 1.0).acos(), y[1].atan2(y[0]))
}
