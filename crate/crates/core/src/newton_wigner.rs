//! Newton–Wigner transform `W_t`, densities, the position operator and the
//! sign-ambiguity analysis.
//!
//! `W_t` sends mode coefficients to harmonic coefficients on the sphere of
//! radius `a(t)`:
//!
//! ```text
//! q_{l,m}(t) = φ_{l,m} e^{-iζ_l(t)},   e^{-iζ_l(t)} = R_l(t) / |R_l(t)|
//! ```
//!
//! where `R_l` is the radial factor of `u_{l,m}`. Equivalently
//! `q_{l,m} = φ_{l,m} R_l(t) √(2 Ξ_l(t))` with `Ξ_l = a(t) |ω_l^dS(t)|`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::Value;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{scale_factor, DeSitterParams, Series};
use crate::json;
use crate::modes::{ModeBasis, Sector, SphereGrid, StateCoefficients};
use crate::specfun::ferrers::phase_n;
use crate::specfun::harmonics::{legendre_p, lm_index, sph_harm_table};
use crate::specfun::wigner::three_j;

/// Harmonic coefficients `q_{l,m}` of the NW function on the slice `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct NWState {
    pub t: f64,
    pub q: StateCoefficients,
}

impl NWState {
    pub fn l_max(&self) -> usize {
        self.q.l_max()
    }

    /// `Σ q_{l,m} Y_l^m(θ, φ)`, the NW function in `L²(S²)`.
    pub fn function(&self, theta: f64, phi: f64) -> Complex64 {
        let y = sph_harm_table(self.l_max(), theta, phi);
        self.q.iter().map(|(l, m, c)| c * y[lm_index(l, m)]).sum()
    }
}

fn check_basis(basis: &ModeBasis, l_max: usize) -> Result<()> {
    if basis.l_max() < l_max {
        return Err(Error::InvalidParameter(format!(
            "mode basis reaches l = {} but l = {l_max} is needed",
            basis.l_max()
        )));
    }
    Ok(())
}

/// `e^{-iζ_l(t)}`.
pub fn phase_factor(basis: &ModeBasis, l: usize, t: f64) -> Result<Complex64> {
    let r = basis.radial(l, t, Sector::Positive)?.value;
    let n = r.norm();
    if !(n > 0.0) {
        return Err(Error::ZeroCrossing { l, t });
    }
    Ok(r / n)
}

/// `ζ_l(t)`, unwrapped continuously along `[0, t]` from `ζ_l(0) ∈ {0, π}`.
pub fn zeta_phase(basis: &ModeBasis, l: usize, t: f64) -> Result<f64> {
    let n = phase_n(basis.params().nu());
    let shell = basis.ferrers_shell(l)?;
    let (t0, _) = shell.at_origin();
    let w0 = n * t0;
    let mut zeta = if w0.re >= 0.0 { 0.0 } else { PI };
    if t != 0.0 {
        let z = Complex64::new(0.0, (t / basis.params().alpha()).sinh());
        let path = shell.trajectory(z)?;
        let mut prev = w0;
        for &(_, v) in path.iter().skip(1) {
            let w = n * v;
            if w.norm() == 0.0 {
                return Err(Error::ZeroCrossing { l, t });
            }
            zeta -= (w / prev).arg();
            prev = w;
        }
        // Align with the accurately evaluated endpoint.
        let target = phase_factor(basis, l, t)?;
        zeta -= (target * Complex64::from_polar(1.0, zeta)).arg();
    }
    Ok(zeta)
}

/// `ω_l^dS(t) = 1/(γ_l |T_ν^{l+1/2}(i sinh(t/α))|²)`.
pub fn omega_ds(basis: &ModeBasis, l: usize, t: f64) -> Result<f64> {
    let tv = basis.ferrers(l, t)?.value.norm_sqr();
    if !(tv > 0.0) {
        return Err(Error::ZeroCrossing { l, t });
    }
    Ok(1.0 / (basis.gamma_l(l)? * tv))
}

/// `Ξ_l(t) = a(t) ω_l^dS(t)`.
pub fn xi(basis: &ModeBasis, l: usize, t: f64) -> Result<f64> {
    Ok(scale_factor(basis.params(), t) * omega_ds(basis, l, t)?)
}

/// `ζ_l`, `Ξ_l` and `ω_l^dS` on a time grid.
#[derive(Debug, Clone)]
pub struct PhaseTable {
    pub t: Vec<f64>,
    /// Indexed `[l][k]` for time `t[k]`.
    pub zeta: Vec<Vec<f64>>,
    pub xi: Vec<Vec<f64>>,
    pub omega: Vec<Vec<f64>>,
}

impl PhaseTable {
    pub fn build(basis: &ModeBasis, l_max: usize, t: &[f64]) -> Result<Self> {
        check_basis(basis, l_max)?;
        let rows: Result<Vec<(Vec<f64>, Vec<f64>, Vec<f64>)>> = (0..=l_max)
            .into_par_iter()
            .map(|l| {
                let mut z = Vec::with_capacity(t.len());
                let mut x = Vec::with_capacity(t.len());
                let mut o = Vec::with_capacity(t.len());
                for &tk in t {
                    z.push(zeta_phase(basis, l, tk)?);
                    let om = omega_ds(basis, l, tk)?;
                    o.push(om);
                    x.push(scale_factor(basis.params(), tk) * om);
                }
                Ok((z, x, o))
            })
            .collect();
        let mut out = Self { t: t.to_vec(), zeta: vec![], xi: vec![], omega: vec![] };
        for (z, x, o) in rows? {
            out.zeta.push(z);
            out.xi.push(x);
            out.omega.push(o);
        }
        Ok(out)
    }
}

/// `(central difference of ζ_l at t, ω_l^dS(t)/a(t))`.
pub fn zeta_derivative_check(basis: &ModeBasis, l: usize, t: f64, h: f64) -> Result<(f64, f64)> {
    let z = |d: f64| zeta_phase(basis, l, t + d);
    let fd = (-z(2.0 * h)? + 8.0 * z(h)? - 8.0 * z(-h)? + z(-2.0 * h)?) / (12.0 * h);
    let formula = omega_ds(basis, l, t)? / scale_factor(basis.params(), t);
    Ok((fd, formula))
}

/// `max_k |e^{-iζ_l(t_k)} - e^{-iζ_l(0)}|`.
pub fn phase_drift(basis: &ModeBasis, l: usize, t: &[f64]) -> Result<f64> {
    let p0 = phase_factor(basis, l, 0.0)?;
    let mut worst = 0.0f64;
    for &tk in t {
        worst = worst.max((phase_factor(basis, l, tk)? - p0).norm());
    }
    Ok(worst)
}

/// How `W_t` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformRoute {
    /// Multiply by the unit phase `e^{-iζ_l(t)}`.
    Phase,
    /// Multiply by `R_l(t) √(2 Ξ_l(t))`.
    Absorption,
}

/// `W_t` applied to a state.
pub fn nw_transform(basis: &ModeBasis, state: &StateCoefficients, t: f64) -> Result<NWState> {
    nw_transform_via(basis, state, t, TransformRoute::Phase)
}

pub fn nw_transform_via(
    basis: &ModeBasis,
    state: &StateCoefficients,
    t: f64,
    route: TransformRoute,
) -> Result<NWState> {
    check_basis(basis, state.l_max())?;
    let factors: Vec<Complex64> = (0..=state.l_max())
        .map(|l| match route {
            TransformRoute::Phase => phase_factor(basis, l, t),
            TransformRoute::Absorption => {
                let r = basis.radial(l, t, Sector::Positive)?.value;
                Ok(r * (2.0 * xi(basis, l, t)?.abs()).sqrt())
            }
        })
        .collect::<Result<_>>()?;
    Ok(NWState { t, q: state.map_shells(|l| factors[l]) })
}

/// `W_t⁻¹`.
pub fn nw_inverse(basis: &ModeBasis, nw: &NWState) -> Result<StateCoefficients> {
    check_basis(basis, nw.l_max())?;
    let factors: Vec<Complex64> =
        (0..=nw.l_max()).map(|l| Ok(phase_factor(basis, l, nw.t)?.conj())).collect::<Result<_>>()?;
    Ok(nw.q.map_shells(|l| factors[l]))
}

/// Probability density of an NW state on the grid.
#[derive(Debug, Clone)]
pub struct Density {
    pub t: f64,
    /// `|φ̃|²` with `φ̃ = (1/a(t)) Σ q Y`, per node.
    pub physical: Vec<f64>,
    /// `|Σ q Y|²` per node.
    pub raw: Vec<f64>,
    /// `∫ |φ̃|² a(t)² dΩ`.
    pub total: f64,
}

pub fn nw_density(basis: &ModeBasis, nw: &NWState, grid: &SphereGrid) -> Density {
    let a = scale_factor(basis.params(), nw.t);
    let raw: Vec<f64> =
        grid.nodes().par_iter().map(|n| nw.function(n.theta, n.phi).norm_sqr()).collect();
    let total = grid.nodes().iter().zip(&raw).map(|(n, r)| n.weight * r).sum();
    let physical = raw.iter().map(|r| r / (a * a)).collect();
    Density { t: nw.t, physical, raw, total }
}

/// Coefficients of `r̂_j` in the `l = 1` harmonics, indexed by `μ + 1`.
fn unit_vector_coefficients(axis: usize) -> Result<[Complex64; 3]> {
    let c = (4.0 * PI / 3.0).sqrt();
    let h = c / 2f64.sqrt();
    let z = Complex64::new(0.0, 0.0);
    match axis {
        1 => Ok([Complex64::new(h, 0.0), z, Complex64::new(-h, 0.0)]),
        2 => Ok([Complex64::new(0.0, h), z, Complex64::new(0.0, h)]),
        3 => Ok([z, Complex64::new(c, 0.0), z]),
        _ => Err(Error::InvalidParameter(format!("axis must be 1, 2 or 3, got {axis}"))),
    }
}

/// `∫ Y_p^{s*} Y_1^μ Y_l^m dΩ`.
fn gaunt(p: usize, s: i64, mu: i64, l: usize, m: i64) -> f64 {
    let (pi, li) = (p as i64, l as i64);
    let w = three_j(1, li, pi, 0, 0, 0);
    if w == 0.0 {
        return 0.0;
    }
    let sign = if s.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    sign * ((3 * (2 * l + 1) * (2 * p + 1)) as f64 / (4.0 * PI)).sqrt() * w * three_j(1, li, pi, mu, m, -s)
}

/// Harmonic coefficients of `r̂_j f` for `f` with coefficients `q`, from the
/// 3-j expansion; the result reaches `l_max + 1`.
pub fn multiply_unit_vector(q: &StateCoefficients, axis: usize) -> Result<StateCoefficients> {
    let a = unit_vector_coefficients(axis)?;
    let l_max = q.l_max();
    Ok(StateCoefficients::from_fn(l_max + 1, |p, s| {
        let mut acc = Complex64::new(0.0, 0.0);
        for l in p.saturating_sub(1)..=(p + 1).min(l_max) {
            for (k, &am) in a.iter().enumerate() {
                let mu = k as i64 - 1;
                let m = s - mu;
                if am == Complex64::new(0.0, 0.0) || m.unsigned_abs() as usize > l {
                    continue;
                }
                acc += am * gaunt(p, s, mu, l, m) * q.get_or_zero(l, m);
            }
        }
        acc
    }))
}

/// `X̂^j φ = W_t⁻¹ (r̂_j · W_t φ)`, from the 3-j expansion.
pub fn position_apply(
    basis: &ModeBasis,
    state: &StateCoefficients,
    t: f64,
    axis: usize,
) -> Result<StateCoefficients> {
    check_basis(basis, state.l_max() + 1)?;
    let nw = nw_transform(basis, state, t)?;
    let image = multiply_unit_vector(&nw.q, axis)?;
    nw_inverse(basis, &NWState { t, q: image })
}

/// Same as [`position_apply`] but multiplying by `r̂_j` on the grid and
/// projecting back onto harmonics.
pub fn position_apply_quadrature(
    basis: &ModeBasis,
    state: &StateCoefficients,
    t: f64,
    axis: usize,
    grid: &SphereGrid,
) -> Result<StateCoefficients> {
    unit_vector_coefficients(axis)?;
    let l_img = state.l_max() + 1;
    check_basis(basis, l_img)?;
    if grid.exact_degree() < l_img {
        return Err(Error::InvalidParameter(format!(
            "grid exact to degree {} cannot resolve l = {l_img}",
            grid.exact_degree()
        )));
    }
    let nw = nw_transform(basis, state, t)?;
    let values: Vec<Complex64> = grid
        .nodes()
        .par_iter()
        .map(|n| {
            let r = match axis {
                1 => n.theta.sin() * n.phi.cos(),
                2 => n.theta.sin() * n.phi.sin(),
                _ => n.theta.cos(),
            };
            nw.function(n.theta, n.phi) * r
        })
        .collect();
    let q = StateCoefficients::from_flat(l_img, grid.project(&values, l_img))?;
    nw_inverse(basis, &NWState { t, q })
}

/// Matrix of `X̂^j` between modes with `l ≤ l_max`, rows and columns in
/// table order.
pub fn position_matrix(basis: &ModeBasis, l_max: usize, t: f64, axis: usize) -> Result<Vec<Vec<Complex64>>> {
    let labels: Vec<(usize, i64)> =
        (0..=l_max).flat_map(|l| (-(l as i64)..=(l as i64)).map(move |m| (l, m))).collect();
    let cols: Vec<StateCoefficients> = labels
        .iter()
        .map(|&(l, m)| position_apply(basis, &StateCoefficients::basis(l_max, l, m)?, t, axis))
        .collect::<Result<_>>()?;
    Ok(labels
        .iter()
        .map(|&(p, s)| cols.iter().map(|c| c.get_or_zero(p, s)).collect())
        .collect())
}

/// Position expectation by two routes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositionExpectation {
    /// `⟨φ, X̂ φ⟩ / ‖φ‖²` from the 3-j images.
    pub pairing: [f64; 3],
    /// `∫ r̂ |φ_NW|² / ∫ |φ_NW|²` by quadrature.
    pub density: [f64; 3],
}

pub fn position_expectation(
    basis: &ModeBasis,
    state: &StateCoefficients,
    t: f64,
    grid: &SphereGrid,
) -> Result<PositionExpectation> {
    let norm2 = state.norm_sqr();
    if norm2 == 0.0 {
        return Err(Error::InvalidParameter("zero state has no position".into()));
    }
    let mut pairing = [0.0; 3];
    for (j, out) in pairing.iter_mut().enumerate() {
        let img = position_apply(basis, state, t, j + 1)?;
        *out = state.dot(&img).re / norm2;
    }
    let nw = nw_transform(basis, state, t)?;
    Ok(PositionExpectation { pairing, density: density_moments(&nw, grid) })
}

fn density_moments(nw: &NWState, grid: &SphereGrid) -> [f64; 3] {
    let (mut acc, mut total) = ([0.0; 3], 0.0);
    for n in grid.nodes() {
        let d = nw.function(n.theta, n.phi).norm_sqr() * n.weight;
        let (st, ct) = n.theta.sin_cos();
        acc[0] += d * st * n.phi.cos();
        acc[1] += d * st * n.phi.sin();
        acc[2] += d * ct;
        total += d;
    }
    acc.map(|v| v / total)
}

/// Per-slice NW densities and position expectations.
#[derive(Debug, Clone)]
pub struct Trace {
    pub t: Vec<f64>,
    pub expectation: Vec<[f64; 3]>,
    pub norm: Vec<f64>,
    /// Physical density per slice, node order of the grid.
    pub densities: Vec<Vec<f64>>,
}

impl Trace {
    /// Largest pointwise change of the physical density between consecutive
    /// slices.
    pub fn max_snapshot_change(&self) -> f64 {
        self.densities
            .windows(2)
            .flat_map(|w| w[0].iter().zip(&w[1]).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max)
    }

    /// Same for the `L²(S²)` density `|Σ q Y|²`, which ignores the growth of
    /// the sphere.
    pub fn max_raw_change(&self, params: &DeSitterParams) -> f64 {
        let raw: Vec<Vec<f64>> = self
            .densities
            .iter()
            .zip(&self.t)
            .map(|(d, &t)| {
                let a2 = scale_factor(params, t).powi(2);
                d.iter().map(|v| v * a2).collect()
            })
            .collect();
        raw.windows(2)
            .flat_map(|w| w[0].iter().zip(&w[1]).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max)
    }

    pub fn to_json(&self, params: &DeSitterParams) -> Value {
        let p = json::object([
            ("alpha", json::num(params.alpha())),
            ("M", json::num(params.mass())),
            ("nu_re", json::num(params.nu().re)),
            ("nu_im", json::num(params.nu().im)),
            (
                "series",
                Value::from(match params.series() {
                    Series::Principal => "principal",
                    Series::Complementary => "complementary",
                }),
            ),
        ]);
        json::object([
            ("params", p),
            ("t", Value::Array(self.t.iter().map(|&v| json::num(v)).collect())),
            (
                "expectation",
                Value::Array(
                    self.expectation
                        .iter()
                        .map(|e| Value::Array(e.iter().map(|&v| json::num(v)).collect()))
                        .collect(),
                ),
            ),
            ("norm", Value::Array(self.norm.iter().map(|&v| json::num(v)).collect())),
        ])
    }
}

pub fn evolve_trace(
    basis: &ModeBasis,
    state: &StateCoefficients,
    t_grid: &[f64],
    grid: &SphereGrid,
) -> Result<Trace> {
    let slices: Result<Vec<([f64; 3], f64, Vec<f64>)>> = t_grid
        .par_iter()
        .map(|&t| {
            let nw = nw_transform(basis, state, t)?;
            let d = nw_density(basis, &nw, grid);
            let e = density_moments(&nw, grid);
            Ok((e, nw.q.norm(), d.physical))
        })
        .collect();
    let mut tr = Trace { t: t_grid.to_vec(), expectation: vec![], norm: vec![], densities: vec![] };
    for (e, n, d) in slices? {
        tr.expectation.push(e);
        tr.norm.push(n);
        tr.densities.push(d);
    }
    Ok(tr)
}

/// `Σ_{l≤L} Σ_m Y_l^m(θ₀,φ₀)* Y_l^m(θ,φ)`.
pub fn delta_sequence(big_l: usize, theta0: f64, phi0: f64, theta: f64, phi: f64) -> Complex64 {
    let a = sph_harm_table(big_l, theta0, phi0);
    let b = sph_harm_table(big_l, theta, phi);
    a.iter().zip(&b).map(|(x, y)| x.conj() * y).sum()
}

/// The same kernel at `θ₀ = 0` through the Legendre sum.
pub fn delta_sequence_polar(big_l: usize, theta: f64) -> f64 {
    (0..=big_l).map(|l| (2 * l + 1) as f64 / (4.0 * PI) * legendre_p(l, theta.cos())).sum()
}

/// Localized packet: NW coefficients `∝ conj(Y_l^m(θ₀,φ₀)) e^{-l(l+1)/(2w²)}`
/// at time `t0`, pulled back to mode coefficients and normalized.
pub fn heat_kernel_packet(
    basis: &ModeBasis,
    l_max: usize,
    theta0: f64,
    phi0: f64,
    width: f64,
    t0: f64,
) -> Result<StateCoefficients> {
    if !(width > 0.0) {
        return Err(Error::InvalidParameter(format!("packet width must be positive, got {width}")));
    }
    let y = sph_harm_table(l_max, theta0, phi0);
    let q = StateCoefficients::from_fn(l_max, |l, m| {
        y[lm_index(l, m)].conj() * (-((l * (l + 1)) as f64) / (2.0 * width * width)).exp()
    })
    .normalized()?;
    nw_inverse(basis, &NWState { t: t0, q })?.normalized()
}

/// `(R_l(t), (-1)^l (2αM cosh²(t/α))^{-1/2} e^{-iMt/α})`.
pub fn large_mass_asymptotics_check(basis: &ModeBasis, l: usize, t: f64) -> Result<(Complex64, Complex64)> {
    let p = basis.params();
    let exact = basis.radial(l, t, Sector::Positive)?.value;
    let c = (p.alpha() * 0.0 + t / p.alpha()).cosh();
    let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
    let mag = sign / (2.0 * p.alpha() * p.mass() * c * c).sqrt();
    Ok((exact, Complex64::from_polar(mag, -p.mass() * t / p.alpha())))
}

/// `(−(ζ_l(t) − ζ_l(0)), −M t/α)`: the measured and asymptotic phase
/// advance of the mode.
pub fn large_mass_phase_drift(basis: &ModeBasis, l: usize, t: f64) -> Result<(f64, f64)> {
    let p = basis.params();
    let measured = -(zeta_phase(basis, l, t)? - zeta_phase(basis, l, 0.0)?);
    Ok((measured, -p.mass() * t / p.alpha()))
}

/// Delta-sequence peak for one sign assignment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaPeak {
    pub big_l: usize,
    /// `|δ^L(0,0,φ)|` with `s_l = (-1)^l`.
    pub alternating: f64,
    /// Largest peak among the assignments that flip one sign.
    pub best_single_flip: f64,
}

/// Structured outcome of the sign-ambiguity analysis.
#[derive(Debug, Clone)]
pub struct SignAmbiguityReport {
    pub mass: f64,
    /// `θ` samples for the two candidate profiles.
    pub theta: Vec<f64>,
    /// NW function at `t = 0` for `s_0 ≠ s_1`.
    pub profile_opposite: Vec<f64>,
    /// NW function at `t = 0` for `s_0 = s_1`.
    pub profile_same: Vec<f64>,
    /// Largest coefficient error against `(1 + cos θ)/(2√π)`.
    pub opposite_coeff_error: f64,
    /// Largest coefficient error against `(1 - cos θ)/(2√π)`.
    pub same_coeff_error: f64,
    /// `sgn(N(ν) T_ν^{l+1/2}(0))` for `l = 0..=20`.
    pub origin_signs: Vec<i32>,
    pub peaks: Vec<DeltaPeak>,
}

impl SignAmbiguityReport {
    pub fn signs_alternate(&self) -> bool {
        self.origin_signs.iter().enumerate().all(|(l, &s)| s == if l % 2 == 0 { 1 } else { -1 })
    }

    pub fn alternating_wins(&self) -> bool {
        // At L = 0 a flip only changes the overall sign.
        self.peaks.iter().all(|p| p.big_l == 0 || p.alternating > p.best_single_flip)
    }

    pub fn to_json(&self) -> Value {
        json::object([
            ("M", json::num(self.mass)),
            ("opposite_coeff_error", json::num(self.opposite_coeff_error)),
            ("same_coeff_error", json::num(self.same_coeff_error)),
            ("origin_signs", Value::Array(self.origin_signs.iter().map(|&s| Value::from(s)).collect())),
            ("signs_alternate", Value::from(self.signs_alternate())),
            ("alternating_wins", Value::from(self.alternating_wins())),
            (
                "peaks",
                Value::Array(
                    self.peaks
                        .iter()
                        .map(|p| {
                            json::object([
                                ("L", Value::from(p.big_l)),
                                ("alternating", json::num(p.alternating)),
                                ("best_single_flip", json::num(p.best_single_flip)),
                            ])
                        })
                        .collect(),
                ),
            ),
        ])
    }
}

/// Sign-ambiguity analysis for shells up to `l = 20`.
pub fn sign_ambiguity_report(params: &DeSitterParams) -> Result<SignAmbiguityReport> {
    const L_MAX: usize = 20;
    let basis = ModeBasis::new(params, L_MAX)?;
    let y00 = 0.5 / PI.sqrt();
    let y10 = (3.0 / (4.0 * PI)).sqrt();

    // State with φ_{0,0} = s_0, φ_{1,0} = s_1/√3 sent through W_0; the
    // profile is the coefficient pair in front of (1, cos θ).
    let candidate = |s0: f64, s1: f64| -> Result<(f64, f64)> {
        let mut st = StateCoefficients::zeros(1);
        st.set(0, 0, Complex64::new(s0, 0.0))?;
        st.set(1, 0, Complex64::new(s1 / 3f64.sqrt(), 0.0))?;
        let nw = nw_transform(&basis, &st, 0.0)?;
        let c0 = nw.q.get(0, 0)? * y00 * s0;
        let c1 = nw.q.get(1, 0)? * y10 * s0;
        Ok((c0.re + c0.im.abs(), c1.re + c1.im.abs()))
    };
    let target = 0.5 / PI.sqrt();
    let (o0, o1) = candidate(1.0, -1.0)?;
    let (s0, s1) = candidate(1.0, 1.0)?;
    let opposite_coeff_error = (o0 - target).abs().max((o1 - target).abs());
    let same_coeff_error = (s0 - target).abs().max((s1 + target).abs());

    let theta: Vec<f64> = (0..=64).map(|k| PI * k as f64 / 64.0).collect();
    let profile_opposite = theta.iter().map(|th| o0 + o1 * th.cos()).collect();
    let profile_same = theta.iter().map(|th| s0 + s1 * th.cos()).collect();

    let n = phase_n(params.nu());
    let mut origin_signs = Vec::with_capacity(L_MAX + 1);
    let mut terms = Vec::with_capacity(L_MAX + 1);
    for l in 0..=L_MAX {
        let w = n * basis.ferrers_shell(l)?.at_origin().0;
        if w.im.abs() > 1e-10 * w.norm() {
            return Err(Error::Degenerate(format!("N(ν)T(0) is not real at l = {l}: {w}")));
        }
        origin_signs.push(if w.re > 0.0 { 1 } else { -1 });
        let r0 = basis.radial(l, 0.0, Sector::Positive)?.value.re;
        terms.push(r0 * (2 * l + 1) as f64 / (4.0 * PI));
    }
    let peak = |signs: &dyn Fn(usize) -> f64, big_l: usize| -> f64 {
        (0..=big_l).map(|l| signs(l) * terms[l]).sum::<f64>().abs()
    };
    let alt = |l: usize| if l % 2 == 0 { 1.0 } else { -1.0 };
    let peaks = (0..=L_MAX)
        .map(|big_l| {
            let best_single_flip = (0..=big_l)
                .map(|k| peak(&|l| if l == k { -alt(l) } else { alt(l) }, big_l))
                .fold(0.0, f64::max);
            DeltaPeak { big_l, alternating: peak(&alt, big_l), best_single_flip }
        })
        .collect();

    Ok(SignAmbiguityReport {
        mass: params.mass(),
        theta,
        profile_opposite,
        profile_same,
        opposite_coeff_error,
        same_coeff_error,
        origin_signs,
        peaks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::wigner::{wigner_d, EulerAngles};
    use crate::symmetry::{apply_discrete, rotate_state, Discrete};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn basis(m: f64, l_max: usize) -> ModeBasis {
        ModeBasis::new(&DeSitterParams::new(1.0, m).unwrap(), l_max).unwrap()
    }

    #[test]
    fn origin_phase_is_alternating() {
        for &m in &[0.5, 2.5] {
            let b = basis(m, 16);
            for l in 0..=16 {
                let p = phase_factor(&b, l, 0.0).unwrap();
                let e = if l % 2 == 0 { 1.0 } else { -1.0 };
                assert!((p - e).norm() < 1e-14, "M={m} l={l} {p}");
                let z = zeta_phase(&b, l, 0.0).unwrap();
                assert_eq!(z, if l % 2 == 0 { 0.0 } else { PI });
            }
        }
    }

    #[test]
    fn unwrapped_zeta_is_consistent() {
        let b = basis(2.5, 3);
        for l in 0..=3 {
            let mut prev = zeta_phase(&b, l, 0.0).unwrap();
            for k in 1..=20 {
                let t = 0.15 * k as f64;
                let z = zeta_phase(&b, l, t).unwrap();
                assert!((Complex64::from_polar(1.0, -z) - phase_factor(&b, l, t).unwrap()).norm() < 1e-12);
                assert!(z > prev, "ζ must increase, l={l} t={t}");
                prev = z;
            }
        }
    }

    #[test]
    fn principal_phase_law() {
        let b = basis(2.5, 3);
        for &(l, t) in &[(0usize, 0.4), (3, 1.2), (1, -0.8)] {
            let (fd, formula) = zeta_derivative_check(&b, l, t, 1e-3).unwrap();
            assert!((fd - formula).abs() <= 1e-6 * formula.abs(), "l={l} t={t}: {fd} vs {formula}");
        }
    }

    #[test]
    fn xi_identity_and_omega_sign() {
        let b = basis(2.5, 4);
        for l in 0..=4 {
            for &t in &[0.0, 0.5, 2.0] {
                let o = omega_ds(&b, l, t).unwrap();
                assert!(o > 0.0);
                let x = xi(&b, l, t).unwrap();
                assert!((x - scale_factor(b.params(), t) * o).abs() <= 1e-12 * x.abs());
            }
        }
        let b = basis(0.5, 2);
        assert!(omega_ds(&b, 1, 0.3).unwrap() < 0.0);
    }

    #[test]
    fn transform_routes_agree_and_invert() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &m in &[0.5, 2.5] {
            let b = basis(m, 6);
            let s = StateCoefficients::random(6, &mut rng);
            for &t in &[0.0, 0.7, -1.3] {
                let a = nw_transform_via(&b, &s, t, TransformRoute::Phase).unwrap();
                let c = nw_transform_via(&b, &s, t, TransformRoute::Absorption).unwrap();
                assert!(a.q.max_abs_diff(&c.q) < 1e-12);
                assert!((a.q.norm() - 1.0).abs() < 1e-14);
                let back = nw_inverse(&b, &a).unwrap();
                assert!(back.max_abs_diff(&s) < 1e-12);
            }
        }
    }

    #[test]
    fn rotation_intertwining() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let b = basis(2.5, 5);
        let s = StateCoefficients::random(5, &mut rng);
        let ang = EulerAngles::new(0.7, 2.1, -0.4);
        let lhs = nw_transform(&b, &rotate_state(&s, &ang), 0.9).unwrap();
        let nw = nw_transform(&b, &s, 0.9).unwrap();
        let rhs = StateCoefficients::from_fn(5, |l, k| {
            let li = l as i64;
            (-li..=li).map(|m| wigner_d(li, k, m, &ang) * nw.q.get_or_zero(l, m)).sum()
        });
        assert!(lhs.q.max_abs_diff(&rhs) < 1e-10);
    }

    #[test]
    fn time_reversal_transport() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for &m in &[0.5, 2.5] {
            let b = basis(m, 4);
            let s = StateCoefficients::random(4, &mut rng);
            let t = 0.8;
            let reversed = nw_transform(&b, &apply_discrete(Discrete::T, &s), -t).unwrap();
            let nw = nw_transform(&b, &s, t).unwrap();
            for &(th, ph) in &[(0.3, 1.0), (2.0, 4.0), (1.5, 0.1)] {
                let lhs = reversed.function(th, ph);
                let rhs = nw.function(th, ph).conj();
                assert!((lhs - rhs).norm() < 1e-10, "M={m}");
            }
        }
    }

    #[test]
    fn densities() {
        let b = basis(2.5, 6);
        let grid = SphereGrid::new(16, 32).unwrap();
        let iso = StateCoefficients::basis(6, 0, 0).unwrap();
        let nw = nw_transform(&b, &iso, 0.5).unwrap();
        let d = nw_density(&b, &nw, &grid);
        let a = scale_factor(b.params(), 0.5);
        for v in &d.physical {
            assert!((v - 1.0 / (4.0 * PI * a * a)).abs() < 1e-14);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let s = StateCoefficients::random(6, &mut rng);
        let d = nw_density(&b, &nw_transform(&b, &s, 1.1).unwrap(), &grid);
        assert!((d.total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn position_operator_routes_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let b = basis(2.5, 5);
        let grid = SphereGrid::new(12, 24).unwrap();
        let s = StateCoefficients::random(4, &mut rng);
        for axis in 1..=3 {
            let a = position_apply(&b, &s, 0.6, axis).unwrap();
            let q = position_apply_quadrature(&b, &s, 0.6, axis, &grid).unwrap();
            assert_eq!(a.l_max(), 5);
            assert!(a.max_abs_diff(&q) < 1e-12, "axis {axis}");
        }
        let iso = StateCoefficients::basis(0, 0, 0).unwrap();
        let img = position_apply(&b, &iso, 0.0, 3).unwrap();
        for (l, m, c) in img.iter() {
            if (l, m) != (1, 0) {
                assert!(c.norm() < 1e-15);
            }
        }
        assert!(img.get(1, 0).unwrap().norm() > 0.1);
    }

    #[test]
    fn position_matrix_is_hermitian() {
        let b = basis(0.5, 5);
        for axis in 1..=3 {
            let m = position_matrix(&b, 4, 0.4, axis).unwrap();
            for i in 0..m.len() {
                for j in 0..m.len() {
                    assert!((m[i][j] - m[j][i].conj()).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn expectation_routes_and_parity() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        let b = basis(2.5, 5);
        let grid = SphereGrid::new(16, 32).unwrap();
        let s = StateCoefficients::random(4, &mut rng);
        let e = position_expectation(&b, &s, 0.3, &grid).unwrap();
        for j in 0..3 {
            assert!((e.pairing[j] - e.density[j]).abs() < 1e-10);
        }
        let p3 = position_expectation(&b, &apply_discrete(Discrete::P3, &s), 0.3, &grid).unwrap();
        assert!((p3.pairing[0] - e.pairing[0]).abs() < 1e-10);
        assert!((p3.pairing[2] + e.pairing[2]).abs() < 1e-10);
        let iso = position_expectation(&b, &StateCoefficients::basis(4, 0, 0).unwrap(), 0.3, &grid).unwrap();
        assert!(iso.pairing.iter().chain(&iso.density).all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn delta_sequence_reductions() {
        for &th in &[0.0, 0.3, 1.7, PI] {
            let a = delta_sequence(20, 0.0, 0.0, th, 0.9);
            assert!((a.re - delta_sequence_polar(20, th)).abs() < 1e-12 * (1.0 + a.norm()));
        }
        let peak = delta_sequence(20, 1.0, 2.0, 1.0, 2.0);
        assert!((peak.re - 441.0 / (4.0 * PI)).abs() < 1e-11);
        // rotation invariance: same angular separation
        let x = delta_sequence(7, 0.4, 0.0, 1.0, 0.0);
        let y = delta_sequence(7, 0.9, 2.0, 1.5, 2.0);
        assert!((x - y).norm() < 1e-12);
    }

    #[test]
    fn sign_ambiguity() {
        for &m in &[0.5, 2.5] {
            let r = sign_ambiguity_report(&DeSitterParams::new(1.0, m).unwrap()).unwrap();
            assert!(r.opposite_coeff_error < 1e-12 && r.same_coeff_error < 1e-12);
            assert!(r.signs_alternate());
            assert!(r.alternating_wins());
            let imax = |v: &[f64]| {
                v.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0
            };
            assert_eq!(imax(&r.profile_opposite), 0);
            assert_eq!(imax(&r.profile_same), r.theta.len() - 1);
        }
    }

    #[test]
    fn heat_kernel_packet_is_localized() {
        let b = basis(2.5, 9);
        let s = heat_kernel_packet(&b, 8, 0.0, 0.0, 4.0, 0.0).unwrap();
        let grid = SphereGrid::new(16, 32).unwrap();
        let e = position_expectation(&b, &s, 0.0, &grid).unwrap();
        assert!(e.density[2] > 0.5);
    }

    #[test]
    fn large_mass_limits() {
        let b = basis(100.0, 2);
        let (ex, asy) = large_mass_asymptotics_check(&b, 0, 0.0).unwrap();
        assert!((ex - asy).norm() <= 0.02 * asy.norm());
        let (ex, asy) = large_mass_asymptotics_check(&b, 2, 0.5).unwrap();
        assert!((ex - asy).norm() <= 0.05 * asy.norm());
        let (meas, exp) = large_mass_phase_drift(&b, 0, 1.0).unwrap();
        assert!((meas - exp).abs() <= 0.02 * exp.abs());
    }
}
