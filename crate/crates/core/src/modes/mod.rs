//! Mode functions, states, the Klein–Gordon inner product and related sums.
//!
//! The positive-energy modes are
//!
//! ```text
//! u_{l,m}(t,θ,φ) = R_l(t) Y_l^m(θ,φ),
//! R_l(t) = √(|γ_l|/2α) N(ν) T_ν^{l+1/2}(i sinh(t/α)) / √cosh(t/α)
//! ```
//!
//! and `v_{l,m}` uses `T_ν^{l+1/2}(-i sinh(t/α))` instead, so that
//! `v_{l,m} = conj(R_l) Y_l^m` and `conj(v_{l,m}) = (-1)^m u_{l,-m}`.
//!
//! The real root `√|γ_l|` is taken for both series. For `M < 1`, where
//! `γ_l < 0`, this differs from the principal complex root by a constant
//! factor `i`, which leaves every inner product unchanged and keeps time
//! reversal free of an extra sign.

pub mod grid;
pub mod state;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{kg_operator_fd, scale_factor, DeSitterParams, FdSteps, SpacetimePoint};
use crate::specfun::ferrers::{gamma_l, phase_n, FerrersEval, FerrersShell, OrderDegree};
use crate::specfun::harmonics::{lm_index, sph_harm_table, spherical_harmonic};

pub use grid::{gauss_legendre, SphereGrid, SphereNode};
pub use state::StateCoefficients;

/// Positive- or negative-energy sector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sector {
    Positive,
    Negative,
}

/// Time-dependent factor of a mode and its `t`-derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Radial {
    pub value: Complex64,
    pub dt: Complex64,
}

/// Per-shell data for the modes with `l ≤ l_max`.
#[derive(Debug, Clone)]
pub struct ModeBasis {
    params: DeSitterParams,
    shells: Vec<FerrersShell>,
    gammas: Vec<f64>,
    norms: Vec<Complex64>,
}

impl ModeBasis {
    pub fn new(params: &DeSitterParams, l_max: usize) -> Result<Self> {
        let mut shells = Vec::with_capacity(l_max + 1);
        let mut gammas = Vec::with_capacity(l_max + 1);
        let mut norms = Vec::with_capacity(l_max + 1);
        let n = phase_n(params.nu());
        for l in 0..=l_max {
            shells.push(FerrersShell::new(OrderDegree::for_shell(params, l))?);
            let g = gamma_l(params, l)?;
            gammas.push(g);
            norms.push(n * (g.abs() / (2.0 * params.alpha())).sqrt());
        }
        Ok(Self { params: *params, shells, gammas, norms })
    }

    pub fn params(&self) -> &DeSitterParams {
        &self.params
    }

    pub fn l_max(&self) -> usize {
        self.shells.len() - 1
    }

    fn shell(&self, l: usize) -> Result<&FerrersShell> {
        self.shells.get(l).ok_or(Error::Index { l: l as i64, m: 0 })
    }

    /// `γ_l`.
    pub fn gamma_l(&self, l: usize) -> Result<f64> {
        self.shell(l)?;
        Ok(self.gammas[l])
    }

    /// `√(|γ_l|/2α) N(ν)`.
    pub fn normalization(&self, l: usize) -> Result<Complex64> {
        self.shell(l)?;
        Ok(self.norms[l])
    }

    /// `T_ν^{l+1/2}(i sinh(t/α))` with its `z`-derivatives.
    pub fn ferrers(&self, l: usize, t: f64) -> Result<FerrersEval> {
        let z = Complex64::new(0.0, (t / self.params.alpha()).sinh());
        self.shell(l)?.eval(z)
    }

    /// Shell object for `l`, e.g. for trajectories.
    pub fn ferrers_shell(&self, l: usize) -> Result<&FerrersShell> {
        self.shell(l)
    }

    /// `R_l(t)` (positive sector) or `conj R_l(t)` (negative sector), with
    /// the analytic time derivative.
    pub fn radial(&self, l: usize, t: f64, sector: Sector) -> Result<Radial> {
        let alpha = self.params.alpha();
        let s = t / alpha;
        let (sh, ch) = (s.sinh(), s.cosh());
        let (z, dz_dt) = match sector {
            Sector::Positive => (Complex64::new(0.0, sh), Complex64::new(0.0, ch / alpha)),
            Sector::Negative => (Complex64::new(0.0, -sh), Complex64::new(0.0, -ch / alpha)),
        };
        let ev = self.shell(l)?.eval(z)?;
        let c = self.norms[l] / ch.sqrt();
        let value = c * ev.value;
        let dt = c * (ev.d1 * dz_dt - ev.value * (0.5 * s.tanh() / alpha));
        Ok(Radial { value, dt })
    }

    /// `u_{l,m}` or `v_{l,m}` at `p`.
    pub fn mode(&self, l: usize, m: i64, sector: Sector, p: &SpacetimePoint) -> Result<Complex64> {
        let y = spherical_harmonic(l, m, p.theta, p.phi)?;
        Ok(self.radial(l, p.t, sector)?.value * y)
    }

    /// `∂_t` of [`ModeBasis::mode`].
    pub fn mode_dt(&self, l: usize, m: i64, sector: Sector, p: &SpacetimePoint) -> Result<Complex64> {
        let y = spherical_harmonic(l, m, p.theta, p.phi)?;
        Ok(self.radial(l, p.t, sector)?.dt * y)
    }
}

/// `u_{l,m}(p)`.
pub fn mode_u(params: &DeSitterParams, l: usize, m: i64, p: &SpacetimePoint) -> Result<Complex64> {
    ModeBasis::new(params, l)?.mode(l, m, Sector::Positive, p)
}

/// `v_{l,m}(p)`.
pub fn mode_v(params: &DeSitterParams, l: usize, m: i64, p: &SpacetimePoint) -> Result<Complex64> {
    ModeBasis::new(params, l)?.mode(l, m, Sector::Negative, p)
}

/// A scalar field with access to its time derivative.
pub trait Field: Sync {
    fn value(&self, p: &SpacetimePoint) -> Result<Complex64>;

    /// Five-point central difference in `t` unless overridden.
    fn time_derivative(&self, p: &SpacetimePoint) -> Result<Complex64> {
        let h = 1e-3;
        let at = |d: f64| self.value(&SpacetimePoint { t: p.t + d, ..*p });
        Ok((-at(2.0 * h)? + at(h)? * 8.0 - at(-h)? * 8.0 + at(-2.0 * h)?) / (12.0 * h))
    }

    /// Values and time derivatives at every node of `grid` on the slice `t`.
    fn sample(&self, t: f64, grid: &SphereGrid) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
        let pairs: Result<Vec<(Complex64, Complex64)>> = grid
            .nodes()
            .par_iter()
            .map(|n| {
                let p = SpacetimePoint::new(t, n.theta, n.phi);
                Ok((self.value(&p)?, self.time_derivative(&p)?))
            })
            .collect();
        Ok(pairs?.into_iter().unzip())
    }
}

impl<F: Field + ?Sized> Field for &F {
    fn value(&self, p: &SpacetimePoint) -> Result<Complex64> {
        (**self).value(p)
    }
    fn time_derivative(&self, p: &SpacetimePoint) -> Result<Complex64> {
        (**self).time_derivative(p)
    }
    fn sample(&self, t: f64, grid: &SphereGrid) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
        (**self).sample(t, grid)
    }
}

/// Single mode `u_{l,m}` or `v_{l,m}` as a [`Field`].
#[derive(Debug, Clone, Copy)]
pub struct ModeField<'a> {
    pub basis: &'a ModeBasis,
    pub l: usize,
    pub m: i64,
    pub sector: Sector,
}

impl Field for ModeField<'_> {
    fn value(&self, p: &SpacetimePoint) -> Result<Complex64> {
        self.basis.mode(self.l, self.m, self.sector, p)
    }

    fn time_derivative(&self, p: &SpacetimePoint) -> Result<Complex64> {
        self.basis.mode_dt(self.l, self.m, self.sector, p)
    }

    fn sample(&self, t: f64, grid: &SphereGrid) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
        if self.m.unsigned_abs() as usize > self.l {
            return Err(Error::Index { l: self.l as i64, m: self.m });
        }
        let r = self.basis.radial(self.l, t, self.sector)?;
        let idx = lm_index(self.l, self.m);
        let ys: Vec<Complex64> =
            grid.nodes().iter().map(|n| sph_harm_table(self.l, n.theta, n.phi)[idx]).collect();
        Ok((ys.iter().map(|y| r.value * y).collect(), ys.iter().map(|y| r.dt * y).collect()))
    }
}

/// `Σ φ_{l,m} u_{l,m}` (or the same sum over `v_{l,m}`) as a [`Field`].
#[derive(Debug, Clone, Copy)]
pub struct Superposition<'a> {
    pub basis: &'a ModeBasis,
    pub state: &'a StateCoefficients,
    pub sector: Sector,
}

impl Superposition<'_> {
    fn radials(&self, t: f64) -> Result<Vec<Radial>> {
        if self.state.l_max() > self.basis.l_max() {
            return Err(Error::InvalidParameter(format!(
                "state l_max {} exceeds basis l_max {}",
                self.state.l_max(),
                self.basis.l_max()
            )));
        }
        (0..=self.state.l_max()).map(|l| self.basis.radial(l, t, self.sector)).collect()
    }

    fn combine(&self, radials: &[Radial], theta: f64, phi: f64) -> (Complex64, Complex64) {
        let y = sph_harm_table(self.state.l_max(), theta, phi);
        let (mut v, mut d) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for (l, m, c) in self.state.iter() {
            let cy = c * y[lm_index(l, m)];
            v += cy * radials[l].value;
            d += cy * radials[l].dt;
        }
        (v, d)
    }
}

impl Field for Superposition<'_> {
    fn value(&self, p: &SpacetimePoint) -> Result<Complex64> {
        Ok(self.combine(&self.radials(p.t)?, p.theta, p.phi).0)
    }

    fn time_derivative(&self, p: &SpacetimePoint) -> Result<Complex64> {
        Ok(self.combine(&self.radials(p.t)?, p.theta, p.phi).1)
    }

    fn sample(&self, t: f64, grid: &SphereGrid) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
        let r = self.radials(t)?;
        Ok(grid.nodes().par_iter().map(|n| self.combine(&r, n.theta, n.phi)).unzip())
    }
}

/// `Σ φ_{l,m} u_{l,m}(p)`.
pub fn superpose(basis: &ModeBasis, state: &StateCoefficients, p: &SpacetimePoint) -> Result<Complex64> {
    Superposition { basis, state, sector: Sector::Positive }.value(p)
}

/// Klein–Gordon product `i a(t)² ∫ (f* ∂_t g - ∂_t f* g) dΩ` on the slice `t`.
pub fn inner_product<F: Field + ?Sized, G: Field + ?Sized>(
    params: &DeSitterParams,
    f: &F,
    g: &G,
    t: f64,
    grid: &SphereGrid,
) -> Result<Complex64> {
    let (fv, fd) = f.sample(t, grid)?;
    let (gv, gd) = g.sample(t, grid)?;
    Ok(kg_pairing(params, t, grid, &fv, &fd, &gv, &gd))
}

fn kg_pairing(
    params: &DeSitterParams,
    t: f64,
    grid: &SphereGrid,
    fv: &[Complex64],
    fd: &[Complex64],
    gv: &[Complex64],
    gd: &[Complex64],
) -> Complex64 {
    let a = scale_factor(params, t);
    let s: Complex64 = grid
        .nodes()
        .iter()
        .enumerate()
        .map(|(k, n)| (fv[k].conj() * gd[k] - fd[k].conj() * gv[k]) * n.weight)
        .sum();
    Complex64::new(0.0, a * a) * s
}

/// Gram matrix of the modes with `l ≤ l_max` between two sectors.
#[derive(Debug, Clone)]
pub struct GramMatrix {
    /// `(l, m)` labels for rows and columns.
    pub labels: Vec<(usize, i64)>,
    pub entries: Vec<Vec<Complex64>>,
}

impl GramMatrix {
    /// `max |G_ij - d·δ_ij|`.
    pub fn max_deviation(&self, diagonal: f64) -> f64 {
        let mut worst = 0.0f64;
        for (i, row) in self.entries.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let e = if i == j { diagonal } else { 0.0 };
                worst = worst.max((v - e).norm());
            }
        }
        worst
    }
}

/// `⟨w_a, w'_b⟩` for all pairs of modes, `w` from `left`, `w'` from `right`,
/// each entry a full quadrature over `grid`.
pub fn gram_matrix(
    basis: &ModeBasis,
    left: Sector,
    right: Sector,
    t: f64,
    grid: &SphereGrid,
) -> Result<GramMatrix> {
    let l_max = basis.l_max();
    if 2 * l_max > 2 * grid.exact_degree() {
        return Err(Error::InvalidParameter(format!(
            "grid exact to degree {} cannot resolve l_max = {l_max}",
            grid.exact_degree()
        )));
    }
    let labels: Vec<(usize, i64)> =
        (0..=l_max).flat_map(|l| (-(l as i64)..=(l as i64)).map(move |m| (l, m))).collect();
    let ys = grid.harmonics(l_max);
    let sample = |sector: Sector| -> Result<Vec<(Vec<Complex64>, Vec<Complex64>)>> {
        let radials: Vec<Radial> =
            (0..=l_max).map(|l| basis.radial(l, t, sector)).collect::<Result<_>>()?;
        Ok(labels
            .iter()
            .map(|&(l, m)| {
                let k = lm_index(l, m);
                let r = radials[l];
                ys.iter().map(|row| (r.value * row[k], r.dt * row[k])).unzip()
            })
            .collect())
    };
    let ls = sample(left)?;
    let rs = sample(right)?;
    let entries = ls
        .par_iter()
        .map(|(fv, fd)| {
            rs.iter().map(|(gv, gd)| kg_pairing(basis.params(), t, grid, fv, fd, gv, gd)).collect()
        })
        .collect();
    Ok(GramMatrix { labels, entries })
}

/// Gram matrix of the positive-energy modes; should be the identity.
pub fn orthonormality_matrix(
    params: &DeSitterParams,
    l_max: usize,
    t: f64,
    grid: &SphereGrid,
) -> Result<GramMatrix> {
    gram_matrix(&ModeBasis::new(params, l_max)?, Sector::Positive, Sector::Positive, t, grid)
}

/// Partial sum of the two-point function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPoint {
    pub value: Complex64,
    /// Contribution of the last shell `l = l_max`.
    pub last_shell: Complex64,
}

/// `Σ_{l ≤ l_max} Σ_m u_{l,m}(p1) conj(u_{l,m}(p2))`.
pub fn two_point_g(basis: &ModeBasis, p1: &SpacetimePoint, p2: &SpacetimePoint) -> Result<TwoPoint> {
    let l_max = basis.l_max();
    let y1 = sph_harm_table(l_max, p1.theta, p1.phi);
    let y2 = sph_harm_table(l_max, p2.theta, p2.phi);
    let mut value = Complex64::new(0.0, 0.0);
    let mut last_shell = Complex64::new(0.0, 0.0);
    for l in 0..=l_max {
        let r1 = basis.radial(l, p1.t, Sector::Positive)?.value;
        let r2 = basis.radial(l, p2.t, Sector::Positive)?.value;
        let mut shell = Complex64::new(0.0, 0.0);
        for m in -(l as i64)..=(l as i64) {
            let k = lm_index(l, m);
            shell += y1[k] * y2[k].conj();
        }
        last_shell = r1 * r2.conj() * shell;
        value += last_shell;
    }
    Ok(TwoPoint { value, last_shell })
}

/// `(⟨f, g⟩, 2μ a(t)² ∫ f* g dΩ)`; the two agree asymptotically for large `M`.
pub fn large_mass_product_check<F: Field + ?Sized, G: Field + ?Sized>(
    params: &DeSitterParams,
    f: &F,
    g: &G,
    t: f64,
    grid: &SphereGrid,
) -> Result<(Complex64, Complex64)> {
    let (fv, fd) = f.sample(t, grid)?;
    let (gv, gd) = g.sample(t, grid)?;
    let exact = kg_pairing(params, t, grid, &fv, &fd, &gv, &gd);
    let a = scale_factor(params, t);
    let plain: Complex64 = grid
        .nodes()
        .iter()
        .enumerate()
        .map(|(k, n)| fv[k].conj() * gv[k] * n.weight)
        .sum();
    Ok((exact, plain * (2.0 * params.mu() * a * a)))
}

/// `|(□ + μ²) w| / max |w|` for a mode `w`, with the maximum taken over the
/// finite-difference stencil around `p`.
pub fn kg_residual(
    basis: &ModeBasis,
    l: usize,
    m: i64,
    sector: Sector,
    p: &SpacetimePoint,
    h: &FdSteps,
) -> Result<f64> {
    let f = |q: &SpacetimePoint| basis.mode(l, m, sector, q);
    let r = kg_operator_fd(basis.params(), f, p, h)?;
    let mut scale = 0.0f64;
    for k in -2i32..=2 {
        let d = k as f64;
        for q in [
            SpacetimePoint { t: p.t + d * h.t, ..*p },
            SpacetimePoint { theta: p.theta + d * h.theta, ..*p },
            SpacetimePoint { phi: p.phi + d * h.phi, ..*p },
        ] {
            scale = scale.max(f(&q)?.norm());
        }
    }
    if scale == 0.0 {
        return Err(Error::SmallProbe(0.0));
    }
    Ok(r.norm() / scale)
}
