//! Ferrers functions of complex degree and half-integer order on the
//! imaginary axis.
//!
//! The function evaluated here is
//!
//! ```text
//! T_ν^σ(z) = Γ(ν+σ+1)/Γ(ν-σ+1) · 𝖯_ν^{-σ}(z)
//!          = Γ(ν+σ+1)/(Γ(ν-σ+1) Γ(1+σ)) · ((1-z)/(1+z))^{σ/2} · F(ν+1, -ν; 1+σ; (1-z)/2)
//! ```
//!
//! continued analytically off the cuts `(-∞,-1] ∪ [1,∞)`. This normalization
//! is the one for which `T(0)` has the closed form in [`ferrers_t_zero`],
//! the Wronskian of `T(z)` and `T(-z)` equals [`wronskian_rhs`], and
//! `conj T(z) = ±T(-z)` on the imaginary axis (`+` for real `ν`, `-` for
//! `ν = -1/2 + iL`).
//!
//! Two evaluation routes are used:
//!
//! * the Gauss series in `x = (1-z)/2` for `|x| ≤` [`SERIES_RADIUS`], accepted
//!   when its rounding estimate is below [`SERIES_ACCEPT`];
//! * otherwise Taylor-series continuation of the Legendre equation from
//!   `z = 0`, starting from the closed forms of `T(0)` and `T'(0)`.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::gamma::{gamma, ln_gamma};
use crate::error::{Error, Result};
use crate::geometry::DeSitterParams;

/// Largest `|(1-z)/2|` at which the hypergeometric series is attempted.
pub const SERIES_RADIUS: f64 = 0.75;
/// Estimated relative rounding error above which the series is rejected.
pub const SERIES_ACCEPT: f64 = 1e-13;
/// Local truncation tolerance for each continuation step.
pub const STEP_TOL: f64 = 1e-17;

const MAX_SERIES_TERMS: usize = 20_000;
const MAX_TAYLOR_TERMS: usize = 80;
const MAX_STEPS: usize = 2_000_000;
/// Phase advance allowed per continuation step, in radians.
const STEP_PHASE: f64 = 1.0;

/// Degree and half-integer order `σ = l + 1/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderDegree {
    nu: Complex64,
    l: usize,
}

impl OrderDegree {
    /// Fails unless `σ - 1/2` is a nonnegative integer.
    pub fn new(nu: Complex64, sigma: f64) -> Result<Self> {
        let l = sigma - 0.5;
        if !(l >= 0.0 && l == l.round() && l < 1e6) {
            return Err(Error::InvalidParameter(format!(
                "order must be l + 1/2 with l a nonnegative integer, got {sigma}"
            )));
        }
        Ok(Self { nu, l: l as usize })
    }

    /// Order `l + 1/2` for the degree belonging to `params`.
    pub fn for_shell(params: &DeSitterParams, l: usize) -> Self {
        Self { nu: params.nu(), l }
    }

    pub fn nu(&self) -> Complex64 {
        self.nu
    }

    pub fn sigma(&self) -> f64 {
        self.l as f64 + 0.5
    }

    pub fn l(&self) -> usize {
        self.l
    }
}

/// Argument `z = i sinh(t/α)` belonging to a time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FerrersArg {
    t: f64,
    z: Complex64,
}

impl FerrersArg {
    pub fn at_time(t: f64, alpha: f64) -> Self {
        Self { t, z: Complex64::new(0.0, (t / alpha).sinh()) }
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    /// The mirrored argument `-z`, i.e. time `-t`.
    pub fn mirrored(&self) -> Self {
        Self { t: -self.t, z: -self.z }
    }
}

/// Which route produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    Series,
    Continuation,
}

/// Value and the first two `z`-derivatives of `T_ν^σ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FerrersEval {
    pub value: Complex64,
    pub d1: Complex64,
    pub d2: Complex64,
    pub route: Route,
    /// Estimated relative error (rounding estimate for the series; step
    /// tolerance times step count for the continuation).
    pub error_estimate: f64,
}

fn exp_sum(terms: &[Result<Complex64>]) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for t in terms {
        acc += t.clone()?;
    }
    Ok(acc.exp())
}

/// `1/Γ(z)`, zero at the poles.
fn rgamma(z: Complex64) -> Complex64 {
    match ln_gamma(z) {
        Ok(lg) => (-lg).exp(),
        Err(_) => Complex64::new(0.0, 0.0),
    }
}

fn check_off_cut(z: Complex64) -> Result<()> {
    if z.im == 0.0 && z.re.abs() >= 1.0 {
        return Err(Error::OnCut { re: z.re, im: z.im });
    }
    Ok(())
}

/// Per-shell constants for repeated evaluation of `T_ν^{l+1/2}`.
#[derive(Debug, Clone, Copy)]
pub struct FerrersShell {
    od: OrderDegree,
    prefactor: Complex64,
    t0: Complex64,
    dt0: Complex64,
}

impl FerrersShell {
    pub fn new(od: OrderDegree) -> Result<Self> {
        let nu = od.nu;
        let s = od.sigma();
        let one = Complex64::new(1.0, 0.0);
        let ratio = exp_sum(&[ln_gamma(nu + s + 1.0), ln_gamma(nu - s + 1.0).map(|v| -v)])?;
        let prefactor = ratio / super::gamma::gamma_real(1.0 + s)?;

        let sqrt_pi = PI.sqrt();
        let t0 = ratio
            * rgamma((one * s - nu + 1.0) * 0.5)
            * rgamma((nu + s) * 0.5 + 1.0)
            * sqrt_pi
            * 2f64.powf(-s);
        let dt0 = -ratio
            * rgamma((nu + s + 1.0) * 0.5)
            * rgamma((one * s - nu) * 0.5)
            * sqrt_pi
            * 2f64.powf(1.0 - s);
        Ok(Self { od, prefactor, t0, dt0 })
    }

    pub fn order_degree(&self) -> OrderDegree {
        self.od
    }

    /// `T(0)` and `T'(0)` from their closed forms.
    pub fn at_origin(&self) -> (Complex64, Complex64) {
        (self.t0, self.dt0)
    }

    /// Evaluates with the series when it is accurate, otherwise by
    /// continuation.
    pub fn eval(&self, z: Complex64) -> Result<FerrersEval> {
        check_off_cut(z)?;
        if ((Complex64::new(1.0, 0.0) - z) * 0.5).norm() <= SERIES_RADIUS {
            if let Ok(ev) = self.series(z) {
                if ev.error_estimate <= SERIES_ACCEPT {
                    return Ok(ev);
                }
            }
        }
        self.continued(z)
    }

    /// Gauss hypergeometric series route.
    pub fn series(&self, z: Complex64) -> Result<FerrersEval> {
        check_off_cut(z)?;
        let one = Complex64::new(1.0, 0.0);
        let x = (one - z) * 0.5;
        if x.norm() >= 1.0 {
            return Err(Error::Convergence(format!("series outside its disc at z = {z}")));
        }
        let nu = self.od.nu;
        let s = self.od.sigma();
        let (a, b, c) = (nu + 1.0, -nu, 1.0 + s);

        let mut term = one;
        let (mut s0, mut s1, mut s2) = (one, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        let (mut a0, mut a1) = (1.0f64, 0.0f64);
        let mut quiet = 0;
        let mut converged = false;
        for k in 0..MAX_SERIES_TERMS {
            let kf = k as f64;
            let ratio = (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * x;
            term *= ratio;
            let k1 = kf + 1.0;
            s0 += term;
            s1 += term * k1;
            s2 += term * (k1 * kf);
            let tn = term.norm();
            a0 += tn;
            a1 += tn * k1;
            let small = tn * k1 * k1 <= 1e-17 * (s0.norm() + s1.norm() + s2.norm()).max(f64::MIN_POSITIVE);
            if term == Complex64::new(0.0, 0.0) || (small && ratio.norm() < 1.0) {
                quiet += 1;
                if quiet >= 3 || term == Complex64::new(0.0, 0.0) {
                    converged = true;
                    break;
                }
            } else {
                quiet = 0;
            }
        }
        if !converged {
            return Err(Error::Convergence(format!("series did not converge at z = {z}")));
        }
        let eps = f64::EPSILON;
        let e0 = 8.0 * eps * a0 / s0.norm();
        let e1 = if s1.norm() > 0.0 { 8.0 * eps * a1 / s1.norm() } else { 0.0 };

        let f = s0;
        let fp = s1 / x;
        let fpp = s2 / (x * x);
        let w = (one - z) / (one + z);
        let g = (w.ln() * (s * 0.5)).exp();
        let a2 = one - z * z;
        let cg = self.prefactor * g;
        let value = cg * f;
        let d1 = cg * (-f * s / a2 - fp * 0.5);
        let d2 = cg * (f * s * (-z * 2.0 + s) / (a2 * a2) + fp * s / a2 + fpp * 0.25);
        Ok(FerrersEval { value, d1, d2, route: Route::Series, error_estimate: e0.max(e1) })
    }

    /// Continuation route: Taylor steps of the Legendre equation along the
    /// segment from `0` to `z`.
    pub fn continued(&self, z: Complex64) -> Result<FerrersEval> {
        check_off_cut(z)?;
        let mut last = None;
        let steps = self.walk(z, |_, ev| last = Some(*ev))?;
        let mut ev = last.expect("walk visits the endpoint");
        ev.error_estimate = STEP_TOL * (steps.max(1) as f64) * 10.0;
        Ok(ev)
    }

    /// Same as [`FerrersShell::continued`] but reports every intermediate
    /// node. Nodes are spaced so that the phase of `T` advances by roughly
    /// one radian at most between neighbours.
    pub fn trajectory(&self, z: Complex64) -> Result<Vec<(Complex64, Complex64)>> {
        check_off_cut(z)?;
        let mut out = vec![(Complex64::new(0.0, 0.0), self.t0)];
        self.walk(z, |zz, ev| out.push((zz, ev.value)))?;
        Ok(out)
    }

    fn walk<F>(&self, target: Complex64, mut visit: F) -> Result<usize>
    where
        F: FnMut(Complex64, &FerrersEval),
    {
        let nu = self.od.nu;
        let s = self.od.sigma();
        let a = nu * (nu + 1.0);
        let lam2 = s * s;
        let total = target.norm();
        let mut z0 = Complex64::new(0.0, 0.0);
        let mut y = [self.t0, self.dt0];
        if total == 0.0 {
            visit(z0, &FerrersEval {
                value: y[0],
                d1: y[1],
                d2: -(y[0] * (a - lam2)),
                route: Route::Continuation,
                error_estimate: 0.0,
            });
            return Ok(0);
        }
        let dir = target / total;
        let mut travelled = 0.0;
        let mut steps = 0usize;
        let mut coeffs: Vec<Complex64> = Vec::with_capacity(MAX_TAYLOR_TERMS + 3);
        while travelled < total {
            if steps >= MAX_STEPS {
                return Err(Error::Convergence(format!("too many continuation steps towards z = {target}")));
            }
            let a0 = Complex64::new(1.0, 0.0) - z0 * z0;
            let rho = (Complex64::new(1.0, 0.0) - z0).norm().min((Complex64::new(1.0, 0.0) + z0).norm());
            let an = a0.norm();
            let kz = (a.norm() / an + lam2 / (an * an)).sqrt();
            let mut hlen = (0.4 * rho).min(STEP_PHASE / kz.max(1e-300)).min(total - travelled);
            let remaining_after = total - travelled - hlen;
            if remaining_after < 1e-14 * total {
                hlen = total - travelled;
            }
            let d2 = loop {
                let h = dir * hlen;
                match taylor_step(z0, &y, a, lam2, h, &mut coeffs) {
                    Some((v, d1, dd2)) => {
                        y = [v, d1];
                        break dd2;
                    }
                    None => {
                        hlen *= 0.5;
                        if hlen < 1e-12 * total.max(1.0) {
                            return Err(Error::Convergence(format!(
                                "continuation step collapsed near z = {z0}"
                            )));
                        }
                    }
                }
            };
            travelled += hlen;
            steps += 1;
            z0 = if travelled >= total { target } else { dir * travelled };
            visit(z0, &FerrersEval {
                value: y[0],
                d1: y[1],
                d2,
                route: Route::Continuation,
                error_estimate: 0.0,
            });
        }
        Ok(steps)
    }
}

/// One Taylor step of
/// `(1-z²)² T'' - 2z(1-z²) T' + [a(1-z²) - λ²] T = 0`
/// from `z0` to `z0 + h`. Returns `None` if the series has not settled
/// within the term budget.
fn taylor_step(
    z0: Complex64,
    y: &[Complex64; 2],
    a: Complex64,
    lam2: f64,
    h: Complex64,
    c: &mut Vec<Complex64>,
) -> Option<(Complex64, Complex64, Complex64)> {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    // 1 - z² = A0 + A1 w + A2 w², with z = z0 + w.
    let (a0, a1, a2) = (one - z0 * z0, -z0 * 2.0, -one);
    let p = [a0 * a0, a0 * a1 * 2.0, a1 * a1 + a0 * a2 * 2.0, a1 * a2 * 2.0, a2 * a2];
    let q = [-z0 * a0 * 2.0, -(z0 * a1 + a0) * 2.0, -(z0 * a2 + a1) * 2.0, -a2 * 2.0];
    let r = [a * a0 - lam2, a * a1, a * a2];

    c.clear();
    c.push(y[0]);
    c.push(y[1]);
    let coef = |c: &Vec<Complex64>, i: isize| if i < 0 { zero } else { c[i as usize] };

    let mut value = c[0] + c[1] * h;
    let mut d1 = c[1];
    let mut d2 = zero;
    let mut hk = h; // h^(k-1) for the coefficient being added
    let mut quiet = 0;
    for n in 0..MAX_TAYLOR_TERMS {
        let ni = n as isize;
        let mut acc = zero;
        for (j, pj) in p.iter().enumerate().skip(1) {
            let k = ni - j as isize + 2;
            if k >= 0 {
                acc += *pj * ((k * (k - 1)) as f64) * coef(c, k);
            }
        }
        for (j, qj) in q.iter().enumerate() {
            let k = ni - j as isize + 1;
            if k >= 0 {
                acc += *qj * (k as f64) * coef(c, k);
            }
        }
        for (j, rj) in r.iter().enumerate() {
            acc += *rj * coef(c, ni - j as isize);
        }
        let next = -acc / (p[0] * (((n + 2) * (n + 1)) as f64));
        c.push(next);
        let k = n + 2;
        // hk currently h^(k-2); derivative terms use h^(k-1), h^(k-2).
        let hkm2 = if k == 2 { one } else { hk };
        let hkm1 = hkm2 * h;
        let t_val = next * hkm1 * h;
        let t_d1 = next * hkm1 * (k as f64);
        let t_d2 = next * hkm2 * ((k * (k - 1)) as f64);
        value += t_val;
        d1 += t_d1;
        d2 += t_d2;
        hk = hkm1;
        let scale = value.norm().max(f64::MIN_POSITIVE);
        let dscale = d1.norm().max(f64::MIN_POSITIVE);
        if t_val.norm() <= STEP_TOL * scale && t_d1.norm() <= STEP_TOL * (dscale + scale / h.norm()) {
            quiet += 1;
            if quiet >= 3 {
                return Some((value, d1, d2));
            }
        } else {
            quiet = 0;
        }
    }
    None
}

/// `T_ν^σ` at a physical argument.
pub fn ferrers_t(od: &OrderDegree, arg: &FerrersArg) -> Result<Complex64> {
    Ok(FerrersShell::new(*od)?.eval(arg.z())?.value)
}

/// `T_ν^σ` and its `z`-derivatives at an arbitrary point off the cuts.
pub fn ferrers_t_eval(od: &OrderDegree, z: Complex64) -> Result<FerrersEval> {
    FerrersShell::new(*od)?.eval(z)
}

/// Closed form of `T_ν^σ(0)`:
/// `√π 2^{-σ} Γ(ν+σ+1) / [Γ(ν-σ+1) Γ((σ-ν+1)/2) Γ((ν+σ)/2+1)]`.
pub fn ferrers_t_zero(od: &OrderDegree) -> Result<Complex64> {
    let nu = od.nu;
    let s = od.sigma();
    let one = Complex64::new(1.0, 0.0);
    let num = gamma(nu + s + 1.0)?;
    let den = gamma(nu - s + 1.0)? * gamma((one * s - nu + 1.0) * 0.5)? * gamma((nu + s) * 0.5 + 1.0)?;
    Ok(num / den * PI.sqrt() * 2f64.powf(-s))
}

/// Right-hand side of the Wronskian identity
/// `(1-z²)[T(z) d/dz T(-z) - T(-z) T'(z)] = 2 sin[(ν-σ)π] / (sin[(ν+σ)π] Γ(-ν-σ) Γ(ν-σ+1))`.
pub fn wronskian_rhs(od: &OrderDegree) -> Result<Complex64> {
    let nu = od.nu;
    let s = od.sigma();
    let den_sin = ((nu + s) * PI).sin();
    if den_sin.norm() < 1e-14 {
        return Err(Error::Degenerate(format!("sin[(ν+σ)π] vanishes for ν = {nu}, σ = {s}")));
    }
    let num = ((nu - s) * PI).sin() * 2.0;
    let g = exp_sum(&[ln_gamma(-nu - s), ln_gamma(nu - s + 1.0)])?;
    Ok(num / (den_sin * g))
}

/// `γ_l = Γ(-ν-l-1/2) Γ(ν-l+1/2)`, real for the physical degrees.
pub fn gamma_l(params: &DeSitterParams, l: usize) -> Result<f64> {
    let nu = params.nu();
    let lf = l as f64;
    let g = exp_sum(&[ln_gamma(-nu - lf - 0.5), ln_gamma(nu - lf + 0.5)])?;
    if g.im.abs() > 1e-12 * g.norm() {
        return Err(Error::Degenerate(format!("γ_{l} has imaginary part {} (value {g})", g.im)));
    }
    Ok(g.re)
}

/// The phase `N(ν)`: `1` for real `ν`, `-i` for `Im ν > 0`, `i` for `Im ν < 0`.
pub fn phase_n(nu: Complex64) -> Complex64 {
    if nu.im > 0.0 {
        Complex64::new(0.0, -1.0)
    } else if nu.im < 0.0 {
        Complex64::new(0.0, 1.0)
    } else {
        Complex64::new(1.0, 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::NuBranch;

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    fn od(m: f64, l: usize) -> OrderDegree {
        OrderDegree::for_shell(&DeSitterParams::new(1.0, m).unwrap(), l)
    }

    #[test]
    fn order_must_be_half_integer() {
        assert!(OrderDegree::new(Complex64::new(0.3, 0.0), 1.5).is_ok());
        assert!(OrderDegree::new(Complex64::new(0.3, 0.0), 1.0).is_err());
        assert!(OrderDegree::new(Complex64::new(0.3, 0.0), -0.5).is_err());
    }

    #[test]
    fn closed_form_origin_matches_series() {
        for &m in &[0.5, 2.5] {
            for l in 0..=16 {
                let o = od(m, l);
                let shell = FerrersShell::new(o).unwrap();
                let closed = ferrers_t_zero(&o).unwrap();
                let ser = shell.series(Complex64::new(0.0, 0.0)).unwrap();
                assert!(rel(ser.value, closed) < 1e-12, "M={m} l={l}");
                assert!(rel(shell.at_origin().0, closed) < 1e-12);
                assert!(rel(ser.d1, shell.at_origin().1) < 1e-12, "derivative M={m} l={l}");
            }
        }
    }

    #[test]
    fn routes_agree_inside_series_disc() {
        for &m in &[0.5, 2.5, 7.0] {
            for &l in &[0usize, 1, 4, 9] {
                let shell = FerrersShell::new(od(m, l)).unwrap();
                for &t in &[-0.8, -0.3, 0.2, 0.6, 0.9] {
                    let z = Complex64::new(0.0, f64::sinh(t));
                    let a = shell.series(z).unwrap();
                    let b = shell.continued(z).unwrap();
                    assert!(rel(a.value, b.value) < 1e-11, "value M={m} l={l} t={t}");
                    assert!(rel(a.d1, b.d1) < 1e-11, "d1 M={m} l={l} t={t}");
                    assert!(rel(a.d2, b.d2) < 1e-10, "d2 M={m} l={l} t={t}");
                }
            }
        }
    }

    #[test]
    fn conjugation_symmetry_on_imaginary_axis() {
        for &(m, sign) in &[(0.5, 1.0), (2.5, -1.0)] {
            for l in 0..=8 {
                let shell = FerrersShell::new(od(m, l)).unwrap();
                for k in -10..=10 {
                    let t = 0.2 * k as f64;
                    let z = Complex64::new(0.0, t.sinh());
                    let a = shell.eval(z).unwrap().value;
                    let b = shell.eval(-z).unwrap().value;
                    assert!(rel(a.conj(), b * sign) < 1e-10, "M={m} l={l} t={t}");
                }
            }
        }
    }

    #[test]
    fn wronskian_identity() {
        for &m in &[0.5, 2.5] {
            for l in 0..=3 {
                let o = od(m, l);
                let shell = FerrersShell::new(o).unwrap();
                let rhs = wronskian_rhs(&o).unwrap();
                for &t in &[0.0, 0.3, 1.0, 2.5] {
                    let z = Complex64::new(0.0, f64::sinh(t));
                    let p = shell.eval(z).unwrap();
                    let n = shell.eval(-z).unwrap();
                    // d/dz T(-z) = -T'(-z)
                    let lhs = (Complex64::new(1.0, 0.0) - z * z) * (p.value * (-n.d1) - n.value * p.d1);
                    assert!(rel(lhs, rhs) < 1e-8, "M={m} l={l} t={t}: {lhs} vs {rhs}");
                }
            }
        }
    }

    #[test]
    fn legendre_ode_residual() {
        for &m in &[0.5, 2.5] {
            for l in 0..=4 {
                let o = od(m, l);
                let shell = FerrersShell::new(o).unwrap();
                let a = o.nu() * (o.nu() + 1.0);
                let lam2 = o.sigma().powi(2);
                for &t in &[0.1, 0.5, 0.9, 1.8] {
                    let z = Complex64::new(0.0, f64::sinh(t));
                    let e = shell.eval(z).unwrap();
                    let w = Complex64::new(1.0, 0.0) - z * z;
                    let res = w * e.d2 - z * 2.0 * e.d1 + (a - lam2 / w) * e.value;
                    let scale = (w * e.d2).norm() + (z * 2.0 * e.d1).norm() + ((a - lam2 / w) * e.value).norm();
                    assert!(res.norm() <= 1e-7 * scale, "M={m} l={l} t={t}");
                }
            }
        }
    }

    #[test]
    fn gamma_l_signs_and_recursion() {
        for &(m, positive) in &[(2.5, true), (0.5, false)] {
            let p = DeSitterParams::new(1.0, m).unwrap();
            let g0 = gamma_l(&p, 0).unwrap();
            let mut prod = 1.0;
            for l in 0..=16usize {
                let g = gamma_l(&p, l).unwrap();
                assert_eq!(g > 0.0, positive, "M={m} l={l}");
                if l > 0 {
                    prod *= (l * l) as f64 + m * m - 1.0;
                }
                let expect = prod / g0;
                assert!(((1.0 / g) - expect).abs() <= 1e-10 * expect.abs(), "recursion M={m} l={l}");
            }
        }
        let p = DeSitterParams::new(1.0, 2.5).unwrap();
        let big_l = (2.5f64 * 2.5 - 1.0).sqrt();
        let inv = big_l / PI * (big_l * PI).sinh();
        assert!((1.0 / gamma_l(&p, 0).unwrap() - inv).abs() < 1e-12 * inv);
        // 1/γ_0 = -(ν+1/2) cos(νπ)/π for the complementary series
        let p = DeSitterParams::new(1.0, 0.5).unwrap();
        let nu = p.nu().re;
        let inv = -(nu + 0.5) * (nu * PI).cos() / PI;
        assert!((1.0 / gamma_l(&p, 0).unwrap() - inv).abs() < 1e-12 * inv.abs());
    }

    #[test]
    fn gamma_l_is_branch_symmetric() {
        for &m in &[0.5, 2.5] {
            let a = DeSitterParams::with_branch(1.0, m, NuBranch::Plus).unwrap();
            let b = DeSitterParams::with_branch(1.0, m, NuBranch::Minus).unwrap();
            for l in 0..6 {
                let (ga, gb) = (gamma_l(&a, l).unwrap(), gamma_l(&b, l).unwrap());
                assert!((ga - gb).abs() < 1e-12 * ga.abs());
            }
        }
    }

    #[test]
    fn phase_indicator() {
        assert_eq!(phase_n(Complex64::new(-0.3, 0.0)), Complex64::new(1.0, 0.0));
        assert_eq!(phase_n(Complex64::new(-0.5, 2.0)), Complex64::new(0.0, -1.0));
        assert_eq!(phase_n(Complex64::new(-0.5, -2.0)), Complex64::new(0.0, 1.0));
    }

    #[test]
    fn sign_of_origin_value_alternates() {
        let p = DeSitterParams::new(1.0, 0.5).unwrap();
        for l in 0..=20 {
            let v = phase_n(p.nu()) * ferrers_t_zero(&OrderDegree::for_shell(&p, l)).unwrap();
            assert!(v.im.abs() < 1e-12 * v.norm());
            assert_eq!(v.re > 0.0, l % 2 == 0, "l = {l}");
        }
    }

    #[test]
    fn cut_is_rejected() {
        let shell = FerrersShell::new(od(2.5, 1)).unwrap();
        assert!(matches!(shell.eval(Complex64::new(1.5, 0.0)), Err(Error::OnCut { .. })));
        assert!(matches!(shell.eval(Complex64::new(-1.0, 0.0)), Err(Error::OnCut { .. })));
    }

    #[test]
    fn degenerate_wronskian_is_reported() {
        // ν + σ integer makes sin[(ν+σ)π] vanish.
        let o = OrderDegree::new(Complex64::new(0.5, 0.0), 0.5).unwrap();
        assert!(matches!(wronskian_rhs(&o), Err(Error::Degenerate(_))));
    }
}
