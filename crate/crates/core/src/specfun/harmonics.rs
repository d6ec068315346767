//! Orthonormal spherical harmonics with the Condon–Shortley phase.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Flat index of `(l, m)` in a triangular table: `l² + l + m`.
#[inline]
pub fn lm_index(l: usize, m: i64) -> usize {
    ((l * l + l) as i64 + m) as usize
}

/// Number of `(l, m)` entries with `l ≤ l_max`.
#[inline]
pub fn table_len(l_max: usize) -> usize {
    (l_max + 1) * (l_max + 1)
}

/// Normalized associated Legendre values `N_l^m P_l^m(cos θ)` for
/// `0 ≤ m ≤ l ≤ l_max`, Condon–Shortley phase included, indexed by
/// [`lm_index`] with nonnegative `m`.
pub fn normalized_legendre_table(l_max: usize, theta: f64) -> Vec<f64> {
    let (st, ct) = theta.sin_cos();
    let mut out = vec![0.0; table_len(l_max)];
    let mut pmm = (1.0 / (4.0 * PI)).sqrt();
    for m in 0..=l_max {
        if m > 0 {
            let mf = m as f64;
            pmm *= -((2.0 * mf + 1.0) / (2.0 * mf)).sqrt() * st;
        }
        out[lm_index(m, m as i64)] = pmm;
        if m == l_max {
            break;
        }
        let mf = m as f64;
        let mut p_prev = pmm;
        let mut p_cur = (2.0 * mf + 3.0).sqrt() * ct * pmm;
        out[lm_index(m + 1, m as i64)] = p_cur;
        for l in (m + 2)..=l_max {
            let lf = l as f64;
            let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
            let b = (((lf - 1.0).powi(2) - mf * mf) / (4.0 * (lf - 1.0).powi(2) - 1.0)).sqrt();
            let p_next = a * (ct * p_cur - b * p_prev);
            out[lm_index(l, m as i64)] = p_next;
            p_prev = p_cur;
            p_cur = p_next;
        }
    }
    out
}

/// All `Y_l^m(θ, φ)` with `l ≤ l_max`, indexed by [`lm_index`].
pub fn sph_harm_table(l_max: usize, theta: f64, phi: f64) -> Vec<Complex64> {
    let leg = normalized_legendre_table(l_max, theta);
    let mut out = vec![Complex64::new(0.0, 0.0); table_len(l_max)];
    for l in 0..=l_max {
        for m in 0..=l {
            let e = Complex64::from_polar(1.0, m as f64 * phi);
            let y = e * leg[lm_index(l, m as i64)];
            out[lm_index(l, m as i64)] = y;
            if m > 0 {
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                out[lm_index(l, -(m as i64))] = y.conj() * sign;
            }
        }
    }
    out
}

/// `Y_l^m(θ, φ)`, orthonormal on the unit sphere.
pub fn spherical_harmonic(l: usize, m: i64, theta: f64, phi: f64) -> Result<Complex64> {
    if m.unsigned_abs() as usize > l {
        return Err(Error::Index { l: l as i64, m });
    }
    let leg = normalized_legendre_table(l, theta);
    let ma = m.unsigned_abs() as usize;
    let y = Complex64::from_polar(1.0, ma as f64 * phi) * leg[lm_index(l, ma as i64)];
    if m >= 0 {
        Ok(y)
    } else {
        let sign = if ma % 2 == 0 { 1.0 } else { -1.0 };
        Ok(y.conj() * sign)
    }
}

/// Legendre polynomial `P_l(x)` by the three-term recurrence.
pub fn legendre_p(l: usize, x: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, x);
    if l == 0 {
        return p0;
    }
    for k in 1..l {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p1
}
