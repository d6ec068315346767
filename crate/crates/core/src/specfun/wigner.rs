//! Wigner 3-j symbols and rotation matrices.

use num_complex::Complex64;

use super::gamma::factorial;

fn fact(n: i64) -> f64 {
    debug_assert!(n >= 0);
    factorial(n as usize)
}

fn triangle(a: i64, b: i64, c: i64) -> bool {
    c >= (a - b).abs() && c <= a + b
}

/// Wigner 3-j symbol `(j1 j2 j3; m1 m2 m3)` for integer arguments, by the
/// Racah formula.
pub fn three_j(j1: i64, j2: i64, j3: i64, m1: i64, m2: i64, m3: i64) -> f64 {
    if m1 + m2 + m3 != 0 || !triangle(j1, j2, j3) {
        return 0.0;
    }
    if m1.abs() > j1 || m2.abs() > j2 || m3.abs() > j3 {
        return 0.0;
    }
    let delta = (fact(j1 + j2 - j3) * fact(j1 - j2 + j3) * fact(-j1 + j2 + j3)
        / fact(j1 + j2 + j3 + 1))
    .sqrt();
    let pre = (fact(j1 + m1)
        * fact(j1 - m1)
        * fact(j2 + m2)
        * fact(j2 - m2)
        * fact(j3 + m3)
        * fact(j3 - m3))
    .sqrt();
    let kmin = 0.max(j2 - j3 - m1).max(j1 - j3 + m2);
    let kmax = (j1 + j2 - j3).min(j1 - m1).min(j2 + m2);
    let mut sum = 0.0;
    for k in kmin..=kmax {
        let den = fact(k)
            * fact(j1 + j2 - j3 - k)
            * fact(j1 - m1 - k)
            * fact(j2 + m2 - k)
            * fact(j3 - j2 + m1 + k)
            * fact(j3 - j1 - m2 + k);
        let s = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += s / den;
    }
    let phase = if (j1 - j2 - m3).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    phase * delta * pre * sum
}

/// Wigner small-d matrix element `d^j_{m' m}(β)`.
pub fn small_d(j: i64, mp: i64, m: i64, beta: f64) -> f64 {
    if mp.abs() > j || m.abs() > j {
        return 0.0;
    }
    let (s, c) = (0.5 * beta).sin_cos();
    let pre = (fact(j + mp) * fact(j - mp) * fact(j + m) * fact(j - m)).sqrt();
    let kmin = 0.max(m - mp);
    let kmax = (j + m).min(j - mp);
    let mut sum = 0.0;
    for k in kmin..=kmax {
        let den = fact(j + m - k) * fact(k) * fact(j - k - mp) * fact(k - m + mp);
        let sign = if (k - m + mp).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        sum += sign * c.powi((2 * j - 2 * k + m - mp) as i32) * s.powi((2 * k - m + mp) as i32)
            / den;
    }
    pre * sum
}

/// Euler angles in the z-y-z convention: `R = R_z(α) R_y(β) R_z(γ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerAngles {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl EulerAngles {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Self {
        EulerAngles { alpha, beta, gamma }
    }

    /// Active rotation matrix acting on Cartesian vectors.
    pub fn matrix(&self) -> [[f64; 3]; 3] {
        let rz = |a: f64| {
            let (s, c) = a.sin_cos();
            [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]
        };
        let (sb, cb) = self.beta.sin_cos();
        let ry = [[cb, 0.0, sb], [0.0, 1.0, 0.0], [-sb, 0.0, cb]];
        matmul(&matmul(&rz(self.alpha), &ry), &rz(self.gamma))
    }
}

fn matmul(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut c = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

/// `D^j_{m' m}(α, β, γ) = e^{-i m' α} d^j_{m' m}(β) e^{-i m γ}`.
///
/// With `(R f)(x) = f(R⁻¹ x)` one has `R Y_l^m = Σ_{m'} D^l_{m' m} Y_l^{m'}`.
pub fn wigner_d(j: i64, mp: i64, m: i64, angles: &EulerAngles) -> Complex64 {
    let d = small_d(j, mp, m, angles.beta);
    Complex64::from_polar(d, -(mp as f64) * angles.alpha - (m as f64) * angles.gamma)
}

/// Full `(2j+1)²` matrix, row index `m' + j`, column index `m + j`.
pub fn wigner_d_matrix(j: i64, angles: &EulerAngles) -> Vec<Vec<Complex64>> {
    (-j..=j)
        .map(|mp| (-j..=j).map(|m| wigner_d(j, mp, m, angles)).collect())
        .collect()
}
