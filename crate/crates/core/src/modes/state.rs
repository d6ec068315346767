//! Truncated coefficient tables `φ_{l,m}`, `0 ≤ l ≤ l_max`, `|m| ≤ l`.

use num_complex::Complex64;
use rand::Rng;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::json;
use crate::specfun::harmonics::{lm_index, table_len};

/// One-particle state in the mode basis (or, with the same layout, the
/// harmonic coefficients of a function on the sphere).
#[derive(Debug, Clone, PartialEq)]
pub struct StateCoefficients {
    l_max: usize,
    coeffs: Vec<Complex64>,
    normalized: bool,
}

impl StateCoefficients {
    pub fn zeros(l_max: usize) -> Self {
        Self { l_max, coeffs: vec![Complex64::new(0.0, 0.0); table_len(l_max)], normalized: false }
    }

    /// The basis state `φ_{l,m} = 1`.
    pub fn basis(l_max: usize, l: usize, m: i64) -> Result<Self> {
        let mut s = Self::zeros(l_max);
        s.set(l, m, Complex64::new(1.0, 0.0))?;
        s.normalized = true;
        Ok(s)
    }

    /// Table filled from `f(l, m)`.
    pub fn from_fn<F: FnMut(usize, i64) -> Complex64>(l_max: usize, mut f: F) -> Self {
        let mut s = Self::zeros(l_max);
        for l in 0..=l_max {
            for m in -(l as i64)..=(l as i64) {
                s.coeffs[lm_index(l, m)] = f(l, m);
            }
        }
        s
    }

    /// Takes ownership of a flat table laid out by
    /// [`lm_index`](crate::specfun::harmonics::lm_index).
    pub fn from_flat(l_max: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != table_len(l_max) {
            return Err(Error::InvalidParameter(format!(
                "expected {} coefficients for l_max = {l_max}, got {}",
                table_len(l_max),
                coeffs.len()
            )));
        }
        Ok(Self { l_max, coeffs, normalized: false })
    }

    /// Random state with uniformly distributed real and imaginary parts,
    /// normalized.
    pub fn random<R: Rng + ?Sized>(l_max: usize, rng: &mut R) -> Self {
        let mut s = Self::from_fn(l_max, |_, _| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        s.normalize().expect("random state is nonzero almost surely");
        s
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.coeffs
    }

    fn check(&self, l: usize, m: i64) -> Result<()> {
        if l > self.l_max || m.unsigned_abs() as usize > l {
            return Err(Error::Index { l: l as i64, m });
        }
        Ok(())
    }

    pub fn get(&self, l: usize, m: i64) -> Result<Complex64> {
        self.check(l, m)?;
        Ok(self.coeffs[lm_index(l, m)])
    }

    /// Coefficient or zero outside the table.
    pub fn get_or_zero(&self, l: usize, m: i64) -> Complex64 {
        self.get(l, m).unwrap_or_default()
    }

    pub fn set(&mut self, l: usize, m: i64, v: Complex64) -> Result<()> {
        self.check(l, m)?;
        self.coeffs[lm_index(l, m)] = v;
        self.normalized = false;
        Ok(())
    }

    /// `(l, m, φ_{l,m})` in table order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, i64, Complex64)> + '_ {
        (0..=self.l_max).flat_map(move |l| {
            (-(l as i64)..=(l as i64)).map(move |m| (l, m, self.coeffs[lm_index(l, m)]))
        })
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::InvalidParameter("cannot normalize a zero state".into()));
        }
        for c in &mut self.coeffs {
            *c /= n;
        }
        self.normalized = true;
        Ok(())
    }

    pub fn normalized(mut self) -> Result<Self> {
        self.normalize()?;
        Ok(self)
    }

    /// Same coefficients in a table of a different size; entries beyond the
    /// smaller truncation are dropped or zero.
    pub fn resized(&self, l_max: usize) -> Self {
        let mut s = Self::from_fn(l_max, |l, m| self.get_or_zero(l, m));
        s.normalized = self.normalized && l_max >= self.l_max;
        s
    }

    /// Multiplies shell `l` by `f(l)`.
    pub fn map_shells<F: Fn(usize) -> Complex64>(&self, f: F) -> Self {
        let mut s = Self::from_fn(self.l_max, |l, m| self.coeffs[lm_index(l, m)] * f(l));
        s.normalized = false;
        s
    }

    pub fn scaled(&self, a: Complex64) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c * a).collect();
        Self { l_max: self.l_max, coeffs, normalized: false }
    }

    /// `self + other`, truncated at the larger `l_max`.
    pub fn add(&self, other: &Self) -> Self {
        let l_max = self.l_max.max(other.l_max);
        Self::from_fn(l_max, |l, m| self.get_or_zero(l, m) + other.get_or_zero(l, m))
    }

    /// `Σ conj(self) · other`.
    pub fn dot(&self, other: &Self) -> Complex64 {
        self.iter().map(|(l, m, a)| a.conj() * other.get_or_zero(l, m)).sum()
    }

    /// Largest coefficient-wise distance, over the union of both tables.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let l_max = self.l_max.max(other.l_max);
        let a = self.resized(l_max);
        let b = other.resized(l_max);
        a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> Value {
        let coeffs = self
            .iter()
            .map(|(l, m, c)| {
                json::object([
                    ("l", Value::from(l)),
                    ("m", Value::from(m)),
                    ("re", json::num(c.re)),
                    ("im", json::num(c.im)),
                ])
            })
            .collect();
        json::object([("l_max", Value::from(self.l_max)), ("coeffs", Value::Array(coeffs))])
    }

    /// Parses `{"l_max": n, "coeffs": [{"l", "m", "re", "im"}, …]}`.
    /// Missing entries are zero.
    pub fn from_json(v: &Value) -> Result<Self> {
        let l_max = v
            .get("l_max")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Schema("state needs an integer \"l_max\"".into()))?
            as usize;
        let list = v
            .get("coeffs")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Schema("state needs a \"coeffs\" array".into()))?;
        let mut s = Self::zeros(l_max);
        for (i, e) in list.iter().enumerate() {
            let bad = || Error::Schema(format!("malformed coefficient entry {i}"));
            let l = e.get("l").and_then(Value::as_u64).ok_or_else(bad)? as usize;
            let m = e.get("m").and_then(Value::as_i64).ok_or_else(bad)?;
            let re = e.get("re").and_then(json::as_f64).ok_or_else(bad)?;
            let im = e.get("im").and_then(json::as_f64).unwrap_or(0.0);
            s.set(l, m, Complex64::new(re, im))
                .map_err(|_| Error::Schema(format!("entry {i} has out-of-range index ({l}, {m})")))?;
        }
        Ok(s)
    }
}
