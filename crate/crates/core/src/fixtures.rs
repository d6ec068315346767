//! Golden-value fixture packs: loading and verification.
//!
//! A pack is one JSON document
//!
//! ```text
//! { "header": {"generator_version", "digits", "grid_spec"},
//!   "records": [{"function_id", "inputs": [{"name","re","im"}],
//!                "value": {"re","im"}, "abs_tol", "rel_tol", "provenance"}] }
//! ```
//!
//! with every number stored as a decimal string. A record passes when
//! `|computed - value| ≤ abs_tol + rel_tol · |value|`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::{DeSitterParams, SpacetimePoint};
use crate::json;
use crate::modes::{mode_u, two_point_g, ModeBasis, SphereGrid};
use crate::newton_wigner::{omega_ds, zeta_phase};
use crate::specfun::{ferrers_t, ferrers_t_zero, gamma, gamma_l, three_j, wronskian_rhs, FerrersArg, OrderDegree};
use crate::symmetry::{ladder_coefficients, GeneratorId};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureHeader {
    pub generator_version: String,
    pub digits: u32,
    pub grid_spec: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledInput {
    pub name: String,
    pub re: String,
    pub im: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecimalComplex {
    pub re: String,
    pub im: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureRecord {
    pub function_id: String,
    pub inputs: Vec<LabeledInput>,
    pub value: DecimalComplex,
    pub abs_tol: String,
    pub rel_tol: String,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixturePack {
    pub header: FixtureHeader,
    pub records: Vec<FixtureRecord>,
}

/// Functions a record may name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FunctionId {
    Gamma,
    FerrersT,
    FerrersT0,
    GammaL,
    WronskianRhs,
    ThreeJ,
    Zeta,
    OmegaDs,
    ModeU,
    TwoPoint,
    LadderN03,
}

impl FunctionId {
    pub const ALL: [FunctionId; 11] = [
        Self::Gamma,
        Self::FerrersT,
        Self::FerrersT0,
        Self::GammaL,
        Self::WronskianRhs,
        Self::ThreeJ,
        Self::Zeta,
        Self::OmegaDs,
        Self::ModeU,
        Self::TwoPoint,
        Self::LadderN03,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Gamma => "gamma",
            Self::FerrersT => "ferrers_t",
            Self::FerrersT0 => "ferrers_t0",
            Self::GammaL => "gamma_l",
            Self::WronskianRhs => "wronskian_rhs",
            Self::ThreeJ => "three_j",
            Self::Zeta => "zeta",
            Self::OmegaDs => "omega_ds",
            Self::ModeU => "mode_u",
            Self::TwoPoint => "two_point",
            Self::LadderN03 => "ladder_n03",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == s)
    }
}

fn parse_decimal(s: &str, what: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::Schema(format!("{what}: '{s}' is not a decimal number")))
}

/// A record with its numbers parsed.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedRecord {
    pub function: FunctionId,
    pub inputs: Vec<(String, Complex64)>,
    pub value: Complex64,
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl ParsedRecord {
    fn input(&self, name: &str) -> Result<Complex64> {
        self.inputs
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| *v)
            .ok_or_else(|| Error::Schema(format!("{} record lacks input '{name}'", self.function.name())))
    }

    fn real(&self, name: &str) -> Result<f64> {
        Ok(self.input(name)?.re)
    }

    fn int(&self, name: &str) -> Result<i64> {
        let v = self.real(name)?;
        if v != v.round() {
            return Err(Error::Schema(format!("input '{name}' must be an integer, got {v}")));
        }
        Ok(v as i64)
    }

    fn uint(&self, name: &str) -> Result<usize> {
        let v = self.int(name)?;
        usize::try_from(v).map_err(|_| Error::Schema(format!("input '{name}' must be nonnegative, got {v}")))
    }

    fn params(&self) -> Result<DeSitterParams> {
        let alpha = self.inputs.iter().any(|(n, _)| n == "alpha");
        DeSitterParams::new(if alpha { self.real("alpha")? } else { 1.0 }, self.real("M")?)
    }

    /// Evaluates the named function with the primary implementation.
    pub fn evaluate(&self) -> Result<Complex64> {
        let c = |x: f64| Complex64::new(x, 0.0);
        match self.function {
            FunctionId::Gamma => gamma(self.input("z")?),
            FunctionId::FerrersT => {
                let p = self.params()?;
                let od = OrderDegree::for_shell(&p, self.uint("l")?);
                ferrers_t(&od, &FerrersArg::at_time(self.real("t")?, p.alpha()))
            }
            FunctionId::FerrersT0 => ferrers_t_zero(&OrderDegree::for_shell(&self.params()?, self.uint("l")?)),
            FunctionId::GammaL => Ok(c(gamma_l(&self.params()?, self.uint("l")?)?)),
            FunctionId::WronskianRhs => wronskian_rhs(&OrderDegree::for_shell(&self.params()?, self.uint("l")?)),
            FunctionId::ThreeJ => {
                let j = ["j1", "j2", "j3", "m1", "m2", "m3"].map(|n| self.int(n));
                let [a, b, cc, d, e, f] = j;
                Ok(c(three_j(a?, b?, cc?, d?, e?, f?)))
            }
            FunctionId::Zeta => {
                let l = self.uint("l")?;
                Ok(c(zeta_phase(&ModeBasis::new(&self.params()?, l)?, l, self.real("t")?)?))
            }
            FunctionId::OmegaDs => {
                let l = self.uint("l")?;
                Ok(c(omega_ds(&ModeBasis::new(&self.params()?, l)?, l, self.real("t")?)?))
            }
            FunctionId::ModeU => {
                let p = SpacetimePoint::new(self.real("t")?, self.real("theta")?, self.real("phi")?);
                mode_u(&self.params()?, self.uint("l")?, self.int("m")?, &p)
            }
            FunctionId::TwoPoint => {
                let basis = ModeBasis::new(&self.params()?, self.uint("l_max")?)?;
                let p1 = SpacetimePoint::new(self.real("t1")?, self.real("theta")?, 0.0);
                let p2 = SpacetimePoint::new(self.real("t2")?, 0.0, 0.0);
                Ok(two_point_g(&basis, &p1, &p2)?.value)
            }
            FunctionId::LadderN03 => {
                let l = self.uint("l")?;
                let basis = ModeBasis::new(&self.params()?, l + 2)?;
                let grid = SphereGrid::new(16, 32)?;
                let rep = ladder_coefficients(GeneratorId::N03, &basis, l, self.int("m")?, self.real("t")?, &grid)?;
                Ok(rep.get(self.uint("l_prime")?, self.int("m_prime")?))
            }
        }
    }
}

impl FixtureRecord {
    pub fn parse(&self) -> Result<ParsedRecord> {
        let function = FunctionId::parse(&self.function_id)
            .ok_or_else(|| Error::Schema(format!("unknown function_id '{}'", self.function_id)))?;
        let inputs = self
            .inputs
            .iter()
            .map(|i| {
                Ok((
                    i.name.clone(),
                    Complex64::new(parse_decimal(&i.re, &i.name)?, parse_decimal(&i.im, &i.name)?),
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        let value = Complex64::new(parse_decimal(&self.value.re, "value.re")?, parse_decimal(&self.value.im, "value.im")?);
        if !(value.re.is_finite() && value.im.is_finite()) {
            return Err(Error::Schema("value is not finite".into()));
        }
        let abs_tol = parse_decimal(&self.abs_tol, "abs_tol")?;
        let rel_tol = parse_decimal(&self.rel_tol, "rel_tol")?;
        if !(abs_tol > 0.0 && rel_tol > 0.0) {
            return Err(Error::Schema(format!("tolerances must be positive, got {abs_tol}, {rel_tol}")));
        }
        Ok(ParsedRecord { function, inputs, value, abs_tol, rel_tol })
    }
}

impl FixturePack {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let pack: Self = serde_json::from_str(s).map_err(|e| Error::Schema(e.to_string()))?;
        if pack.records.is_empty() {
            return Err(Error::Schema("pack has no records".into()));
        }
        Ok(pack)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    /// Checks every record, in parallel; a record that fails to parse or
    /// evaluate counts as a failure carrying its error message.
    pub fn verify(&self) -> VerifyReport {
        let outcomes = self
            .records
            .par_iter()
            .enumerate()
            .map(|(index, r)| RecordOutcome::check(index, r))
            .collect();
        VerifyReport { outcomes }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecordOutcome {
    pub index: usize,
    pub function_id: String,
    pub expected: Option<Complex64>,
    pub computed: Option<Complex64>,
    pub error: f64,
    pub allowed: f64,
    pub passed: bool,
    pub message: Option<String>,
}

impl RecordOutcome {
    fn check(index: usize, r: &FixtureRecord) -> Self {
        let mut out = RecordOutcome {
            index,
            function_id: r.function_id.clone(),
            expected: None,
            computed: None,
            error: f64::INFINITY,
            allowed: 0.0,
            passed: false,
            message: None,
        };
        let parsed = match r.parse() {
            Ok(p) => p,
            Err(e) => {
                out.message = Some(e.to_string());
                return out;
            }
        };
        out.expected = Some(parsed.value);
        out.allowed = parsed.abs_tol + parsed.rel_tol * parsed.value.norm();
        match parsed.evaluate() {
            Ok(v) => {
                out.computed = Some(v);
                out.error = (v - parsed.value).norm();
                out.passed = out.error <= out.allowed;
            }
            Err(e) => out.message = Some(e.to_string()),
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let cplx = |c: Option<Complex64>| match c {
            Some(c) => json::object([("re", json::num(c.re)), ("im", json::num(c.im))]),
            None => Value::Null,
        };
        json::object([
            ("index", Value::from(self.index)),
            ("function_id", Value::from(self.function_id.clone())),
            ("expected", cplx(self.expected)),
            ("computed", cplx(self.computed)),
            ("error", json::num(self.error)),
            ("allowed", json::num(self.allowed)),
            ("passed", Value::from(self.passed)),
            ("message", self.message.clone().map(Value::from).unwrap_or(Value::Null)),
        ])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub outcomes: Vec<RecordOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &RecordOutcome> {
        self.outcomes.iter().filter(|o| !o.passed)
    }

    pub fn to_json(&self) -> Value {
        json::object([
            ("records", Value::from(self.outcomes.len())),
            ("failed", Value::from(self.failures().count())),
            ("passed", Value::from(self.passed())),
            ("outcomes", Value::Array(self.outcomes.iter().map(RecordOutcome::to_json).collect())),
        ])
    }
}
