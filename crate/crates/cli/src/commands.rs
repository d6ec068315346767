use std::path::Path;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use sitterloc::fixtures::FixturePack;
use sitterloc::json::{num, object};
use sitterloc::modes::gram_matrix;
use sitterloc::newton_wigner::{
    evolve_trace, heat_kernel_packet, position_apply, position_apply_quadrature, position_expectation,
    sign_ambiguity_report,
};
use sitterloc::symmetry::{apply_discrete, casimir_check, Discrete};
use sitterloc::{Error, ModeBasis, Sector, Series, SpacetimePoint, SphereGrid, StateCoefficients};

use crate::config::{PacketKind, RunConfig, SectorChoice};
use crate::error::CliError;
use crate::output::{fmt, OutDir};

/// Summary printed on stdout; `passed` decides the exit code.
pub struct Report {
    pub json: Value,
    pub passed: bool,
}

fn series_name(s: Series) -> &'static str {
    match s {
        Series::Principal => "principal",
        Series::Complementary => "complementary",
    }
}

fn cplx(c: Complex64) -> Value {
    object([("re", num(c.re)), ("im", num(c.im))])
}

fn grid(cfg: &RunConfig) -> Result<SphereGrid, CliError> {
    Ok(SphereGrid::new(cfg.grid.0, cfg.grid.1)?)
}

pub fn classify(cfg: &RunConfig) -> Result<Report, CliError> {
    let p = cfg.params()?;
    let json = object([
        ("alpha", num(p.alpha())),
        ("M", num(p.mass())),
        ("mu", num(p.mu())),
        ("series", Value::from(series_name(p.series()))),
        ("nu", cplx(p.nu())),
        ("q", num(p.casimir_q())),
    ]);
    Ok(Report { json, passed: true })
}

pub fn ortho(cfg: &RunConfig) -> Result<Report, CliError> {
    let p = cfg.params()?;
    let basis = ModeBasis::new(&p, cfg.l_max)?;
    let g = grid(cfg)?;
    let t = cfg.t0 * cfg.alpha;
    let tol = cfg.tol_or(1e-8);
    use Sector::{Negative as N, Positive as P};
    let blocks: Vec<(Sector, Sector, f64)> = match cfg.sector {
        SectorChoice::Positive => vec![(P, P, 1.0)],
        SectorChoice::Negative => vec![(N, N, -1.0)],
        SectorChoice::Cross => vec![(P, N, 0.0), (N, P, 0.0)],
        SectorChoice::All => vec![(P, P, 1.0), (N, N, -1.0), (P, N, 0.0), (N, P, 0.0)],
    };
    let name = |s: Sector| if s == P { "u" } else { "v" };
    let out = OutDir::new(cfg.out.as_deref())?;
    let mut worst = 0.0f64;
    let mut reports = Vec::new();
    for (a, b, diag) in blocks {
        let gm = gram_matrix(&basis, a, b, t, &g)?;
        let dev = gm.max_deviation(diag);
        worst = worst.max(dev);
        reports.push(object([
            ("left", Value::from(name(a))),
            ("right", Value::from(name(b))),
            ("expected_diagonal", num(diag)),
            ("max_deviation", num(dev)),
        ]));
        let rows: Vec<Vec<String>> = gm
            .labels
            .iter()
            .enumerate()
            .flat_map(|(i, &(l, m))| {
                let gm = &gm;
                gm.labels.iter().enumerate().map(move |(j, &(lp, mp))| {
                    let v = gm.entries[i][j];
                    vec![l.to_string(), m.to_string(), lp.to_string(), mp.to_string(), fmt(v.re), fmt(v.im)]
                })
            })
            .collect();
        out.csv(&format!("gram_{}{}.csv", name(a), name(b)), &["l", "m", "l_prime", "m_prime", "re", "im"], &rows)?;
    }
    let passed = worst <= tol;
    let json = object([
        ("M", num(p.mass())),
        ("t", num(t)),
        ("l_max", Value::from(cfg.l_max)),
        ("grid", Value::from(format!("{}x{}", cfg.grid.0, cfg.grid.1))),
        ("blocks", Value::Array(reports)),
        ("max_deviation", num(worst)),
        ("tol", num(tol)),
        ("passed", Value::from(passed)),
    ]);
    out.json("ortho.json", &json)?;
    Ok(Report { json, passed })
}

const R_TOL: f64 = 1e-4;

pub fn casimir(cfg: &RunConfig) -> Result<Report, CliError> {
    let p = cfg.params()?;
    let basis = ModeBasis::new(&p, cfg.l_max)?;
    let tol = cfg.tol_or(1e-3);
    let t = cfg.t0 * cfg.alpha;
    let probes = [SpacetimePoint::new(t, 1.0, 0.5), SpacetimePoint::new(t, 2.0, 2.3)];
    let m2 = p.mass() * p.mass();
    let (mut wq, mut wr) = (0.0f64, 0.0f64);
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    for l in 0..=cfg.l_max {
        for m in -(l as i64)..=(l as i64) {
            let est = match casimir_check(&basis, l, m, &probes[0], 1e-3) {
                Err(Error::SmallProbe(_)) => casimir_check(&basis, l, m, &probes[1], 1e-3)?,
                other => other?,
            };
            wq = wq.max((est.q - m2).norm() / m2);
            wr = wr.max(est.r.norm());
            rows.push(vec![l.to_string(), m.to_string(), fmt(est.q.re), fmt(est.q.im), fmt(est.r.norm())]);
            entries.push(object([
                ("l", Value::from(l)),
                ("m", Value::from(m)),
                ("q", cplx(est.q)),
                ("r_abs", num(est.r.norm())),
            ]));
        }
    }
    let passed = wq <= tol && wr <= R_TOL;
    let json = object([
        ("M", num(p.mass())),
        ("expected_q", num(m2)),
        ("entries", Value::Array(entries)),
        ("max_relative_q_error", num(wq)),
        ("max_r", num(wr)),
        ("tol", num(tol)),
        ("passed", Value::from(passed)),
    ]);
    let out = OutDir::new(cfg.out.as_deref())?;
    out.csv("casimir.csv", &["l", "m", "q_re", "q_im", "r_abs"], &rows)?;
    out.json("casimir.json", &json)?;
    Ok(Report { json, passed })
}

fn initial_state(cfg: &RunConfig, basis: &ModeBasis) -> Result<StateCoefficients, CliError> {
    if let Some(path) = &cfg.state {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read state {}: {e}", path.display())))?;
        let v: Value = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("state file: {e}")))?;
        return Ok(StateCoefficients::from_json(&v)?);
    }
    Ok(match cfg.packet {
        PacketKind::Heat => heat_kernel_packet(basis, cfg.l_max, cfg.theta0, cfg.phi0, cfg.width, cfg.t0 * cfg.alpha)?,
        PacketKind::Random => StateCoefficients::random(cfg.l_max, &mut ChaCha8Rng::seed_from_u64(cfg.seed)),
    })
}

pub fn evolve(cfg: &RunConfig) -> Result<Report, CliError> {
    let p = cfg.params()?;
    let basis = ModeBasis::new(&p, cfg.l_max)?;
    let g = grid(cfg)?;
    let state = initial_state(cfg, &basis)?.normalized()?;
    let times = cfg.times();
    let trace = evolve_trace(&basis, &state, &times, &g)?;
    let tol = cfg.tol_or(1e-12);
    let norm_dev = trace.norm.iter().map(|n| (n - 1.0).abs()).fold(0.0, f64::max);
    let passed = norm_dev <= tol;

    let out = OutDir::new(cfg.out.as_deref())?;
    let rows: Vec<Vec<String>> = trace
        .t
        .iter()
        .zip(&trace.expectation)
        .zip(&trace.norm)
        .map(|((t, e), n)| vec![fmt(*t), fmt(e[0]), fmt(e[1]), fmt(e[2]), fmt(*n)])
        .collect();
    out.csv("trace.csv", &["t", "x", "y", "z", "norm"], &rows)?;
    let density_rows: Vec<Vec<String>> = trace
        .t
        .iter()
        .zip(&trace.densities)
        .flat_map(|(t, d)| {
            g.nodes().iter().zip(d).map(move |(n, v)| vec![fmt(*t), fmt(n.theta), fmt(n.phi), fmt(*v)])
        })
        .collect();
    out.csv("density.csv", &["t", "theta", "phi", "density"], &density_rows)?;
    out.json("trace.json", &trace.to_json(&p))?;

    let json = object([
        ("M", num(p.mass())),
        ("series", Value::from(series_name(p.series()))),
        ("steps", Value::from(times.len())),
        ("norm_max_deviation", num(norm_dev)),
        ("max_density_change", num(trace.max_snapshot_change())),
        ("max_sphere_density_change", num(trace.max_raw_change(&p))),
        ("initial_expectation", Value::Array(trace.expectation[0].iter().map(|&v| num(v)).collect())),
        ("final_expectation", Value::Array(trace.expectation.last().expect("nonempty").iter().map(|&v| num(v)).collect())),
        ("tol", num(tol)),
        ("passed", Value::from(passed)),
    ]);
    Ok(Report { json, passed })
}

pub fn position(cfg: &RunConfig) -> Result<Report, CliError> {
    let p = cfg.params()?;
    let probe_basis = ModeBasis::new(&p, cfg.l_max)?;
    let state = initial_state(cfg, &probe_basis)?;
    let basis = ModeBasis::new(&p, state.l_max() + 1)?;
    let g = grid(cfg)?;
    let tol = cfg.tol_or(1e-8);
    let times = cfg.times();

    let t0 = times[0];
    let mut routes = 0.0f64;
    for axis in 1..=3 {
        let a = position_apply(&basis, &state, t0, axis)?;
        let b = position_apply_quadrature(&basis, &state, t0, axis, &g)?;
        routes = routes.max(a.max_abs_diff(&b));
    }
    let reflected = apply_discrete(Discrete::P3, &state);
    let inverted = apply_discrete(Discrete::P, &state);

    let mut rows = Vec::new();
    let mut pairing = Vec::new();
    let mut density = Vec::new();
    let mut parity_dev = 0.0f64;
    for &t in &times {
        let e = position_expectation(&basis, &state, t, &g)?;
        let r = position_expectation(&basis, &reflected, t, &g)?;
        let i = position_expectation(&basis, &inverted, t, &g)?;
        parity_dev = parity_dev
            .max((r.pairing[0] - e.pairing[0]).abs())
            .max((r.pairing[1] - e.pairing[1]).abs())
            .max((r.pairing[2] + e.pairing[2]).abs());
        for k in 0..3 {
            parity_dev = parity_dev.max((i.pairing[k] + e.pairing[k]).abs());
        }
        let mut row = vec![fmt(t)];
        row.extend(e.pairing.iter().chain(&e.density).map(|&v| fmt(v)));
        rows.push(row);
        pairing.push(Value::Array(e.pairing.iter().map(|&v| num(v)).collect()));
        density.push(Value::Array(e.density.iter().map(|&v| num(v)).collect()));
    }
    let routes_agree = routes <= tol;
    let parity_covariant = parity_dev <= tol;
    let json = object([
        ("M", num(p.mass())),
        ("t", Value::Array(times.iter().map(|&v| num(v)).collect())),
        ("pairing", Value::Array(pairing)),
        ("density", Value::Array(density)),
        ("routes_max_difference", num(routes)),
        ("routes_agree", Value::from(routes_agree)),
        ("parity_max_deviation", num(parity_dev)),
        ("parity_covariant", Value::from(parity_covariant)),
        ("tol", num(tol)),
        ("passed", Value::from(routes_agree && parity_covariant)),
    ]);
    let out = OutDir::new(cfg.out.as_deref())?;
    out.csv("position.csv", &["t", "x", "y", "z", "x_density", "y_density", "z_density"], &rows)?;
    out.json("position.json", &json)?;
    Ok(Report { json, passed: routes_agree && parity_covariant })
}

pub fn signdemo(cfg: &RunConfig) -> Result<Report, CliError> {
    let p = cfg.params()?;
    let r = sign_ambiguity_report(&p)?;
    let tol = cfg.tol_or(1e-12);
    let passed = r.opposite_coeff_error <= tol && r.same_coeff_error <= tol && r.signs_alternate() && r.alternating_wins();
    let out = OutDir::new(cfg.out.as_deref())?;
    let profiles: Vec<Vec<String>> = r
        .theta
        .iter()
        .zip(&r.profile_opposite)
        .zip(&r.profile_same)
        .map(|((t, a), b)| vec![fmt(*t), fmt(*a), fmt(*b)])
        .collect();
    out.csv("profiles.csv", &["theta", "opposite_signs", "equal_signs"], &profiles)?;
    let peaks: Vec<Vec<String>> = r
        .peaks
        .iter()
        .map(|k| vec![k.big_l.to_string(), fmt(k.alternating), fmt(k.best_single_flip)])
        .collect();
    out.csv("peaks.csv", &["L", "alternating", "best_single_flip"], &peaks)?;
    let mut json = r.to_json();
    if let Value::Object(m) = &mut json {
        m.insert("tol".into(), num(tol));
        m.insert("passed".into(), Value::from(passed));
    }
    out.json("signdemo.json", &json)?;
    Ok(Report { json, passed })
}

pub fn fixtures_verify(cfg: &RunConfig, path: &Path) -> Result<Report, CliError> {
    if !path.is_file() {
        return Err(CliError::MissingFixtures(path.display().to_string()));
    }
    let pack = FixturePack::load(path)?;
    let rep = pack.verify();
    for o in rep.failures() {
        eprintln!(
            "record {} ({}) failed: error {:.3e}, allowed {:.3e}{}",
            o.index,
            o.function_id,
            o.error,
            o.allowed,
            o.message.as_deref().map(|m| format!(", {m}")).unwrap_or_default()
        );
    }
    OutDir::new(cfg.out.as_deref())?.json("fixtures_report.json", &rep.to_json())?;
    let failed: Vec<Value> = rep.failures().map(|o| Value::from(o.index)).collect();
    let json = object([
        ("generator_version", Value::from(pack.header.generator_version.clone())),
        ("records", Value::from(rep.outcomes.len())),
        ("failed", Value::from(failed.len())),
        ("failed_indices", Value::Array(failed)),
        ("passed", Value::from(rep.passed())),
    ]);
    Ok(Report { json, passed: rep.passed() })
}
