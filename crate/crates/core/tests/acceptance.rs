//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p sitterloc --test acceptance`.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sitterloc::geometry::{FdSteps, NuBranch};
use sitterloc::modes::{gram_matrix, kg_residual, large_mass_product_check, ModeField};
use sitterloc::newton_wigner::{
    large_mass_asymptotics_check, nw_transform, phase_drift, phase_factor, position_apply,
    position_apply_quadrature, position_expectation, position_matrix, sign_ambiguity_report,
    zeta_derivative_check, zeta_phase,
};
use sitterloc::specfun::{ferrers_t_zero, wronskian_rhs, wigner_d, EulerAngles, FerrersShell, OrderDegree};
use sitterloc::symmetry::{apply_discrete, casimir_check, rotate_state, Discrete};
use sitterloc::{DeSitterParams, ModeBasis, Sector, SpacetimePoint, SphereGrid, StateCoefficients};

type Res<T> = Result<T, Box<dyn std::error::Error>>;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Res<Outcome> {
    Ok(Outcome { passed, detail })
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

fn params(m: f64) -> DeSitterParams {
    DeSitterParams::new(1.0, m).expect("valid mass")
}

const TOL_GRAM: f64 = 1e-8;
const MAX_CONFIG_SECONDS: f64 = 60.0;

fn orthonormality() -> Res<Outcome> {
    let grid = SphereGrid::new(16, 32)?;
    let (mut worst, mut slowest) = (0.0f64, 0.0f64);
    for m in [0.5, 2.5] {
        let basis = ModeBasis::new(&params(m), 6)?;
        for t in [0.0, 0.5, 1.5] {
            let start = Instant::now();
            let pp = gram_matrix(&basis, Sector::Positive, Sector::Positive, t, &grid)?.max_deviation(1.0);
            let nn = gram_matrix(&basis, Sector::Negative, Sector::Negative, t, &grid)?.max_deviation(-1.0);
            let pn = gram_matrix(&basis, Sector::Positive, Sector::Negative, t, &grid)?.max_deviation(0.0);
            let np = gram_matrix(&basis, Sector::Negative, Sector::Positive, t, &grid)?.max_deviation(0.0);
            slowest = slowest.max(start.elapsed().as_secs_f64());
            worst = worst.max(pp).max(nn).max(pn).max(np);
        }
    }
    outcome(
        worst <= TOL_GRAM && slowest <= MAX_CONFIG_SECONDS,
        format!("max |G - diag(±1,0)| = {worst:.2e} (tol {TOL_GRAM:.0e}), slowest configuration {slowest:.2} s"),
    )
}

const TOL_WRONSKIAN: f64 = 1e-8;

fn wronskian() -> Res<Outcome> {
    let mut worst = 0.0f64;
    for (m, branch) in [(0.5, NuBranch::Plus), (0.5, NuBranch::Minus), (2.5, NuBranch::Plus), (2.5, NuBranch::Minus)] {
        let p = DeSitterParams::with_branch(1.0, m, branch)?;
        for l in 0..4 {
            let od = OrderDegree::for_shell(&p, l);
            let shell = FerrersShell::new(od)?;
            let rhs = wronskian_rhs(&od)?;
            for t in [0.0, 0.7, 1.5] {
                let z = Complex64::new(0.0, f64::sinh(t));
                let a = shell.eval(z)?;
                let b = shell.eval(-z)?;
                let lhs = (1.0 - z * z) * (a.value * (-b.d1) - b.value * a.d1);
                worst = worst.max(rel(lhs, rhs));
            }
        }
    }
    outcome(worst <= TOL_WRONSKIAN, format!("48 lattice points, max relative error {worst:.2e} (tol {TOL_WRONSKIAN:.0e})"))
}

const TOL_T0: f64 = 1e-12;

fn t_at_origin() -> Res<Outcome> {
    let mut worst = 0.0f64;
    for m in [0.5, 2.5] {
        let p = params(m);
        for l in 0..=16 {
            let od = OrderDegree::for_shell(&p, l);
            let closed = ferrers_t_zero(&od)?;
            let series = FerrersShell::new(od)?.series(Complex64::new(0.0, 0.0))?.value;
            worst = worst.max(rel(series, closed));
        }
    }
    outcome(worst <= TOL_T0, format!("closed form vs hypergeometric series, l <= 16, max relative error {worst:.2e} (tol {TOL_T0:.0e})"))
}

const TOL_CASIMIR_Q: f64 = 1e-3;
const TOL_CASIMIR_R: f64 = 1e-4;

fn casimirs() -> Res<Outcome> {
    let (mut wq, mut wr) = (0.0f64, 0.0f64);
    let probes = [SpacetimePoint::new(0.3, 1.0, 0.5), SpacetimePoint::new(-0.4, 2.0, 2.3)];
    for m in [0.5, 2.5] {
        let b = ModeBasis::new(&params(m), 3)?;
        for l in 0..=3usize {
            for mm in -(l as i64)..=(l as i64) {
                for p in &probes {
                    let c = casimir_check(&b, l, mm, p, 1e-3)?;
                    wq = wq.max((c.q - m * m).norm() / (m * m));
                    wr = wr.max(c.r.norm());
                }
            }
        }
    }
    outcome(
        wq <= TOL_CASIMIR_Q && wr <= TOL_CASIMIR_R,
        format!("max |Q - M²|/M² = {wq:.2e} (tol {TOL_CASIMIR_Q:.0e}), max |R| = {wr:.2e} (tol {TOL_CASIMIR_R:.0e})"),
    )
}

const TOL_KG: f64 = 1e-5;

fn klein_gordon() -> Res<Outcome> {
    let mut worst = 0.0f64;
    for m in [0.5, 2.5] {
        let p = params(m);
        let b = ModeBasis::new(&p, 4)?;
        let h = FdSteps::default_for(&p);
        for q in [SpacetimePoint::new(0.3, 1.0, 0.5), SpacetimePoint::new(1.2, 2.4, 4.0)] {
            for l in 0..=4usize {
                for mm in -(l as i64)..=(l as i64) {
                    for s in [Sector::Positive, Sector::Negative] {
                        worst = worst.max(kg_residual(&b, l, mm, s, &q, &h)?);
                    }
                }
            }
        }
    }
    outcome(worst <= TOL_KG, format!("max relative residual {worst:.2e} (tol {TOL_KG:.0e})"))
}

const TOL_NORM: f64 = 1e-14;
const TOL_COVARIANCE: f64 = 1e-10;

fn nw_postulates() -> Res<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut norm, mut rot, mut disc) = (0.0f64, 0.0f64, 0.0f64);
    let angles = EulerAngles::new(0.7, 2.1, -0.4);
    let points = [(0.3, 1.0), (2.0, 4.0), (1.5, 0.1), (2.9, 5.9)];
    for m in [0.5, 2.5] {
        let b = ModeBasis::new(&params(m), 8)?;
        for _ in 0..3 {
            let s = StateCoefficients::random(8, &mut rng);
            for t in [0.0, 0.7, -1.3, 2.5] {
                let nw = nw_transform(&b, &s, t)?;
                norm = norm.max((nw.q.norm() - s.norm()).abs());

                let lhs = nw_transform(&b, &rotate_state(&s, &angles), t)?;
                let rhs = StateCoefficients::from_fn(8, |l, k| {
                    let li = l as i64;
                    (-li..=li).map(|mm| wigner_d(li, k, mm, &angles) * nw.q.get_or_zero(l, mm)).sum()
                });
                rot = rot.max(lhs.q.max_abs_diff(&rhs));

                // spatial maps act pointwise on the NW function
                let parity = nw_transform(&b, &apply_discrete(Discrete::P, &s), t)?;
                let p3 = nw_transform(&b, &apply_discrete(Discrete::P3, &s), t)?;
                let reversed = nw_transform(&b, &apply_discrete(Discrete::T, &s), -t)?;
                for &(th, ph) in &points {
                    let f = |x: f64, y: f64| nw.function(x, y);
                    disc = disc.max((parity.function(th, ph) - f(PI - th, ph + PI)).norm());
                    disc = disc.max((p3.function(th, ph) - f(PI - th, ph)).norm());
                    disc = disc.max((reversed.function(th, ph) - f(th, ph).conj()).norm());
                }
            }
        }
    }
    let mut sign_ok = true;
    let mut phase_dev = 0.0f64;
    for m in [0.5, 2.5] {
        let b = ModeBasis::new(&params(m), 16)?;
        for l in 0..=16 {
            let expected = if l % 2 == 0 { 0.0 } else { PI };
            sign_ok &= zeta_phase(&b, l, 0.0)? == expected;
            phase_dev = phase_dev.max((phase_factor(&b, l, 0.0)? - if l % 2 == 0 { 1.0 } else { -1.0 }).norm());
        }
    }
    outcome(
        norm <= TOL_NORM && rot <= TOL_COVARIANCE && disc <= TOL_COVARIANCE && sign_ok && phase_dev <= TOL_NORM,
        format!(
            "norm {norm:.2e} (tol {TOL_NORM:.0e}), rotation {rot:.2e}, parity/time reversal {disc:.2e} (tol {TOL_COVARIANCE:.0e}), \
             ζ_l(0) = lπ mod 2π for l <= 16: {sign_ok}, |e^(-iζ_l(0)) - (-1)^l| <= {phase_dev:.1e}"
        ),
    )
}

const TOL_DRIFT: f64 = 1e-8;

fn complementary_dynamics() -> Res<Outcome> {
    let b = ModeBasis::new(&params(0.5), 8)?;
    let ts: Vec<f64> = (0..=60).map(|k| 3.0 * k as f64 / 60.0).collect();
    let mut worst = (0.0f64, 0usize);
    for l in 0..=8 {
        let d = phase_drift(&b, l, &ts)?;
        if d > worst.0 {
            worst = (d, l);
        }
    }
    outcome(
        worst.0 <= TOL_DRIFT,
        format!("M = 0.5, max |e^(-iζ_l(t)) - e^(-iζ_l(0))| over t in [0, 3α] = {:.2e} at l = {} (tol {TOL_DRIFT:.0e})", worst.0, worst.1),
    )
}

const TOL_PHASE_LAW: f64 = 1e-6;

fn principal_phase_law() -> Res<Outcome> {
    let b = ModeBasis::new(&params(2.5), 6)?;
    let mut worst = 0.0f64;
    for l in 0..=6 {
        for t in [-1.0, 0.0, 0.5, 1.5, 2.5] {
            let (fd, formula) = zeta_derivative_check(&b, l, t, 1e-3)?;
            worst = worst.max((fd - formula).abs() / formula.abs());
        }
    }
    outcome(worst <= TOL_PHASE_LAW, format!("M = 2.5, dζ/dt vs ω/a, max relative error {worst:.2e} (tol {TOL_PHASE_LAW:.0e})"))
}

fn large_mass() -> Res<Outcome> {
    let p = params(100.0);
    let b = ModeBasis::new(&p, 3)?;
    let (mut e0, mut e5, mut ip) = (0.0f64, 0.0f64, 0.0f64);
    for l in 0..=3 {
        let (x, a) = large_mass_asymptotics_check(&b, l, 0.0)?;
        e0 = e0.max(rel(x, a));
        let (x, a) = large_mass_asymptotics_check(&b, l, 0.5)?;
        e5 = e5.max(rel(x, a));
    }
    let grid = SphereGrid::new(12, 24)?;
    for (l, m) in [(0usize, 0i64), (1, 1), (3, -2)] {
        let f = ModeField { basis: &b, l, m, sector: Sector::Positive };
        for t in [0.0, 0.5] {
            let (exact, asym) = large_mass_product_check(&p, &f, &f, t, &grid)?;
            ip = ip.max(rel(asym, exact));
        }
    }
    outcome(
        e0 <= 0.02 && e5 <= 0.05 && ip <= 0.05,
        format!("M = 100: modes {:.2}% at t = 0 (tol 2%), {:.2}% at t = 0.5α (tol 5%), inner product {:.2}% (tol 5%)", 100.0 * e0, 100.0 * e5, 100.0 * ip),
    )
}

const TOL_POSITION: f64 = 1e-8;
const TOL_ISOTROPIC: f64 = 1e-10;

fn position_operator() -> Res<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let grid = SphereGrid::new(12, 24)?;
    let (mut routes, mut herm, mut iso) = (0.0f64, 0.0f64, 0.0f64);
    for m in [0.5, 2.5] {
        let b = ModeBasis::new(&params(m), 5)?;
        for t in [0.0, 0.8] {
            let s = StateCoefficients::random(4, &mut rng);
            for axis in 1..=3 {
                let a = position_apply(&b, &s, t, axis)?;
                let q = position_apply_quadrature(&b, &s, t, axis, &grid)?;
                routes = routes.max(a.max_abs_diff(&q));
                let x = position_matrix(&b, 4, t, axis)?;
                for i in 0..x.len() {
                    for j in 0..x.len() {
                        herm = herm.max((x[i][j] - x[j][i].conj()).norm());
                    }
                }
            }
            let e = position_expectation(&b, &StateCoefficients::basis(4, 0, 0)?, t, &grid)?;
            iso = e.pairing.iter().chain(&e.density).fold(iso, |w, v| w.max(v.abs()));
        }
    }
    outcome(
        routes <= TOL_POSITION && herm <= TOL_POSITION && iso <= TOL_ISOTROPIC,
        format!(
            "3-j vs quadrature {routes:.2e}, Hermiticity {herm:.2e} (tol {TOL_POSITION:.0e}), isotropic expectation {iso:.2e} (tol {TOL_ISOTROPIC:.0e})"
        ),
    )
}

const TOL_SIGN_COEFF: f64 = 1e-12;

fn sign_ambiguity() -> Res<Outcome> {
    let (mut coeff, mut alternate, mut wins) = (0.0f64, true, true);
    for m in [0.5, 2.5] {
        let r = sign_ambiguity_report(&params(m))?;
        coeff = coeff.max(r.opposite_coeff_error).max(r.same_coeff_error);
        alternate &= r.signs_alternate();
        wins &= r.alternating_wins();
    }
    outcome(
        coeff <= TOL_SIGN_COEFF && alternate && wins,
        format!(
            "(1 ± cos θ)/(2√π) coefficient error {coeff:.2e} (tol {TOL_SIGN_COEFF:.0e}), origin signs alternate: {alternate}, \
             s_l = (-1)^l maximizes the delta peak for L <= 20: {wins}"
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Res<Outcome>); 11] = [
        ("orthonormality", orthonormality),
        ("wronskian identity", wronskian),
        ("T(0) closed form", t_at_origin),
        ("casimir certificates", casimirs),
        ("klein-gordon residual", klein_gordon),
        ("nw unitarity and covariance", nw_postulates),
        ("complementary trivial dynamics", complementary_dynamics),
        ("principal phase law", principal_phase_law),
        ("large-mass limits", large_mass),
        ("position operator", position_operator),
        ("sign ambiguity", sign_ambiguity),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let (passed, detail) = match run() {
            Ok(o) => (o.passed, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !passed {
            failed += 1;
        }
        println!("{} A{:02} {name}: {detail}", if passed { "PASS" } else { "FAIL" }, k + 1);
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
