//! The verification suite behind `verify`: every check is a pure function of
//! the seed, the sample count and the fixtures, so reports are reproducible.

use std::path::PathBuf;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use siegel_dynamics::conjugation::{default_grid, special_backward_construct, ConjugationRun, VariantKind};
use siegel_dynamics::dynamics::{
    backward_orbit, elliptic_growth_constant, julia_inclusion_check, multiplier_at_boundary, multiplier_sandwich,
    norm_ratio_bound, orbit_asymptotics, verify_defect_decay, BackwardOrbit, SolverPolicy,
};
use siegel_dynamics::geometry::{
    dist_ball, dist_siegel, BallPoint, BoundaryPoint, CVector, Chart, Primitive, SiegelAutomorphism, SiegelPoint,
};
use siegel_dynamics::maps::{
    classify, quadratic_inverse, quadratic_iterate_closed, ClassificationReport, MapDescriptor, OneDimMap,
    Quadratic,
};

use crate::fixtures::BUNDLED;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Samples for each sampled check.
    pub samples: usize,
    /// Fixture directory; `None` uses the bundled copies.
    pub fixtures: Option<PathBuf>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            samples: 10_000,
            fixtures: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub samples: usize,
    pub violations: usize,
    /// Largest deviation from the expected value, where one is measured.
    pub max_deviation: Option<f64>,
    pub tolerance: Option<f64>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub checks: Vec<CheckResult>,
    pub passed: usize,
    pub failed: usize,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Loaded fixtures by name. A fixture that fails to load keeps its error.
struct Fixtures(Vec<(&'static str, Result<MapDescriptor, String>)>);

impl Fixtures {
    fn load(dir: Option<&PathBuf>) -> Self {
        let items = BUNDLED
            .iter()
            .map(|&(name, bundled)| {
                let text = match dir {
                    Some(d) => {
                        let p = d.join(format!("{name}.json"));
                        std::fs::read_to_string(&p).map_err(|e| format!("{}: {e}", p.display()))
                    }
                    None => Ok(bundled.to_string()),
                };
                let map = text.and_then(|t| {
                    let f: MapDescriptor = serde_json::from_str(&t).map_err(|e| format!("malformed descriptor: {e}"))?;
                    f.validate().map_err(|e| e.to_string())?;
                    Ok(f)
                });
                (name, map)
            })
            .collect();
        Fixtures(items)
    }

    fn get(&self, name: &str) -> Result<&MapDescriptor, String> {
        match self.0.iter().find(|(n, _)| *n == name) {
            Some((_, Ok(f))) => Ok(f),
            Some((_, Err(e))) => Err(format!("fixture {name}: {e}")),
            None => Err(format!("unknown fixture {name}")),
        }
    }
}

struct Ctx {
    seed: u64,
    samples: usize,
    fixtures: Fixtures,
}

impl Ctx {
    /// Independent stream per check.
    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }
}

type Outcome = Result<CheckResult, String>;
type CheckFn = fn(&Ctx) -> Outcome;

/// Checks in report order.
const CHECKS: &[(&str, CheckFn)] = &[
    ("fixtures", check_fixtures),
    ("metric_consistency", check_metric_consistency),
    ("automorphism_isometry", check_isometry),
    ("distance_ratio_bound", check_distance_ratio),
    ("closed_form_iterate", check_closed_iterate),
    ("quadratic_inverse", check_inverse),
    ("julia_quadpol_origin", |c| check_julia(c, "quadpol", false, 11)),
    ("julia_quadpol_infinity", |c| check_julia(c, "quadpol", true, 12)),
    ("julia_diag21_origin", |c| check_julia(c, "diag21", false, 13)),
    ("julia_diag21_infinity", |c| check_julia(c, "diag21", true, 14)),
    ("quadpol_backward_orbit", check_quadpol_orbit),
    ("quadpol_multipliers", check_quadpol_multipliers),
    ("lifted_backward_orbit", check_lifted_orbit),
    ("defect_decay", check_defect_decay),
    ("multiplier_sandwich", check_sandwich),
    ("asymptotics_quadpol", check_asymptotics_quadpol),
    ("asymptotics_lifted", check_asymptotics_lifted),
    ("conjugation_quadpol", check_conjugation_quadpol),
    ("conjugation_diag_expandable", check_conjugation_expandable),
    ("elliptic_backward_orbit", check_elliptic_orbit),
    ("elliptic_special_orbit", check_elliptic_special),
    ("elliptic_growth", check_elliptic_growth),
];

/// Run every check. Independent checks run on separate threads; the report
/// keeps the fixed order above.
pub fn run_suite(config: &SuiteConfig) -> SuiteReport {
    let ctx = Ctx {
        seed: config.seed,
        samples: config.samples,
        fixtures: Fixtures::load(config.fixtures.as_ref()),
    };
    let checks: Vec<CheckResult> = std::thread::scope(|s| {
        let handles: Vec<_> = CHECKS
            .iter()
            .map(|&(name, check)| {
                let ctx = &ctx;
                s.spawn(move || (name, check(ctx)))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| {
                let (name, r) = h.join().unwrap_or_else(|_| ("panicked", Err("check panicked".into())));
                match r {
                    Ok(mut c) => {
                        c.name = name.to_string();
                        c
                    }
                    Err(detail) => CheckResult {
                        name: name.to_string(),
                        passed: false,
                        samples: 0,
                        violations: 0,
                        max_deviation: None,
                        tolerance: None,
                        detail,
                    },
                }
            })
            .collect()
    });
    let passed = checks.iter().filter(|c| c.passed).count();
    SuiteReport {
        failed: checks.len() - passed,
        passed,
        checks,
    }
}

fn err(e: impl ToString) -> String {
    e.to_string()
}

/// A check comparing sampled deviations against a tolerance.
fn deviation_check(samples: usize, violations: usize, max_dev: f64, tol: f64, detail: String) -> CheckResult {
    CheckResult {
        name: String::new(),
        passed: violations == 0 && max_dev <= tol,
        samples,
        violations,
        max_deviation: Some(max_dev),
        tolerance: Some(tol),
        detail,
    }
}

fn flag_check(samples: usize, violations: usize, detail: String) -> CheckResult {
    CheckResult {
        name: String::new(),
        passed: violations == 0,
        samples,
        violations,
        max_deviation: None,
        tolerance: None,
        detail,
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_complex(rng: &mut ChaCha8Rng, r: f64) -> Complex64 {
    c(rng.random_range(-r..r), rng.random_range(-r..r))
}

/// Point of `H^dim` with defect log-uniform in `[1e-2, 1e2]`.
pub fn random_siegel(rng: &mut ChaCha8Rng, dim: usize) -> SiegelPoint {
    let w: Vec<Complex64> = (1..dim).map(|_| random_complex(rng, 2.0)).collect();
    let t = 10f64.powf(rng.random_range(-2.0..2.0));
    let y = rng.random_range(-5.0..5.0);
    let norm2: f64 = w.iter().map(|x| x.norm_sqr()).sum();
    SiegelPoint::new(c(t + norm2, y), w).expect("positive defect")
}

/// Point of `B^dim` with `1 − |Z|` log-uniform in `[1e-4, 1]`.
pub fn random_ball(rng: &mut ChaCha8Rng, dim: usize) -> BallPoint {
    loop {
        let v: Vec<Complex64> = (0..dim).map(|_| random_complex(rng, 1.0)).collect();
        let n = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if n < 1e-3 {
            continue;
        }
        let r = 1.0 - 10f64.powf(rng.random_range(-4.0..0.0));
        let v = CVector::new(v.into_iter().map(|x| x * (r / n)).collect()).expect("finite");
        if let Ok(p) = BallPoint::new(v) {
            return p;
        }
    }
}

/// Chain of one to three random primitives on `H^dim`.
pub fn random_automorphism(rng: &mut ChaCha8Rng, dim: usize) -> SiegelAutomorphism {
    let len = rng.random_range(1..=3);
    let chain = (0..len)
        .map(|_| match rng.random_range(0..4) {
            0 => Primitive::Translation {
                y: rng.random_range(-3.0..3.0),
                w0: (1..dim).map(|_| random_complex(rng, 1.0)).collect(),
            },
            1 => Primitive::Dilation {
                t: 10f64.powf(rng.random_range(-1.0..1.0)),
            },
            2 => Primitive::Rotation {
                omega: (1..dim)
                    .map(|_| Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU)))
                    .collect(),
            },
            _ => Primitive::Inversion,
        })
        .collect();
    SiegelAutomorphism::from_chain(chain).expect("valid primitives")
}

fn check_fixtures(ctx: &Ctx) -> Outcome {
    let mut bad = Vec::new();
    for (name, _) in &ctx.fixtures.0 {
        match ctx.fixtures.get(name) {
            Ok(f) => match classify(f) {
                Ok(r) if r.is_self_map => {}
                Ok(_) => bad.push(format!("{name}: not a self-map")),
                Err(e) => bad.push(format!("{name}: {e}")),
            },
            Err(e) => bad.push(e),
        }
    }
    let n = ctx.fixtures.0.len();
    let detail = if bad.is_empty() {
        format!("{n} fixtures load and classify as self-maps")
    } else {
        bad.join("; ")
    };
    Ok(flag_check(n, bad.len(), detail))
}

/// Siegel distance against the ball distance of the Cayley images.
fn check_metric_consistency(ctx: &Ctx) -> Outcome {
    let mut rng = ctx.rng(1);
    let tol = 1e-12;
    let mut max_dev = 0.0f64;
    let mut violations = 0;
    for i in 0..ctx.samples {
        let dim = 2 + i % 2;
        let (p, q) = (random_siegel(&mut rng, dim), random_siegel(&mut rng, dim));
        let ds = dist_siegel(&p, &q).map_err(err)?;
        let db = dist_ball(&Chart::Standard.to_ball(&p), &Chart::Standard.to_ball(&q)).map_err(err)?;
        let dev = (ds - db).abs();
        max_dev = max_dev.max(dev);
        violations += usize::from(dev > tol);
    }
    Ok(deviation_check(
        ctx.samples,
        violations,
        max_dev,
        tol,
        "|d_H(P, Q) − d_B(C⁻¹P, C⁻¹Q)| on H² and H³".into(),
    ))
}

fn check_isometry(ctx: &Ctx) -> Outcome {
    let mut rng = ctx.rng(2);
    let tol = 1e-12;
    let mut max_dev = 0.0f64;
    let mut violations = 0;
    for i in 0..ctx.samples {
        let dim = 2 + i % 2;
        let a = random_automorphism(&mut rng, dim);
        let (p, q) = (random_siegel(&mut rng, dim), random_siegel(&mut rng, dim));
        let d0 = dist_siegel(&p, &q).map_err(err)?;
        let d1 = dist_siegel(&a.apply(&p).map_err(err)?, &a.apply(&q).map_err(err)?).map_err(err)?;
        let dev = (d0 - d1).abs();
        max_dev = max_dev.max(dev);
        violations += usize::from(dev > tol);
    }
    Ok(deviation_check(
        ctx.samples,
        violations,
        max_dev,
        tol,
        "|d(aP, aQ) − d(P, Q)| for random automorphism chains".into(),
    ))
}

/// `(1 − ||W||)/(1 − ||Z||) ≤ (1 + d)/(1 − d||Z||)`.
fn check_distance_ratio(ctx: &Ctx) -> Outcome {
    let mut rng = ctx.rng(3);
    let mut violations = 0;
    let mut worst = 0.0f64;
    for i in 0..ctx.samples {
        let dim = 1 + i % 3;
        let (z, w) = (random_ball(&mut rng, dim), random_ball(&mut rng, dim));
        let (lhs, rhs) = norm_ratio_bound(&z, &w).map_err(err)?;
        worst = worst.max(lhs / rhs);
        violations += usize::from(lhs > rhs * (1.0 + 1e-12));
    }
    Ok(flag_check(
        ctx.samples,
        violations,
        format!("ball pairs in N = 1, 2, 3; largest lhs/rhs {worst:.12}"),
    ))
}

/// Random self-map of the quadratic family, `A ∈ [0.2, 3]`.
fn random_quadratic(rng: &mut ChaCha8Rng) -> Quadratic {
    let a: f64 = rng.random_range(0.2..3.0);
    let cmod = rng.random_range(0.0..a.sqrt());
    let slack = a - cmod * cmod;
    let bmod = rng.random_range(0.0..slack);
    Quadratic::new(
        a,
        Complex64::from_polar(bmod, rng.random_range(0.0..std::f64::consts::TAU)),
        Complex64::from_polar(cmod, rng.random_range(0.0..std::f64::consts::TAU)),
    )
}

/// Closed-form `f^n` against `n` evaluations; deviation relative to the
/// size of the iterate.
fn check_closed_iterate(ctx: &Ctx) -> Outcome {
    let mut rng = ctx.rng(4);
    let tol = 1e-10;
    let (maps, points) = (20, 100);
    let mut max_dev = 0.0f64;
    let mut violations = 0;
    for _ in 0..maps {
        let q = random_quadratic(&mut rng);
        let f = MapDescriptor::Quadratic(q);
        for _ in 0..points {
            let n = rng.random_range(0..=20u32);
            let p = random_siegel(&mut rng, 2);
            let closed = quadratic_iterate_closed(&q, n, &p.to_cvector());
            let mut it = p.to_cvector();
            for _ in 0..n {
                it = f.eval_cvector(&it);
            }
            let dev = closed.max_abs_diff(&it) / it.norm().max(1.0);
            max_dev = max_dev.max(dev);
            violations += usize::from(!(dev <= tol));
        }
    }
    Ok(deviation_check(
        maps * points,
        violations,
        max_dev,
        tol,
        "closed-form iterate vs repeated evaluation, 20 maps, n ≤ 20, relative".into(),
    ))
}

fn check_inverse(ctx: &Ctx) -> Outcome {
    let f = ctx.fixtures.get("quadpol")?;
    let MapDescriptor::Quadratic(q) = f else {
        return Err("quadpol fixture is not a quadratic map".into());
    };
    let mut rng = ctx.rng(5);
    let tol = 1e-12;
    let samples = 1000;
    let mut max_dev = 0.0f64;
    let mut violations = 0;
    for _ in 0..samples {
        let p = random_siegel(&mut rng, 2).to_cvector();
        let pre = quadratic_inverse(q, &p).map_err(err)?;
        let dev = f.eval_cvector(&pre.point).max_abs_diff(&p) / p.norm().max(1.0);
        max_dev = max_dev.max(dev);
        violations += usize::from(!(dev <= tol));
    }
    Ok(deviation_check(
        samples,
        violations,
        max_dev,
        tol,
        "f(f⁻¹(P)) = P for the quadpol fixture".into(),
    ))
}

fn classified(f: &MapDescriptor) -> Result<ClassificationReport, String> {
    let r = classify(f).map_err(err)?;
    if !r.is_self_map {
        return Err("not a self-map".into());
    }
    Ok(r)
}

/// Julia's lemma at the Siegel origin (multiplier from the classification)
/// or at infinity (Denjoy-Wolff multiplier).
fn check_julia(ctx: &Ctx, fixture: &str, infinity: bool, stream: u64) -> Outcome {
    let f = ctx.fixtures.get(fixture)?;
    let r = classified(f)?;
    let dim = f.dim();
    let (x, alpha) = if infinity {
        let c = r.multiplier_at_dw.ok_or("no Denjoy-Wolff multiplier")?;
        (BoundaryPoint::infinity(dim), c)
    } else {
        let a = r.brfp_multiplier.ok_or("no repelling fixed point")?;
        (BoundaryPoint::siegel_origin(dim), a)
    };
    let seed = ctx.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(stream);
    let rep = julia_inclusion_check(f, &x, alpha, ctx.samples, seed).map_err(err)?;
    Ok(flag_check(
        rep.samples,
        rep.violations,
        format!("alpha = {alpha}, largest E(f(P))/(alpha E(P)) = {:.12}", rep.max_ratio),
    ))
}

fn quadpol_orbit(ctx: &Ctx) -> Result<BackwardOrbit, String> {
    let f = ctx.fixtures.get("quadpol")?;
    let start = SiegelPoint::axis(1.0, 2).map_err(err)?;
    backward_orbit(f, &start, 0.34, 40, &SolverPolicy::default()).map_err(err)
}

fn lifted_orbit(ctx: &Ctx) -> Result<BackwardOrbit, String> {
    let f = ctx.fixtures.get("lifted2z")?;
    let start = SiegelPoint::new(c(2.0, 0.0), vec![c(1.0, 0.0)]).map_err(err)?;
    backward_orbit(f, &start, 0.34, 40, &SolverPolicy::default()).map_err(err)
}

/// Points `(2^{-k}, 0)` and steps `1/3`.
fn check_quadpol_orbit(ctx: &Ctx) -> Outcome {
    let o = quadpol_orbit(ctx)?;
    let tol = 1e-12;
    let mut max_dev = 0.0f64;
    let mut violations = usize::from(o.len() != 41);
    for (k, p) in o.points.iter().enumerate() {
        let expect = CVector::from_reals(&[0.5f64.powi(k as i32), 0.0]).map_err(err)?;
        let dev = p.to_cvector().max_abs_diff(&expect);
        max_dev = max_dev.max(dev);
        violations += usize::from(dev > tol);
    }
    for d in &o.steps {
        let dev = (d - 1.0 / 3.0).abs();
        max_dev = max_dev.max(dev);
        violations += usize::from(dev > tol);
    }
    Ok(deviation_check(
        o.len(),
        violations,
        max_dev,
        tol,
        "backward orbit from (1, 0), a = 0.34: Z_k = (2^-k, 0), steps 1/3".into(),
    ))
}

fn check_quadpol_multipliers(ctx: &Ctx) -> Outcome {
    let f = ctx.fixtures.get("quadpol")?;
    let at0 = multiplier_at_boundary(f, &BoundaryPoint::siegel_origin(2), 0.5, 40).map_err(err)?;
    let atinf = multiplier_at_boundary(f, &BoundaryPoint::infinity(2), 0.5, 40).map_err(err)?;
    let tol = 1e-6;
    let devs = [(at0.value - 2.0).abs(), (atinf.value - 0.5).abs()];
    let max_dev = devs.iter().copied().fold(0.0, f64::max);
    Ok(deviation_check(
        2,
        devs.iter().filter(|&&d| !(d <= tol)).count(),
        max_dev,
        tol,
        format!("multiplier at 0 = {}, at infinity = {}", at0.value, atinf.value),
    ))
}

/// Limit `(1, 1)` and steps `1/3`.
fn check_lifted_orbit(ctx: &Ctx) -> Outcome {
    let o = lifted_orbit(ctx)?;
    let tol = 1e-12;
    let q = o.limit.coords().ok_or("orbit tends to infinity")?;
    let expect = CVector::from_reals(&[1.0, 1.0]).map_err(err)?;
    let mut max_dev = q.max_abs_diff(&expect);
    let mut violations = usize::from(max_dev > tol);
    for d in &o.steps {
        let dev = (d - 1.0 / 3.0).abs();
        max_dev = max_dev.max(dev);
        violations += usize::from(dev > tol);
    }
    Ok(deviation_check(
        o.len(),
        violations,
        max_dev,
        tol,
        "backward orbit from (2, 1): limit (1, 1), steps 1/3".into(),
    ))
}

fn hyperbolic_orbits(ctx: &Ctx) -> Result<Vec<(&'static str, BackwardOrbit, f64)>, String> {
    let mut out = Vec::new();
    for (name, orbit) in [("quadpol", quadpol_orbit(ctx)?), ("lifted2z", lifted_orbit(ctx)?)] {
        let r = classified(ctx.fixtures.get(name)?)?;
        let c = r.multiplier_at_dw.ok_or("no Denjoy-Wolff multiplier")?;
        out.push((name, orbit, c));
    }
    Ok(out)
}

fn check_defect_decay(ctx: &Ctx) -> Outcome {
    let mut pairs = 0;
    let mut violations = 0;
    let mut notes = Vec::new();
    for (name, orbit, c) in hyperbolic_orbits(ctx)? {
        let rep = verify_defect_decay(&orbit, c);
        pairs += rep.pairs;
        violations += rep.violations;
        notes.push(format!("{name}: c = {c}, min log margin {:.3e}", rep.min_log_margin));
    }
    Ok(flag_check(pairs, violations, notes.join("; ")))
}

fn check_sandwich(ctx: &Ctx) -> Outcome {
    let mut violations = 0;
    let mut notes = Vec::new();
    let orbits = hyperbolic_orbits(ctx)?;
    for (name, orbit, c) in &orbits {
        let s = multiplier_sandwich(orbit, *c, 1e-9).map_err(err)?;
        violations += usize::from(!s.holds);
        notes.push(format!("{name}: {} ≤ {} ≤ {}", s.lower, s.estimate, s.upper));
    }
    Ok(flag_check(orbits.len(), violations, notes.join("; ")))
}

/// Ratios `(Re z/t, Im z/t, ||w||²/t, t_k/t_{k+1})` are exactly `(1, 0, 0, 2)`.
fn check_asymptotics_quadpol(ctx: &Ctx) -> Outcome {
    let o = quadpol_orbit(ctx)?;
    let r = orbit_asymptotics(&o, &SiegelAutomorphism::identity(), 1e-12).map_err(err)?;
    let seqs = [
        (&r.re_ratio, 1.0),
        (&r.im_ratio, 0.0),
        (&r.w_ratio, 0.0),
        (&r.t_ratio, 2.0),
    ];
    let mut samples = 0;
    let mut violations = 0;
    for (seq, target) in seqs {
        samples += seq.len();
        violations += seq.iter().filter(|&&x| x != target).count();
    }
    Ok(deviation_check(
        samples,
        violations,
        0.0,
        0.0,
        "ratio sequences equal (1, 0, 0, 2) exactly".into(),
    ))
}

/// `t_n/t_{n+1}` within `1e-9` of 2 for `n ≥ 5` at the limit `(1, 1)`.
fn check_asymptotics_lifted(ctx: &Ctx) -> Outcome {
    let o = lifted_orbit(ctx)?;
    let h = SiegelAutomorphism::recentering(&o.limit).map_err(err)?;
    let r = orbit_asymptotics(&o, &h, 1e-9).map_err(err)?;
    let tol = 1e-9;
    let tail = &r.t_ratio[5..];
    let max_dev = tail.iter().map(|x| (x - 2.0).abs()).fold(0.0, f64::max);
    let violations = tail.iter().filter(|x| !((*x - 2.0).abs() <= tol)).count()
        + r.limits_ok.iter().filter(|ok| !**ok).count();
    Ok(deviation_check(
        tail.len(),
        violations,
        max_dev,
        tol,
        "t_n/t_(n+1) → 2 at (1, 1)".into(),
    ))
}

fn conjugation(f: &MapDescriptor, q: &BoundaryPoint, alpha: f64, rho: f64, n: usize, kind: VariantKind) -> Result<ConjugationRun, String> {
    let s = special_backward_construct(f, q, alpha, rho, n, &SolverPolicy::default()).map_err(err)?;
    ConjugationRun::new(f, s, kind, default_grid(f.dim())).map_err(err)
}

/// `ψ = p_1`: residuals vanish and `ψ_N(a_k) = Z_k`.
fn check_conjugation_quadpol(ctx: &Ctx) -> Outcome {
    let f = ctx.fixtures.get("quadpol")?;
    let r = classified(f)?;
    let q = r.brfp.ok_or("no repelling fixed point")?;
    let alpha = r.brfp_multiplier.ok_or("no multiplier")?;
    let run = conjugation(f, &q, alpha, 1.0, 20, VariantKind::Basic)?;
    let (tol_res, tol_interp) = (1e-12, 1e-10);
    let interp = &run.interp_errors[..run.interp_errors.len().min(11)];
    let violations = run.residuals.iter().filter(|&&x| !(x <= tol_res)).count()
        + interp.iter().filter(|&&x| !(x <= tol_interp)).count();
    let max_dev = run.residuals.iter().chain(interp).copied().fold(0.0, f64::max);
    Ok(deviation_check(
        run.residuals.len() + interp.len(),
        violations,
        max_dev,
        tol_interp,
        format!(
            "max residual {:.3e}, max interpolation error {:.3e}",
            run.residuals.iter().copied().fold(0.0, f64::max),
            interp.iter().copied().fold(0.0, f64::max)
        ),
    ))
}

/// A map equal to its own linear model: `ψ` is the identity.
fn check_conjugation_expandable(ctx: &Ctx) -> Outcome {
    let f = ctx.fixtures.get("diag_expandable")?;
    let r = classified(f)?;
    let q = r.brfp.ok_or("no repelling fixed point")?;
    let alpha = r.brfp_multiplier.ok_or("no multiplier")?;
    let run = conjugation(f, &q, alpha, 1.0, 15, VariantKind::Expandable)?;
    let tol = 1e-12;
    let mut max_dev = run.residuals.iter().copied().fold(0.0, f64::max);
    for samples in &run.psi {
        for (z, p) in run.grid.iter().zip(samples) {
            max_dev = max_dev.max(p.to_cvector().max_abs_diff(&z.to_cvector()));
        }
    }
    let violations = usize::from(!(max_dev <= tol));
    Ok(deviation_check(
        run.residuals.len(),
        violations,
        max_dev,
        tol,
        "expandable variant: residuals vanish and ψ_n is the identity".into(),
    ))
}

/// Multiplier at `1` of the first disk component, by central differences of
/// the formula written out here.
fn blaschke_oracle(f: &MapDescriptor) -> Result<f64, String> {
    let MapDescriptor::BallProduct { components } = f else {
        return Err("blaschke fixture is not a ball product".into());
    };
    let Some(OneDimMap::BlaschkeDeg2 { a }) = components.first() else {
        return Err("first component is not a degree-2 Blaschke factor".into());
    };
    let a = *a;
    let b = |x: f64| x * (x + a) / (1.0 + a * x);
    let h = 1e-5;
    Ok((b(1.0 + h) - b(1.0 - h)) / (2.0 * h))
}

/// Backward orbit from the ball point `(0.5, 0)` tends to `(1, 0)` with the
/// one-dimensional multiplier.
fn check_elliptic_orbit(ctx: &Ctx) -> Outcome {
    let f = ctx.fixtures.get("blaschke")?;
    let oracle = blaschke_oracle(f)?;
    let start = Chart::Reflected.to_siegel(&BallPoint::new(CVector::from_reals(&[0.5, 0.0]).map_err(err)?).map_err(err)?);
    let o = backward_orbit(f, &start, 0.34, 80, &SolverPolicy::default()).map_err(err)?;
    let e1 = CVector::e1(2);
    let limit_dev = match &o.limit_ball {
        Some(BoundaryPoint::Ball { v }) => v.max_abs_diff(&e1),
        _ => f64::INFINITY,
    };
    let mult = o.multiplier_estimate.ok_or("no multiplier estimate")?;
    let tol = 1e-4;
    let mult_dev = (mult - oracle).abs();
    let violations = usize::from(!(limit_dev <= 1e-6)) + usize::from(!(mult_dev <= tol));
    Ok(deviation_check(
        o.len(),
        violations,
        mult_dev,
        tol,
        format!("limit deviation from (1, 0) {limit_dev:.3e}, multiplier {mult} vs oracle {oracle}"),
    ))
}

/// Steps of the special orbit tend to `(α − 1)/(α + 1)`, and the conjugation
/// residual falls below `1e-3`.
fn check_elliptic_special(ctx: &Ctx) -> Outcome {
    let f = ctx.fixtures.get("blaschke")?;
    let r = classified(f)?;
    let q = r.brfp.ok_or("no repelling fixed point")?;
    let alpha = r.brfp_multiplier.ok_or("no multiplier")?;
    let run = conjugation(f, &q, alpha, 0.5, 30, VariantKind::Basic)?;
    let bound = (alpha - 1.0) / (alpha + 1.0);
    let last_step = *run.orbit.steps.last().ok_or("empty orbit")?;
    let step_dev = (last_step - bound).abs();
    let residual = *run.residuals.last().ok_or("no residuals")?;
    let tol = 1e-4;
    let violations = usize::from(!(step_dev <= tol)) + usize::from(!(residual < 1e-3));
    Ok(deviation_check(
        run.orbit.len(),
        violations,
        step_dev,
        tol,
        format!("last step {last_step} vs {bound}, final residual {residual:.3e}"),
    ))
}

fn check_elliptic_growth(ctx: &Ctx) -> Outcome {
    let f = ctx.fixtures.get("blaschke")?;
    let g = elliptic_growth_constant(f, 0.5, 64).map_err(err)?;
    let violations = usize::from(g.apparent_non_elliptic || !(g.c < 1.0));
    Ok(flag_check(g.radii.len(), violations, format!("growth constant c = {}", g.c)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes() {
        let r = run_suite(&SuiteConfig {
            seed: 3,
            samples: 300,
            fixtures: None,
        });
        for c in &r.checks {
            assert!(c.passed, "{c:?}");
        }
        assert_eq!(r.checks.len(), CHECKS.len());
    }

    #[test]
    fn missing_fixture_fails_its_checks() {
        let dir = tempfile::tempdir().unwrap();
        for (name, text) in BUNDLED {
            if *name != "lifted2z" {
                std::fs::write(dir.path().join(format!("{name}.json")), text).unwrap();
            }
        }
        let r = run_suite(&SuiteConfig {
            seed: 0,
            samples: 100,
            fixtures: Some(dir.path().to_path_buf()),
        });
        assert!(!r.check("fixtures").unwrap().passed);
        assert!(!r.check("lifted_backward_orbit").unwrap().passed);
        assert!(r.check("quadpol_backward_orbit").unwrap().passed);
    }
}
