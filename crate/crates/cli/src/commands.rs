use std::path::PathBuf;

use anyhow::Context;
use serde::Serialize;
use siegel_dynamics::conjugation::{default_grid, special_backward_construct, ConjugationRun, VariantKind};
use siegel_dynamics::dynamics::{backward_orbit, forward_orbit, multiplier_at_boundary, BackwardOrbit, SolverPolicy, StopReason};
use siegel_dynamics::export::{
    backward_orbit_csv, forward_orbit_csv, to_json_pretty, BackwardOrbitReport, ConjugationReport, ForwardOrbitReport,
};
use siegel_dynamics::geometry::{BoundaryPoint, CVector, SiegelPoint};
use siegel_dynamics::maps::{classify, ClassificationReport, DenjoyWolff, FixedPointSet, MapDescriptor};
use siegel_dynamics::policy::policy;
use siegel_dynamics::{Error, NumericPolicy};

use crate::args::{Cli, Command, ConjugateArgs, Format, MapArgs, OrbitArgs, VariantArg, VerifyArgs};
use crate::config::{
    lib_failure, parse_boundary, parse_start, resolve_map, Direction, Failure, FileConfig, ResolvedMap, EXIT_CHECK_FAILED,
    EXIT_NOT_SELF_MAP, EXIT_OK, EXIT_SOLVER,
};
use crate::suite::{run_suite, SuiteConfig};

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_STEP_BOUND: f64 = 0.5;
pub const DEFAULT_ORBIT_LEN: usize = 40;
pub const DEFAULT_CONJUGATION_LEN: usize = 30;
pub const DEFAULT_EXCLUSION_RADIUS: f64 = 0.5;
pub const DEFAULT_THRESHOLD: f64 = 1e-3;
pub const DEFAULT_SAMPLES: usize = 10_000;

/// What a command produced: an exit code, text for stdout, and report files.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub files: Vec<(PathBuf, String)>,
}

/// Every report carries the resolved config and the numeric policy.
#[derive(Serialize)]
struct Envelope<'a, C: Serialize, R: Serialize> {
    command: &'static str,
    config: &'a C,
    policy: NumericPolicy,
    result: R,
}

fn envelope<C: Serialize, R: Serialize>(command: &'static str, config: &C, result: R) -> anyhow::Result<String> {
    let env = Envelope {
        command,
        config,
        policy: policy(),
        result,
    };
    Ok(to_json_pretty(&env)? + "\n")
}

/// Shared options after resolution.
#[derive(Debug, Clone, Serialize)]
pub struct Common {
    pub seed: u64,
    pub tol: f64,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl Common {
    fn resolve(cli: &Cli, file: &FileConfig) -> Result<Self, Failure> {
        let tol = cli.tol.or(file.tol).unwrap_or(DEFAULT_TOL);
        positive("tol", tol)?;
        Ok(Self {
            seed: cli.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            tol,
            out: cli.out.clone().or_else(|| file.out.clone()),
            format: cli.format.or(file.format).unwrap_or(Format::Json),
        })
    }

    fn file(&self, name: &str) -> Option<PathBuf> {
        self.out.as_ref().map(|d| d.join(name))
    }
}

fn positive(name: &str, x: f64) -> Result<(), Failure> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Failure::malformed(format!("{name} must be positive, got {x}")))
    }
}

/// Parse the config file and dispatch.
pub fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let common = Common::resolve(cli, &file)?;
    match &cli.command {
        Command::Classify(args) => cmd_classify(args, &file, &common),
        Command::Orbit(args) => cmd_orbit(args, &file, &common),
        Command::Conjugate(args) => cmd_conjugate(args, &file, &common),
        Command::Verify(args) => cmd_verify(args, &file, &common),
    }
}

/// `|Λ_jj|² > α` makes a diagonal map leave the domain; other families
/// either report this in their classification or are malformed.
fn violates_diagonal_bound(f: &MapDescriptor) -> bool {
    match f {
        MapDescriptor::DiagonalLinear { alpha, lambda } => {
            alpha.is_finite()
                && *alpha > 0.0
                && lambda.iter().any(|l| l.norm_sqr() > alpha + policy().self_map_tol * alpha.max(1.0))
        }
        _ => false,
    }
}

fn classification(f: &MapDescriptor) -> Result<ClassificationReport, Failure> {
    match classify(f) {
        Ok(r) => Ok(r),
        Err(_) if violates_diagonal_bound(f) => Ok(ClassificationReport {
            is_self_map: false,
            map_type: None,
            denjoy_wolff: None,
            multiplier_at_dw: None,
            brfp: None,
            brfp_multiplier: None,
            fixed_point_set: FixedPointSet::Unknown,
        }),
        Err(e) => Err(lib_failure(e)),
    }
}

fn self_map(map: &ResolvedMap) -> Result<ClassificationReport, Failure> {
    let r = classification(&map.descriptor)?;
    if !r.is_self_map {
        return Err(Failure {
            code: EXIT_NOT_SELF_MAP,
            message: format!("map from {} is not a self-map", map.source),
        });
    }
    map.descriptor.validate().map_err(lib_failure)?;
    Ok(r)
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassifyConfig {
    pub map: ResolvedMap,
    #[serde(flatten)]
    pub common: Common,
}

pub fn cmd_classify(args: &MapArgs, file: &FileConfig, common: &Common) -> anyhow::Result<Outcome> {
    let config = ClassifyConfig {
        map: resolve_map(args, file)?,
        common: common.clone(),
    };
    let report = classification(&config.map.descriptor)?;
    let json = envelope("classify", &config, &report)?;
    let code = if report.is_self_map { EXIT_OK } else { EXIT_NOT_SELF_MAP };
    let files = common.file("classify.json").map(|p| (p, json.clone())).into_iter().collect();
    Ok(Outcome {
        code,
        stdout: json,
        files,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitConfig {
    pub map: ResolvedMap,
    pub direction: Direction,
    pub start: SiegelPoint,
    pub a: f64,
    pub n: usize,
    #[serde(flatten)]
    pub common: Common,
}

pub fn cmd_orbit(args: &OrbitArgs, file: &FileConfig, common: &Common) -> anyhow::Result<Outcome> {
    let map = resolve_map(&args.map, file)?;
    self_map(&map)?;
    let direction = if args.forward {
        Direction::Forward
    } else if args.backward {
        Direction::Backward
    } else {
        file.direction.unwrap_or(Direction::Backward)
    };
    let start = args
        .start
        .as_deref()
        .or(file.start.as_deref())
        .ok_or_else(|| Failure::malformed("orbit needs --start"))?;
    let a = args.a.or(file.a).unwrap_or(DEFAULT_STEP_BOUND);
    if !(a > 0.0 && a < 1.0) {
        return Err(Failure::malformed(format!("step bound a = {a} not in (0, 1)")).into());
    }
    let config = OrbitConfig {
        start: parse_start(start, map.descriptor.dim())?,
        map,
        direction,
        a,
        n: args.n.or(file.n).unwrap_or(DEFAULT_ORBIT_LEN),
        common: common.clone(),
    };
    let f = &config.map.descriptor;
    match direction {
        Direction::Forward => {
            let orbit = forward_orbit(f, &config.start, config.n, common.tol).map_err(lib_failure)?;
            let json = envelope("orbit", &config, ForwardOrbitReport::from(&orbit))?;
            let dw = match &orbit.dw_estimate {
                Some(DenjoyWolff::Boundary { point }) => fmt_boundary(point),
                Some(DenjoyWolff::Interior { point }) => format!("interior {}", fmt_vector(&point.to_cvector())),
                None => "undetermined".into(),
            };
            let summary = format!(
                "forward orbit: {} points, converged = {}, dw = {dw}\n",
                orbit.points.len(),
                orbit.converged
            );
            let csv = forward_orbit_csv(&orbit)?;
            Ok(orbit_outcome(common, EXIT_OK, summary, json, csv))
        }
        Direction::Backward => {
            let (orbit, code) = match backward_orbit(f, &config.start, a, config.n, &SolverPolicy::default()) {
                Ok(o) => {
                    let code = if o.stop.is_some() { EXIT_SOLVER } else { EXIT_OK };
                    (o, code)
                }
                // Nothing beyond the start point: report it with the reason.
                Err(e @ (Error::NoBackwardStep { .. } | Error::SolverFailure { .. })) => {
                    let stop = match e {
                        Error::NoBackwardStep { best_step, .. } => StopReason::NoBackwardStep { best_step },
                        Error::SolverFailure { residual, .. } => StopReason::SolverFailure { residual },
                        _ => unreachable!(),
                    };
                    let o = BackwardOrbit::from_points(vec![config.start.clone()], a, f.chart(), Some(stop))
                        .map_err(lib_failure)?;
                    (o, EXIT_SOLVER)
                }
                Err(e) => return Err(lib_failure(e).into()),
            };
            let json = envelope("orbit", &config, BackwardOrbitReport::from(&orbit))?;
            let mut summary = format!(
                "backward orbit: {} points, q = {}",
                orbit.points.len(),
                fmt_boundary(&orbit.limit)
            );
            if let Some(b) = &orbit.limit_ball {
                summary += &format!(" (ball {})", fmt_boundary(b));
            }
            match orbit.multiplier_estimate {
                Some(m) => summary += &format!(", alpha = {}", fmt_num(m)),
                None => summary += ", alpha = n/a",
            }
            summary += &format!(", koranyi = {}", fmt_num(orbit.koranyi_certificate));
            if let Some(stop) = &orbit.stop {
                summary += &format!(", stopped: {}", serde_json::to_string(stop)?);
            }
            summary.push('\n');
            let csv = backward_orbit_csv(&orbit)?;
            Ok(orbit_outcome(common, code, summary, json, csv))
        }
    }
}

fn orbit_outcome(common: &Common, code: i32, summary: String, json: String, csv: String) -> Outcome {
    let mut files = Vec::new();
    if common.format.json() {
        files.extend(common.file("orbit.json").map(|p| (p, json)));
    }
    if common.format.csv() {
        files.extend(common.file("orbit.csv").map(|p| (p, csv)));
    }
    Outcome {
        code,
        stdout: summary,
        files,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjugateConfig {
    pub map: ResolvedMap,
    pub brfp: BoundaryPoint,
    pub alpha: f64,
    /// `given`, `classified` or `estimated`.
    pub alpha_source: &'static str,
    pub variant: VariantKind,
    pub n: usize,
    pub rho: f64,
    pub threshold: f64,
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Serialize)]
struct ConjugateResult<'a> {
    #[serde(flatten)]
    run: ConjugationReport<'a>,
    n0: usize,
    final_residual: String,
    passed: bool,
}

pub fn cmd_conjugate(args: &ConjugateArgs, file: &FileConfig, common: &Common) -> anyhow::Result<Outcome> {
    let map = resolve_map(&args.map, file)?;
    let class = self_map(&map)?;
    let f = &map.descriptor;
    let dim = f.dim();
    let given_brfp = args.brfp.as_deref().or(file.brfp.as_deref());
    let brfp = match given_brfp {
        Some(s) => parse_boundary(s, dim)?,
        None => class
            .brfp
            .clone()
            .ok_or_else(|| Failure::malformed("the map has no known repelling fixed point; pass --brfp"))?,
    };
    let (alpha, alpha_source) = match (args.alpha.or(file.alpha), given_brfp, class.brfp_multiplier) {
        (Some(a), _, _) => (a, "given"),
        (None, None, Some(a)) => (a, "classified"),
        _ => {
            let est = multiplier_at_boundary(f, &brfp, 0.5, 40).map_err(lib_failure)?;
            (est.value, "estimated")
        }
    };
    let rho = args.rho.or(file.rho).unwrap_or(DEFAULT_EXCLUSION_RADIUS);
    let threshold = args.threshold.or(file.threshold).unwrap_or(DEFAULT_THRESHOLD);
    positive("threshold", threshold)?;
    let variant = match args.variant.or(file.variant).unwrap_or(VariantArg::Basic) {
        VariantArg::Basic => VariantKind::Basic,
        VariantArg::Expandable => VariantKind::Expandable,
    };
    let config = ConjugateConfig {
        map,
        brfp,
        alpha,
        alpha_source,
        variant,
        n: args.n.or(file.n).unwrap_or(DEFAULT_CONJUGATION_LEN),
        rho,
        threshold,
        common: common.clone(),
    };
    let f = &config.map.descriptor;
    let special = special_backward_construct(f, &config.brfp, alpha, rho, config.n, &SolverPolicy::default())
        .map_err(lib_failure)?;
    let n0 = special.n0;
    let run = ConjugationRun::new(f, special, variant, default_grid(dim)).map_err(lib_failure)?;
    let last = *run.residuals.last().context("empty conjugation run")?;
    let passed = last < threshold;
    let mut table = String::from("n\tresidual\n");
    for (n, r) in run.residuals.iter().enumerate() {
        table += &format!("{n}\t{r:.6e}\n");
    }
    table += &format!(
        "final residual {last:.6e} {} threshold {threshold:e}\n",
        if passed { "<" } else { ">=" }
    );
    let json = envelope(
        "conjugate",
        &config,
        ConjugateResult {
            run: ConjugationReport::from(&run),
            n0,
            final_residual: siegel_dynamics::serial::fmt17(last),
            passed,
        },
    )?;
    let files = common.file("conjugate.json").map(|p| (p, json)).into_iter().collect();
    Ok(Outcome {
        code: if passed { EXIT_OK } else { EXIT_CHECK_FAILED },
        stdout: table,
        files,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyConfig {
    #[serde(flatten)]
    pub suite: SuiteConfig,
    #[serde(flatten)]
    pub common: Common,
}

pub fn cmd_verify(args: &VerifyArgs, file: &FileConfig, common: &Common) -> anyhow::Result<Outcome> {
    let config = SuiteConfig {
        seed: common.seed,
        samples: args.samples.or(file.samples).unwrap_or(DEFAULT_SAMPLES),
        fixtures: args.fixtures.clone().or_else(|| file.fixtures.clone()),
    };
    let report = run_suite(&config);
    let json = envelope(
        "verify",
        &VerifyConfig {
            suite: config,
            common: common.clone(),
        },
        &report,
    )?;
    let files = common.file("verify.json").map(|p| (p, json.clone())).into_iter().collect();
    Ok(Outcome {
        code: if report.all_passed() { EXIT_OK } else { EXIT_CHECK_FAILED },
        stdout: json,
        files,
    })
}

/// Rounded for display; summaries are not meant for round-tripping.
fn fmt_num(x: f64) -> String {
    let r = (x * 1e12).round() / 1e12;
    if r == 0.0 {
        "0".into()
    } else {
        format!("{r}")
    }
}

fn fmt_vector(v: &CVector) -> String {
    let parts: Vec<String> = v
        .coords()
        .iter()
        .map(|c| {
            let (re, im) = (fmt_num(c.re), fmt_num(c.im));
            if im == "0" {
                re
            } else if im.starts_with('-') {
                format!("{re}{im}i")
            } else {
                format!("{re}+{im}i")
            }
        })
        .collect();
    format!("({})", parts.join(", "))
}

fn fmt_boundary(q: &BoundaryPoint) -> String {
    match q {
        BoundaryPoint::Infinity { .. } => "infinity".into(),
        BoundaryPoint::Siegel { v } => fmt_vector(v),
        BoundaryPoint::Ball { v } => fmt_vector(v),
    }
}
