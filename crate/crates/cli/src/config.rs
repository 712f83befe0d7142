//! Config files, flag parsing and resolution (flags > config file > defaults).

use std::fmt;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use siegel_dynamics::geometry::{BoundaryPoint, CVector, SiegelPoint};
use siegel_dynamics::maps::{MapDescriptor, Quadratic};

use crate::args::{Format, MapArgs, VariantArg};
use crate::fixtures;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MALFORMED: i32 = 1;
pub const EXIT_NOT_SELF_MAP: i32 = 2;
pub const EXIT_CONSTRUCTION: i32 = 3;
pub const EXIT_CHECK_FAILED: i32 = 4;
pub const EXIT_SOLVER: i32 = 5;

/// An error carrying the process exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn malformed(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_MALFORMED,
            message: message.into(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for Failure {}

/// Exit code for a library error.
pub fn exit_code(e: &siegel_dynamics::Error) -> i32 {
    use siegel_dynamics::Error;
    match e {
        Error::NoBackwardStep { .. } | Error::SolverFailure { .. } => EXIT_SOLVER,
        Error::ConstructionFailed(_) => EXIT_CONSTRUCTION,
        _ => EXIT_MALFORMED,
    }
}

pub fn lib_failure(e: siegel_dynamics::Error) -> Failure {
    Failure {
        code: exit_code(&e),
        message: e.to_string(),
    }
}

/// A complex number in a config file: a number, `"re,im"`, or `{"re", "im"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexValue {
    Real(f64),
    Text(String),
    Parts { re: f64, im: f64 },
}

impl ComplexValue {
    fn resolve(&self) -> Result<Complex64, Failure> {
        match self {
            ComplexValue::Real(x) => Ok(Complex64::new(*x, 0.0)),
            ComplexValue::Text(s) => parse_complex(s),
            ComplexValue::Parts { re, im } => Ok(Complex64::new(*re, *im)),
        }
    }
}

/// Parameters read from `--config`. Every key mirrors a flag.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    /// Inline descriptor object, or a path or fixture name.
    pub map: Option<Value>,
    #[serde(rename = "A")]
    pub a_coef: Option<f64>,
    #[serde(rename = "B")]
    pub b_coef: Option<ComplexValue>,
    #[serde(rename = "C")]
    pub c_coef: Option<ComplexValue>,
    pub direction: Option<Direction>,
    pub start: Option<String>,
    pub a: Option<f64>,
    pub n: Option<usize>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub brfp: Option<String>,
    pub alpha: Option<f64>,
    pub variant: Option<VariantArg>,
    pub rho: Option<f64>,
    pub threshold: Option<f64>,
    pub samples: Option<usize>,
    pub fixtures: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::malformed(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Failure::malformed(format!("malformed config {}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    Backward,
}

/// A resolved map and where it came from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolvedMap {
    pub source: String,
    pub descriptor: MapDescriptor,
}

/// Resolve the map from flags first, then from the config file.
pub fn resolve_map(flags: &MapArgs, file: &FileConfig) -> Result<ResolvedMap, Failure> {
    if let Some(m) = &flags.map {
        return load_map(m);
    }
    if flags.a.is_some() || flags.b.is_some() || flags.c.is_some() {
        let b = flags.b.as_deref().map(parse_complex).transpose()?;
        let c = flags.c.as_deref().map(parse_complex).transpose()?;
        return quadratic_from(flags.a, b, c);
    }
    match &file.map {
        Some(Value::String(s)) => return load_map(s),
        Some(v @ Value::Object(_)) => {
            let descriptor = serde_json::from_value(v.clone())
                .map_err(|e| Failure::malformed(format!("malformed map descriptor: {e}")))?;
            return Ok(ResolvedMap {
                source: "config".into(),
                descriptor,
            });
        }
        Some(_) => return Err(Failure::malformed("config key `map` must be a string or an object")),
        None => {}
    }
    if file.a_coef.is_some() || file.b_coef.is_some() || file.c_coef.is_some() {
        let b = file.b_coef.as_ref().map(ComplexValue::resolve).transpose()?;
        let c = file.c_coef.as_ref().map(ComplexValue::resolve).transpose()?;
        return quadratic_from(file.a_coef, b, c);
    }
    Err(Failure::malformed("no map given: use --map or --A/--B/--C"))
}

fn quadratic_from(a: Option<f64>, b: Option<Complex64>, c: Option<Complex64>) -> Result<ResolvedMap, Failure> {
    match (a, b, c) {
        (Some(a), Some(b), Some(c)) => Ok(ResolvedMap {
            source: "coefficients".into(),
            descriptor: MapDescriptor::Quadratic(Quadratic::new(a, b, c)),
        }),
        _ => Err(Failure::malformed("quadratic maps need all of A, B and C")),
    }
}

/// Inline JSON, a descriptor file, or a bundled fixture name.
pub fn load_map(spec: &str) -> Result<ResolvedMap, Failure> {
    let trimmed = spec.trim_start();
    let (source, text) = if trimmed.starts_with('{') {
        ("inline".to_string(), spec.to_string())
    } else if Path::new(spec).is_file() {
        let text = std::fs::read_to_string(spec)
            .map_err(|e| Failure::malformed(format!("cannot read map {spec}: {e}")))?;
        (spec.to_string(), text)
    } else if let Some(text) = fixtures::bundled(spec) {
        (format!("bundled:{spec}"), text.to_string())
    } else {
        return Err(Failure::malformed(format!("map {spec}: no such file or bundled fixture")));
    };
    let descriptor =
        serde_json::from_str(&text).map_err(|e| Failure::malformed(format!("malformed map descriptor {source}: {e}")))?;
    Ok(ResolvedMap { source, descriptor })
}

/// `re` or `re,im`.
pub fn parse_complex(s: &str) -> Result<Complex64, Failure> {
    let xs = parse_reals(s)?;
    match xs[..] {
        [re] => Ok(Complex64::new(re, 0.0)),
        [re, im] => Ok(Complex64::new(re, im)),
        _ => Err(Failure::malformed(format!("expected `re` or `re,im`, got `{s}`"))),
    }
}

fn parse_reals(s: &str) -> Result<Vec<f64>, Failure> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| Failure::malformed(format!("`{}` is not a number", p.trim())))
        })
        .collect()
}

/// `dim` real coordinates, or `dim` pairs `re,im`.
pub fn parse_coords(s: &str, dim: usize) -> Result<CVector, Failure> {
    let xs = parse_reals(s)?;
    let coords: Vec<Complex64> = if xs.len() == dim {
        xs.iter().map(|&x| Complex64::new(x, 0.0)).collect()
    } else if xs.len() == 2 * dim {
        xs.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect()
    } else {
        return Err(Failure::malformed(format!(
            "expected {dim} real coordinates or {dim} re,im pairs, got {} numbers",
            xs.len()
        )));
    };
    CVector::new(coords).map_err(|e| Failure::malformed(e.to_string()))
}

pub fn parse_start(s: &str, dim: usize) -> Result<SiegelPoint, Failure> {
    let v = parse_coords(s, dim)?;
    SiegelPoint::from_cvector(&v).map_err(|e| Failure::malformed(format!("start point: {e}")))
}

/// `origin`, `infinity`, `siegel:<coords>` or `ball:<coords>`.
pub fn parse_boundary(s: &str, dim: usize) -> Result<BoundaryPoint, Failure> {
    let s = s.trim();
    let point = match s {
        "origin" => Ok(BoundaryPoint::siegel_origin(dim)),
        "infinity" => Ok(BoundaryPoint::infinity(dim)),
        _ => {
            if let Some(rest) = s.strip_prefix("siegel:") {
                BoundaryPoint::siegel(parse_coords(rest, dim)?)
            } else if let Some(rest) = s.strip_prefix("ball:") {
                BoundaryPoint::ball(parse_coords(rest, dim)?)
            } else {
                return Err(Failure::malformed(format!(
                    "boundary point `{s}`: expected origin, infinity, siegel:<coords> or ball:<coords>"
                )));
            }
        }
    };
    point.map_err(|e| Failure::malformed(format!("boundary point: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinates() {
        let p = parse_start("2,1", 2).unwrap();
        assert_eq!(p.z(), Complex64::new(2.0, 0.0));
        assert_eq!(p.w()[0], Complex64::new(1.0, 0.0));
        let p = parse_start("1,0.5,0,-0.25", 2).unwrap();
        assert_eq!(p.z(), Complex64::new(1.0, 0.5));
        assert_eq!(p.w()[0], Complex64::new(0.0, -0.25));
        assert_eq!(parse_start("1,2,3", 2).unwrap_err().code, EXIT_MALFORMED);
        assert_eq!(parse_start("0.1,1", 2).unwrap_err().code, EXIT_MALFORMED);
        assert_eq!(parse_complex("0.5").unwrap(), Complex64::new(0.5, 0.0));
        assert!(parse_complex("x").is_err());
    }

    #[test]
    fn boundary_points() {
        assert!(parse_boundary("infinity", 2).unwrap().is_infinity());
        assert_eq!(parse_boundary("origin", 2).unwrap(), BoundaryPoint::siegel_origin(2));
        assert!(parse_boundary("ball:1,0", 2).is_ok());
        assert!(parse_boundary("ball:0.5,0", 2).is_err());
        assert!(parse_boundary("siegel:1,1", 2).is_ok());
        assert!(parse_boundary("here", 2).is_err());
    }

    #[test]
    fn map_sources() {
        assert_eq!(load_map("quadpol.json").unwrap().source, "bundled:quadpol.json");
        let inline = load_map(r#"{"family":"quadratic","A":2,"B":{"re":1,"im":0},"C":{"re":1,"im":0}}"#).unwrap();
        assert_eq!(inline.descriptor, siegel_dynamics::maps::fixtures::quadpol());
        assert!(load_map("nope").is_err());
        let flags = MapArgs {
            a: Some(2.0),
            b: Some("1".into()),
            ..MapArgs::default()
        };
        assert!(resolve_map(&flags, &FileConfig::default()).is_err());
        let file: FileConfig = serde_json::from_str(r#"{"A": 2, "B": "1,0", "C": {"re": 1, "im": 0}}"#).unwrap();
        let m = resolve_map(&MapArgs::default(), &file).unwrap();
        assert_eq!(m.descriptor, siegel_dynamics::maps::fixtures::quadpol());
        assert!(serde_json::from_str::<FileConfig>(r#"{"bogus": 1}"#).is_err());
    }
}
