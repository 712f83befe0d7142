//! Orbit and conjugation reports as JSON and CSV.
//!
//! Defects and steps are written as 17-significant-digit decimal strings so
//! that reports compare byte for byte across runs.

use std::io::Write;

use serde::Serialize;

use crate::conjugation::{ConjugationRun, Variant};
use crate::dynamics::{BackwardOrbit, ForwardOrbit, StopReason};
use crate::error::{Error, Result};
use crate::geometry::{BoundaryPoint, SiegelPoint};
use crate::maps::DenjoyWolff;
use crate::serial::fmt17;

fn export_err(e: impl std::fmt::Display) -> Error {
    Error::Export(e.to_string())
}

/// CSV with columns `n, re_z, im_z, re_w1, im_w1, .., t, d`. `d` is the step
/// to the next point and is empty on the last row.
pub fn write_orbit_csv<W: Write>(points: &[SiegelPoint], steps: &[f64], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let tangential = points.first().map_or(0, |p| p.dim() - 1);
    let mut header = vec!["n".to_string(), "re_z".into(), "im_z".into()];
    for j in 1..=tangential {
        header.push(format!("re_w{j}"));
        header.push(format!("im_w{j}"));
    }
    header.push("t".into());
    header.push("d".into());
    w.write_record(&header).map_err(export_err)?;
    for (n, p) in points.iter().enumerate() {
        let mut row = vec![n.to_string(), fmt17(p.z().re), fmt17(p.z().im)];
        for c in p.w().coords() {
            row.push(fmt17(c.re));
            row.push(fmt17(c.im));
        }
        row.push(fmt17(p.defect()));
        row.push(steps.get(n).map_or(String::new(), |d| fmt17(*d)));
        w.write_record(&row).map_err(export_err)?;
    }
    w.flush().map_err(export_err)
}

pub fn backward_orbit_csv(orbit: &BackwardOrbit) -> Result<String> {
    let mut buf = Vec::new();
    write_orbit_csv(&orbit.points, &orbit.steps, &mut buf)?;
    String::from_utf8(buf).map_err(export_err)
}

pub fn forward_orbit_csv(orbit: &ForwardOrbit) -> Result<String> {
    let mut buf = Vec::new();
    write_orbit_csv(&orbit.points, &orbit.steps, &mut buf)?;
    String::from_utf8(buf).map_err(export_err)
}

#[derive(Debug, Serialize)]
pub struct BackwardOrbitReport<'a> {
    pub kind: &'static str,
    pub points: &'a [SiegelPoint],
    pub defects: Vec<String>,
    pub steps: Vec<String>,
    pub step_bound: f64,
    pub limit: &'a BoundaryPoint,
    pub limit_ball: &'a Option<BoundaryPoint>,
    pub multiplier_estimate: Option<f64>,
    pub koranyi_certificate: f64,
    pub stop: &'a Option<StopReason>,
}

impl<'a> From<&'a BackwardOrbit> for BackwardOrbitReport<'a> {
    fn from(o: &'a BackwardOrbit) -> Self {
        Self {
            kind: "backward",
            points: &o.points,
            defects: o.defects.iter().copied().map(fmt17).collect(),
            steps: o.steps.iter().copied().map(fmt17).collect(),
            step_bound: o.step_bound,
            limit: &o.limit,
            limit_ball: &o.limit_ball,
            multiplier_estimate: o.multiplier_estimate,
            koranyi_certificate: o.koranyi_certificate,
            stop: &o.stop,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ForwardOrbitReport<'a> {
    pub kind: &'static str,
    pub points: &'a [SiegelPoint],
    pub defects: Vec<String>,
    pub steps: Vec<String>,
    pub dw_estimate: &'a Option<DenjoyWolff>,
    pub converged: bool,
}

impl<'a> From<&'a ForwardOrbit> for ForwardOrbitReport<'a> {
    fn from(o: &'a ForwardOrbit) -> Self {
        Self {
            kind: "forward",
            points: &o.points,
            defects: o.points.iter().map(|p| fmt17(p.defect())).collect(),
            steps: o.steps.iter().copied().map(fmt17).collect(),
            dw_estimate: &o.dw_estimate,
            converged: o.converged,
        }
    }
}

/// `{"alpha", "variant", "residuals", "interp_errors", "grid", "psi"}` with
/// `psi` the `[input, output]` pairs of the last approximation.
#[derive(Debug, Serialize)]
pub struct ConjugationReport<'a> {
    pub alpha: f64,
    pub variant: &'a Variant,
    pub residuals: Vec<String>,
    pub interp_errors: Vec<String>,
    pub grid: &'a [SiegelPoint],
    pub psi: Vec<(&'a SiegelPoint, &'a SiegelPoint)>,
}

impl<'a> From<&'a ConjugationRun> for ConjugationReport<'a> {
    fn from(r: &'a ConjugationRun) -> Self {
        let last = r.psi.last().map(Vec::as_slice).unwrap_or(&[]);
        Self {
            alpha: r.alpha,
            variant: &r.variant,
            residuals: r.residuals.iter().copied().map(fmt17).collect(),
            interp_errors: r.interp_errors.iter().copied().map(fmt17).collect(),
            grid: &r.grid,
            psi: r.grid.iter().zip(last).collect(),
        }
    }
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(export_err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{backward_orbit, forward_orbit, SolverPolicy};
    use crate::maps::fixtures;

    #[test]
    fn csv_layout() {
        let o = backward_orbit(&fixtures::quadpol(), &SiegelPoint::axis(1.0, 2).unwrap(), 0.34, 3, &SolverPolicy::default())
            .unwrap();
        let csv = backward_orbit_csv(&o).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "n,re_z,im_z,re_w1,im_w1,t,d");
        assert_eq!(lines.len(), 5);
        assert!(lines[1].starts_with("0,1.0000000000000000e0,"));
        assert!(lines[4].ends_with(','));
        let d: f64 = lines[1].rsplit(',').next().unwrap().parse().unwrap();
        assert!((d - 1.0 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn json_reports() {
        let f = fixtures::quadpol();
        let o = backward_orbit(&f, &SiegelPoint::axis(1.0, 2).unwrap(), 0.34, 5, &SolverPolicy::default()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&to_json_pretty(&BackwardOrbitReport::from(&o)).unwrap()).unwrap();
        assert_eq!(v["kind"], "backward");
        assert_eq!(v["defects"][1], "5.0000000000000000e-1");
        assert_eq!(v["limit"]["model"], "siegel");
        let fo = forward_orbit(&f, &SiegelPoint::axis(1.0, 2).unwrap(), 20, 1e-10).unwrap();
        let v: serde_json::Value = serde_json::from_str(&to_json_pretty(&ForwardOrbitReport::from(&fo)).unwrap()).unwrap();
        assert_eq!(v["dw_estimate"]["point"]["model"], "infinity");
        assert_eq!(forward_orbit_csv(&fo).unwrap().lines().count(), 22);
    }
}
