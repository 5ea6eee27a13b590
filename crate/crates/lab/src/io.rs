//! Body files, report JSON and CSV tables.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use spaceform_core::ballspec::RatioCurve;
use spaceform_core::convexbody::ConvexBody;
use spaceform_core::laplace2d::ConvergenceStudy;
use spaceform_core::rearrange::RadialProfile;
use spaceform_core::spaceform::{ChartKind, Curvature};
use spaceform_core::stability::{ContextValue, SweepPoint, VerificationReport};

use crate::LabError;

/// On-disk body: straight-chart polygon plus an optional base point.
///
/// ```json
/// {"delta": 0, "vertices": [[0,0],[1,0],[1,1],[0,1]], "base": [0.5,0.5]}
/// ```
///
/// `chart` defaults to the straight chart of `delta`; `base` defaults to the
/// vertex mean.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BodyFile {
    pub delta: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chart: Option<String>,
    pub vertices: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl BodyFile {
    pub fn from_body(body: &ConvexBody) -> Self {
        Self {
            delta: body.delta.delta(),
            chart: Some(body.chart.name().into()),
            vertices: body.vertices.clone(),
            base: Some(body.base),
            name: None,
        }
    }

    pub fn to_body(&self) -> Result<ConvexBody, spaceform_core::Error> {
        let delta = Curvature::new(self.delta)?;
        let chart = match &self.chart {
            None => delta.straight_chart(),
            Some(c) => ChartKind::from_name(c)
                .ok_or_else(|| spaceform_core::Error::InvalidInput(format!("unknown chart {c:?}")))?,
        };
        let base = self.base.unwrap_or_else(|| {
            let n = self.vertices.len().max(1) as f64;
            let s = self.vertices.iter().fold([0.0, 0.0], |a, v| [a[0] + v[0], a[1] + v[1]]);
            [s[0] / n, s[1] / n]
        });
        ConvexBody::new(delta, chart, self.vertices.clone(), base)
    }
}

/// Parses a body from JSON text. `origin` names the source in messages.
pub fn parse_body(text: &str, origin: &str) -> Result<ConvexBody, LabError> {
    let file: BodyFile = serde_json::from_str(text).map_err(|e| LabError::Parse {
        origin: origin.into(),
        line: e.line(),
        column: e.column(),
        message: strip_position(&e.to_string()),
    })?;
    file.to_body().map_err(|e| LabError::Body { origin: origin.into(), source: e })
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

pub fn read_body(path: &Path) -> Result<ConvexBody, LabError> {
    let text = std::fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
    parse_body(&text, &path.display().to_string())
}

pub fn body_json(body: &ConvexBody) -> Value {
    serde_json::to_value(BodyFile::from_body(body)).expect("body serializes")
}

/// JSON has no infinities; they are written as strings.
fn number(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        json!("nan")
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

pub fn report_json(r: &VerificationReport) -> Value {
    let mut ctx = Map::new();
    for (k, v) in &r.context {
        let v = match v {
            ContextValue::Num(x) => number(*x),
            ContextValue::Int(i) => json!(i),
            ContextValue::Text(s) => json!(s),
            ContextValue::Flag(b) => json!(b),
        };
        ctx.insert(k.clone(), v);
    }
    json!({
        "name": r.name,
        "lhs": number(r.lhs),
        "rhs": number(r.rhs),
        "slack": number(r.slack),
        "tolerance": number(r.tolerance),
        "pass": r.pass,
        "context": Value::Object(ctx),
    })
}

pub fn study_json(study: &ConvergenceStudy) -> Value {
    let res = &study.result;
    let k = res.lambdas.len();
    let ex = res.extrapolated.as_ref();
    json!({
        "lambdas": (0..k).map(|i| number(res.lambda(i))).collect::<Vec<_>>(),
        "errors": (0..k).map(|i| number(res.error(i))).collect::<Vec<_>>(),
        "tolerances": (0..k).map(|i| number(res.tolerance(i))).collect::<Vec<_>>(),
        "orders": ex.map(|e| e.orders.iter().map(|&p| number(p)).collect::<Vec<_>>()),
        "monotone": ex.map(|e| e.monotone),
        "finest": {
            "h": res.h,
            "lambdas": res.lambdas.iter().map(|&l| number(l)).collect::<Vec<_>>(),
            "residuals": res.residuals.iter().map(|&l| number(l)).collect::<Vec<_>>(),
        },
        "levels": study.levels.iter().map(|l| json!({
            "h": l.h,
            "vertices": l.vertices,
            "unknowns": l.unknowns,
            "lambdas": l.lambdas,
        })).collect::<Vec<_>>(),
    })
}

pub fn profile_json(p: &RadialProfile) -> Value {
    json!({
        "decreasing": p.decreasing,
        "r_star": p.r_star,
        "radii": p.radii,
        "values": p.values,
    })
}

pub fn write_json<W: Write>(mut w: W, v: &Value) -> Result<(), LabError> {
    serde_json::to_writer_pretty(&mut w, v).map_err(|e| LabError::Output(e.to_string()))?;
    writeln!(w).map_err(|e| LabError::Output(e.to_string()))
}

fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w)
}

fn finish<W: Write>(mut wr: csv::Writer<W>) -> Result<(), LabError> {
    wr.flush().map_err(|e| LabError::Output(e.to_string()))
}

fn out_err(e: csv::Error) -> LabError {
    LabError::Output(e.to_string())
}

pub const SWEEP_HEADER: [&str; 6] =
    ["eps", "d_hausdorff", "d_metric", "lambda1_excess", "lambda2_deficit", "ppw_deficit"];

pub fn write_sweep_csv<W: Write>(w: W, points: &[SweepPoint]) -> Result<(), LabError> {
    let mut wr = csv_writer(w);
    wr.write_record(SWEEP_HEADER).map_err(out_err)?;
    for p in points {
        let row = [p.eps, p.d_hausdorff, p.d_metric, p.lambda1_excess, p.lambda2_deficit, p.ppw_deficit];
        wr.write_record(row.iter().map(|x| x.to_string())).map_err(out_err)?;
    }
    finish(wr)
}

pub fn write_ratio_csv<W: Write>(w: W, curve: &RatioCurve) -> Result<(), LabError> {
    let mut wr = csv_writer(w);
    wr.write_record(["r", "lambda1", "lambda2", "ratio", "gap"]).map_err(out_err)?;
    for row in &curve.rows {
        let vals = [row.r, row.lambda1, row.lambda2, row.ratio, row.lambda2 - row.lambda1];
        wr.write_record(vals.iter().map(|x| x.to_string())).map_err(out_err)?;
    }
    finish(wr)
}

pub fn ratio_json(curve: &RatioCurve) -> Value {
    json!({
        "delta": curve.delta.delta(),
        "n": curve.n,
        "strictly_increasing": curve.strictly_increasing,
        "strictly_decreasing": curve.strictly_decreasing,
        "rows": curve.rows.iter().map(|r| json!({
            "r": r.r,
            "lambda1": r.lambda1,
            "lambda2": r.lambda2,
            "ratio": r.ratio,
            "gap": r.lambda2 - r.lambda1,
        })).collect::<Vec<_>>(),
    })
}

/// One row per report, labelled by body.
pub fn write_reports_csv<W: Write>(w: W, rows: &[(&str, &VerificationReport)]) -> Result<(), LabError> {
    let mut wr = csv_writer(w);
    wr.write_record(["body", "name", "lhs", "rhs", "slack", "tolerance", "pass"]).map_err(out_err)?;
    for (label, r) in rows {
        let row = [
            label.to_string(),
            r.name.clone(),
            r.lhs.to_string(),
            r.rhs.to_string(),
            r.slack.to_string(),
            r.tolerance.to_string(),
            r.pass.to_string(),
        ];
        wr.write_record(row).map_err(out_err)?;
    }
    finish(wr)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn body_round_trip() {
        let text = r#"{"delta": 0, "vertices": [[0,0],[1,0],[1,1],[0,1]]}"#;
        let b = parse_body(text, "sq").unwrap();
        assert_eq!(b.base, [0.5, 0.5]);
        assert_eq!(b.chart, ChartKind::Plane);
        let again = parse_body(&body_json(&b).to_string(), "again").unwrap();
        assert_eq!(again, b);
    }

    #[test]
    fn parse_errors_carry_the_line() {
        let text = "{\n  \"delta\": 0,\n  \"vertices\": [[0,0],[1,0] [1,1]]\n}";
        match parse_body(text, "bad.json") {
            Err(LabError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        let e = parse_body(r#"{"delta": 2, "vertices": []}"#, "x").unwrap_err();
        assert!(matches!(e, LabError::Body { .. }));
    }

    #[test]
    fn infinities_become_strings() {
        let r = VerificationReport::new("t", 1.0, f64::INFINITY, 0.0).with("x", f64::NAN);
        let v = report_json(&r);
        assert_eq!(v["rhs"], "inf");
        assert_eq!(v["context"]["x"], "nan");
        assert_eq!(v["pass"], true);
    }

    #[test]
    fn sweep_header() {
        let mut buf = Vec::new();
        write_sweep_csv(&mut buf, &[]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "eps,d_hausdorff,d_metric,lambda1_excess,lambda2_deficit,ppw_deficit\n"
        );
    }
}
