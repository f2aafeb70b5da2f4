//! File formats: state JSON, parameter grids and curve output.
//!
//! A state file holds either a weight array `[0.5, 0.5]`, an object
//! `{"weights": [...]}`, or a matrix `{"dim": d, "re": [[..]], "im": [[..]]}`.

use crate::classical::ClassicalWeight;
use crate::composite::HypothesisSet;
use crate::divergence::State;
use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::gallery::CounterexampleReport;
use crate::hermcore::MatrixJson;
use serde::{Deserialize, Serialize};
use std::io::Write;

#[derive(Deserialize)]
#[serde(untagged)]
enum StateJson {
    Array(Vec<f64>),
    Weights { weights: Vec<f64> },
    Matrix(MatrixJson),
}

fn parse_err(what: &str, e: serde_json::Error) -> Error {
    Error::Parse(format!("{what}: line {} column {}: {e}", e.line(), e.column()))
}

/// Parses a classical or quantum state from JSON text.
pub fn parse_state(text: &str) -> Result<State> {
    let raw: StateJson = serde_json::from_str(text).map_err(|e| parse_err("state", e))?;
    match raw {
        StateJson::Array(w) | StateJson::Weights { weights: w } => Ok(State::Classical(ClassicalWeight::new(w)?)),
        StateJson::Matrix(m) => Ok(State::Quantum(m.to_op()?)),
    }
}

/// Reads a state file, prefixing errors with the path.
pub fn read_state(path: &std::path::Path) -> Result<State> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_state(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn read_hypothesis_set(path: &std::path::Path) -> Result<HypothesisSet> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    HypothesisSet::from_json(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

/// Serializes a state in the format accepted by [`parse_state`].
pub fn state_to_json(s: &State) -> String {
    match s {
        State::Classical(w) => serde_json::to_string(w.as_slice()).expect("finite weights"),
        State::Quantum(h) => serde_json::to_string(&MatrixJson::from_op(h)).expect("finite matrix"),
    }
}

/// Parses `start:stop:step` (inclusive of `stop` up to rounding) or a comma list.
/// The result is nonempty and strictly increasing.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let num = |s: &str| -> Result<f64> {
        s.trim()
            .parse::<f64>()
            .map_err(|e| Error::Parse(format!("grid \"{spec}\": \"{s}\": {e}")))
    };
    let out: Vec<f64> = if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("grid \"{spec}\": expected start:stop:step")));
        }
        let (a, b, h) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if !(h > 0.0) || !(b >= a) || !a.is_finite() || !b.is_finite() {
            return Err(Error::Parse(format!("grid \"{spec}\": need start <= stop and step > 0")));
        }
        let count = ((b - a) / h + 1e-9).floor() as usize + 1;
        if count > 1_000_000 {
            return Err(Error::CapExceeded { required: count, cap: 1_000_000 });
        }
        // round to the step's decimal resolution so 0.1-steps print cleanly
        (0..count).map(|i| tidy(a + i as f64 * h)).collect()
    } else {
        spec.split(',').map(num).collect::<Result<_>>()?
    };
    if out.is_empty() || out.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Parse(format!("grid \"{spec}\": must be nonempty and strictly increasing")));
    }
    Ok(out)
}

fn tidy(x: f64) -> f64 {
    let r = (x * 1e12).round() / 1e12;
    if (r - x).abs() < 1e-13 {
        r
    } else {
        x
    }
}

/// One row of a curve: abscissa, value, and an optional regime tag.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvePoint {
    pub x: f64,
    pub value: ExtReal,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case: Option<String>,
}

impl CurvePoint {
    pub fn new(x: f64, value: impl Into<ExtReal>) -> Self {
        Self {
            x,
            value: value.into(),
            case: None,
        }
    }

    pub fn tagged(x: f64, value: impl Into<ExtReal>, case: impl Into<String>) -> Self {
        Self {
            x,
            value: value.into(),
            case: Some(case.into()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::Parse(format!("unknown format \"{s}\" (json or csv)"))),
        }
    }
}

fn fmt_value(v: ExtReal) -> String {
    match v {
        ExtReal::Finite(x) => format!("{x}"),
        ExtReal::PosInf => "inf".into(),
    }
}

/// Writes `(x, value[, case])` rows. CSV uses `inf` for `+∞`; the `case`
/// column appears only when some row is tagged.
pub fn emit_curve(points: &[CurvePoint], format: Format, out: &mut impl Write) -> std::io::Result<()> {
    match format {
        Format::Csv => {
            let tagged = points.iter().any(|p| p.case.is_some());
            writeln!(out, "{}", if tagged { "x,value,case" } else { "x,value" })?;
            for p in points {
                if tagged {
                    writeln!(out, "{},{},{}", p.x, fmt_value(p.value), p.case.as_deref().unwrap_or(""))?;
                } else {
                    writeln!(out, "{},{}", p.x, fmt_value(p.value))?;
                }
            }
            Ok(())
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, points)?;
            writeln!(out)
        }
    }
}

fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x}")
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

const REPORT_CSV_HEADER: &str = "report,name,lhs,relation,rhs,slack,tol,pass,informational";

fn report_csv_rows(rep: &CounterexampleReport, out: &mut impl Write) -> std::io::Result<()> {
    for row in &rep.inequalities {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            csv_field(&rep.name),
            csv_field(&row.name),
            fmt_value(row.lhs),
            row.relation.symbol(),
            fmt_value(row.rhs),
            fmt_float(row.slack),
            fmt_float(row.tol),
            row.pass,
            row.informational
        )?;
    }
    Ok(())
}

/// One report: a JSON object, or one CSV row per inequality.
pub fn emit_report(rep: &CounterexampleReport, format: Format, out: &mut impl Write) -> std::io::Result<()> {
    emit_reports_inner(std::slice::from_ref(rep), format, false, out)
}

/// Several reports: a JSON array, or the concatenated CSV rows under one header.
pub fn emit_reports(reps: &[CounterexampleReport], format: Format, out: &mut impl Write) -> std::io::Result<()> {
    emit_reports_inner(reps, format, true, out)
}

fn emit_reports_inner(reps: &[CounterexampleReport], format: Format, array: bool, out: &mut impl Write) -> std::io::Result<()> {
    match format {
        Format::Csv => {
            writeln!(out, "{REPORT_CSV_HEADER}")?;
            reps.iter().try_for_each(|r| report_csv_rows(r, out))
        }
        Format::Json => {
            if array {
                serde_json::to_writer_pretty(&mut *out, reps)?;
            } else {
                serde_json::to_writer_pretty(&mut *out, &reps[0])?;
            }
            writeln!(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn state_formats() {
        assert!(parse_state("[0.25, 0.75]").unwrap().is_classical());
        assert!(parse_state(r#"{"weights": [1, 0]}"#).unwrap().is_classical());
        let q = parse_state(r#"{"dim": 2, "re": [[0.5, 0], [0, 0.5]]}"#).unwrap();
        assert_eq!(q.dim(), 2);
        let back = parse_state(&state_to_json(&q)).unwrap();
        assert_eq!(back, q);
        let err = parse_state("{\"dim\": 2,\n \"re\": [[0.5, 0], [0, 0.5]],\n \"im\": 3}").unwrap_err();
        assert!(matches!(err, Error::Parse(_)));
    }

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0.2:0.5:0.1").unwrap(), vec![0.2, 0.3, 0.4, 0.5]);
        assert_eq!(parse_grid("1,2,5").unwrap(), vec![1.0, 2.0, 5.0]);
        assert!(parse_grid("1,1").is_err());
        assert!(parse_grid("1:0:0.1").is_err());
        assert!(parse_grid("0:1:0").is_err());
        assert!(parse_grid("a:1:1").is_err());
    }

    #[test]
    fn empty_curve_is_header_only() {
        let mut buf = Vec::new();
        emit_curve(&[], Format::Csv, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "x,value\n");
    }

    #[test]
    fn infinity_sentinel_and_tags() {
        let pts = vec![CurvePoint::tagged(0.1, ExtReal::PosInf, "zero"), CurvePoint::tagged(0.2, 0.5, "interior")];
        let mut buf = Vec::new();
        emit_curve(&pts, Format::Csv, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "x,value,case\n0.1,inf,zero\n0.2,0.5,interior\n");
        let mut buf = Vec::new();
        emit_curve(&pts, Format::Json, &mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().contains("\"inf\""));
    }

    #[test]
    fn report_csv_quotes_names() {
        use crate::gallery::{Inequality, Relation};
        let mut rep = CounterexampleReport::new("r");
        rep.push(Inequality::finite("a, b", 1.0, Relation::Le, 2.0, 0.0));
        rep.push(Inequality::new("inf row", ExtReal::PosInf, Relation::Ge, ExtReal::Finite(0.0), 0.0));
        let mut buf = Vec::new();
        emit_report(&rep, Format::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], REPORT_CSV_HEADER);
        assert!(lines[1].starts_with("r,\"a, b\",1,<=,2,"));
        assert!(lines[2].starts_with("r,inf row,inf,>=,0,inf,"));
    }
}
