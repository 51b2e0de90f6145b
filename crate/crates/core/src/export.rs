//! Polyline serialization to OBJ, CSV and JSON with 17 significant digits.

use std::fmt::{self, Write as _};
use std::path::Path;
use std::str::FromStr;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::geom::{Point3, Polyline3};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Json,
    Csv,
    Obj,
}

impl fmt::Display for ExportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExportFormat::Json => "json",
            ExportFormat::Csv => "csv",
            ExportFormat::Obj => "obj",
        })
    }
}

impl FromStr for ExportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(ExportFormat::Json),
            "csv" => Ok(ExportFormat::Csv),
            "obj" => Ok(ExportFormat::Obj),
            _ => Err(Error::InvalidArgument(format!("unknown format {s:?}"))),
        }
    }
}

/// Scientific notation with 17 significant digits; parses back exactly.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn xyz(p: &Point3, sep: &str) -> String {
    [p.x, p.y, p.z].map(fmt17).join(sep)
}

pub fn to_obj(poly: &Polyline3) -> String {
    let mut out = String::new();
    for p in poly.points() {
        writeln!(out, "v {}", xyz(p, " ")).unwrap();
    }
    out.push('l');
    for i in 1..=poly.len() {
        write!(out, " {i}").unwrap();
    }
    if poly.is_closed() {
        out.push_str(" 1");
    }
    out.push('\n');
    out
}

pub fn to_csv(poly: &Polyline3) -> String {
    poly.points().iter().map(|p| xyz(p, ",") + "\n").collect()
}

pub fn to_json(poly: &Polyline3) -> String {
    let pts: Vec<String> = poly
        .points()
        .iter()
        .map(|p| format!("[{}]", xyz(p, ",")))
        .collect();
    format!(
        "{{\"points\":[{}],\"closed\":{}}}\n",
        pts.join(","),
        poly.is_closed()
    )
}

pub fn export_string(poly: &Polyline3, format: ExportFormat) -> String {
    match format {
        ExportFormat::Json => to_json(poly),
        ExportFormat::Csv => to_csv(poly),
        ExportFormat::Obj => to_obj(poly),
    }
}

pub fn export_geometry(poly: &Polyline3, format: ExportFormat, path: &Path) -> Result<()> {
    std::fs::write(path, export_string(poly, format))?;
    Ok(())
}

#[derive(Deserialize)]
struct JsonPolyline {
    points: Vec<[f64; 3]>,
    closed: bool,
}

pub fn parse_json(text: &str) -> Result<Polyline3> {
    let raw: JsonPolyline = serde_json::from_str(text)?;
    let pts = raw.points.into_iter().map(Point3::from).collect();
    Polyline3::new(pts, raw.closed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{build_l3, make_l4, ParamTriple, L3_PUBLISHED};
    use crate::geom::Vec3;

    fn three() -> Polyline3 {
        Polyline3::open(vec![
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.5, 0.0),
            Vec3::new(0.1, 0.2, 0.3),
        ])
        .unwrap()
    }

    #[test]
    fn obj_open_polyline() {
        let s = to_obj(&three());
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[..3].iter().all(|l| l.starts_with("v ")));
        assert_eq!(lines[3], "l 1 2 3");
    }

    #[test]
    fn obj_closed_polyline_repeats_first_index() {
        assert_eq!(to_obj(&make_l4()).lines().last(), Some("l 1 2 3 4 1"));
    }

    #[test]
    fn csv_rows() {
        let s = to_csv(&three());
        assert_eq!(s.lines().count(), 3);
        assert_eq!(s.lines().next(), Some("0.0000000000000000e0,0.0000000000000000e0,0.0000000000000000e0"));
    }

    #[test]
    fn json_round_trip_is_exact() {
        let p = build_l3(&ParamTriple::try_from(L3_PUBLISHED).unwrap(), 64).unwrap();
        assert_eq!(parse_json(&to_json(&p)).unwrap(), p);
        let l4 = make_l4();
        assert_eq!(parse_json(&to_json(&l4)).unwrap(), l4);
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt17(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt17(0.1).parse::<f64>().unwrap(), 0.1);
    }
}
