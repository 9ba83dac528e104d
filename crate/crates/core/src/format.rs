//! Point-set files.
//!
//! JSON: `{"dim": n, "points": [[c1, ..., cn], ...]}` with an optional
//! `"convention"` tag saying how coordinates are based. CSV: a header
//! `x1,...,xn` and one point per row. Coordinates are written verbatim in
//! both.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Point, PointSet};

/// Box coordinates in `1..=k`, as in the extremal-set tables.
pub const BOX_CONVENTION: &str = "paper-1-based";
/// Torus coordinates as residues in `0..k`.
pub const TORUS_CONVENTION: &str = "zero-based-residues";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    /// Guesses from the content: JSON starts with `{`.
    pub fn sniff(text: &str) -> Format {
        if text.trim_start().starts_with('{') {
            Format::Json
        } else {
            Format::Csv
        }
    }
}

#[derive(Serialize, Deserialize)]
struct PointSetJson {
    dim: usize,
    points: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    convention: Option<String>,
}

pub fn to_json_value(set: &PointSet, convention: Option<&str>) -> serde_json::Value {
    serde_json::to_value(PointSetJson {
        dim: set.dim(),
        points: set.iter().map(|p| p.coords().to_vec()).collect(),
        convention: convention.map(str::to_owned),
    })
    .expect("point sets always serialize")
}

pub fn to_json(set: &PointSet, convention: Option<&str>) -> String {
    to_json_value(set, convention).to_string()
}

pub fn from_json(text: &str) -> Result<PointSet> {
    let raw: PointSetJson =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("json: {e}")))?;
    let points = raw
        .points
        .into_iter()
        .map(|row| {
            if row.len() != raw.dim {
                return Err(Error::DimensionMismatch {
                    expected: raw.dim,
                    found: row.len(),
                });
            }
            Point::new(row)
        })
        .collect::<Result<Vec<_>>>()?;
    PointSet::new(points)
}

pub fn to_csv(set: &PointSet) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header: Vec<String> = (1..=set.dim()).map(|j| format!("x{j}")).collect();
    w.write_record(&header).expect("in-memory write");
    for p in set {
        w.write_record(p.coords().iter().map(i64::to_string))
            .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}

pub fn from_csv(text: &str) -> Result<PointSet> {
    let mut r = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = r
        .headers()
        .map_err(|e| Error::Parse(format!("csv: {e}")))?
        .clone();
    let dim = header.len();
    let expected = (1..=dim).map(|j| format!("x{j}"));
    if dim == 0 || !header.iter().eq(expected.clone()) {
        return Err(Error::Parse(format!(
            "csv header should be {}",
            expected.collect::<Vec<_>>().join(",")
        )));
    }
    let mut points = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| match e.kind() {
            csv::ErrorKind::UnequalLengths { len, .. } => Error::DimensionMismatch {
                expected: dim,
                found: *len as usize,
            },
            _ => Error::Parse(format!("csv: {e}")),
        })?;
        let coords = rec
            .iter()
            .map(|f| {
                f.parse::<i64>()
                    .map_err(|_| Error::Parse(format!("csv row {}: bad integer `{f}`", line + 2)))
            })
            .collect::<Result<Vec<_>>>()?;
        points.push(Point::new(coords)?);
    }
    PointSet::new(points)
}

pub fn parse(text: &str, format: Format) -> Result<PointSet> {
    match format {
        Format::Json => from_json(text),
        Format::Csv => from_csv(text),
    }
}

pub fn write(set: &PointSet, format: Format, convention: Option<&str>) -> String {
    match format {
        Format::Json => {
            let mut s = to_json(set, convention);
            s.push('\n');
            s
        }
        Format::Csv => to_csv(set),
    }
}
