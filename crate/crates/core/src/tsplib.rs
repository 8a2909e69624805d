//! Reader for TSPLIB `EUC_2D` point clouds and the two Euclidean distance conventions.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::model::Point;
use crate::scalar::Scalar;

#[derive(Debug, Error)]
pub enum TsplibError {
    #[error("line {line}: {keyword}: {message}")]
    Syntax { keyword: String, line: usize, message: String },
    #[error("line {line}: unsupported EDGE_WEIGHT_TYPE {value} (only EUC_2D is supported)")]
    UnsupportedEdgeWeightType { value: String, line: usize },
    #[error("line {line}: NODE_COORD_SECTION has {found} rows but DIMENSION is {declared}")]
    DimensionMismatch { declared: usize, found: usize, line: usize },
    #[error("line {line}: missing {keyword}")]
    Missing { keyword: &'static str, line: usize },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl TsplibError {
    /// Line number the error is attributed to, if it came from the text.
    pub fn line(&self) -> Option<usize> {
        match self {
            TsplibError::Syntax { line, .. }
            | TsplibError::UnsupportedEdgeWeightType { line, .. }
            | TsplibError::DimensionMismatch { line, .. }
            | TsplibError::Missing { line, .. } => Some(*line),
            TsplibError::Io { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DistanceKind {
    /// `nint(sqrt(dx^2 + dy^2))`, halves rounded up.
    TsplibRounded,
    ExactEuclidean,
}

/// Euclidean distance under the given convention.
pub fn tsplib_distance<S: Scalar>(a: Point<S>, b: Point<S>, kind: DistanceKind) -> S {
    let dx = a.x - b.x;
    let dy = a.y - b.y;
    let d = (dx * dx + dy * dy).sqrt();
    match kind {
        DistanceKind::ExactEuclidean => d,
        DistanceKind::TsplibRounded => (d + S::of(0.5)).floor(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndexedPoint<S> {
    /// Node id as written in the file (1-based in standard files).
    pub index: usize,
    pub x: S,
    pub y: S,
}

impl<S: Copy> IndexedPoint<S> {
    pub fn point(&self) -> Point<S> {
        Point::new(self.x, self.y)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud<S> {
    pub name: String,
    pub points: Vec<IndexedPoint<S>>,
    pub declared_dimension: usize,
}

impl<S: Scalar> PointCloud<S> {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Renders the cloud back as an `EUC_2D` TSPLIB file.
    pub fn to_tsplib_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "NAME : {}", self.name);
        let _ = writeln!(out, "TYPE : TSP");
        let _ = writeln!(out, "DIMENSION : {}", self.points.len());
        let _ = writeln!(out, "EDGE_WEIGHT_TYPE : EUC_2D");
        let _ = writeln!(out, "NODE_COORD_SECTION");
        for p in &self.points {
            let _ = writeln!(out, "{} {} {}", p.index, p.x, p.y);
        }
        let _ = writeln!(out, "EOF");
        out
    }
}

pub fn parse_file<S: Scalar>(path: impl AsRef<Path>) -> Result<PointCloud<S>, TsplibError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)
        .map_err(|source| TsplibError::Io { path: path.display().to_string(), source })?;
    parse(&text)
}

const SECTIONS: &[&str] = &[
    "EDGE_WEIGHT_SECTION",
    "DISPLAY_DATA_SECTION",
    "DEMAND_SECTION",
    "DEPOT_SECTION",
    "FIXED_EDGES_SECTION",
    "TOUR_SECTION",
    "EDGE_DATA_SECTION",
];

/// Parses a TSPLIB file with an `EUC_2D` node coordinate section.
///
/// Header keywords may come in any order, with or without spaces around `:`.
pub fn parse<S: Scalar>(text: &str) -> Result<PointCloud<S>, TsplibError> {
    let mut name = String::new();
    let mut dimension: Option<(usize, usize)> = None;
    let mut edge_weight_type: Option<(String, usize)> = None;
    let mut coords: Option<(usize, Vec<IndexedPoint<S>>)> = None;
    let mut last_line = 0;

    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).peekable();
    while let Some((line_no, line)) = lines.next() {
        last_line = line_no;
        if line.is_empty() {
            continue;
        }
        let (key, value) = split_keyword(line);
        match key.as_str() {
            "EOF" => break,
            "NAME" => name = value.to_string(),
            "TYPE" | "COMMENT" | "CAPACITY" | "EDGE_WEIGHT_FORMAT" | "NODE_COORD_TYPE" | "DISPLAY_DATA_TYPE" => {}
            "DIMENSION" => {
                let d = value.parse::<usize>().map_err(|_| TsplibError::Syntax {
                    keyword: "DIMENSION".into(),
                    line: line_no,
                    message: format!("expected a nonnegative integer, got {value:?}"),
                })?;
                dimension = Some((d, line_no));
            }
            "EDGE_WEIGHT_TYPE" => edge_weight_type = Some((value.to_string(), line_no)),
            "NODE_COORD_SECTION" => {
                let mut rows = Vec::new();
                while let Some(&(row_no, row)) = lines.peek() {
                    if row.is_empty() {
                        lines.next();
                        continue;
                    }
                    if !row.starts_with(|c: char| c.is_ascii_digit() || c == '-' || c == '+') {
                        break;
                    }
                    rows.push(parse_row(row, row_no)?);
                    last_line = row_no;
                    lines.next();
                }
                coords = Some((line_no, rows));
            }
            section if SECTIONS.contains(&section) => {
                return Err(TsplibError::Syntax {
                    keyword: section.to_string(),
                    line: line_no,
                    message: "unsupported section".into(),
                });
            }
            other => {
                return Err(TsplibError::Syntax {
                    keyword: other.to_string(),
                    line: line_no,
                    message: "unknown keyword".into(),
                });
            }
        }
    }

    let (kind, kind_line) =
        edge_weight_type.ok_or(TsplibError::Missing { keyword: "EDGE_WEIGHT_TYPE", line: last_line })?;
    if kind != "EUC_2D" {
        return Err(TsplibError::UnsupportedEdgeWeightType { value: kind, line: kind_line });
    }
    let (declared, _) = dimension.ok_or(TsplibError::Missing { keyword: "DIMENSION", line: last_line })?;
    let (section_line, points) =
        coords.ok_or(TsplibError::Missing { keyword: "NODE_COORD_SECTION", line: last_line })?;
    if points.len() != declared {
        return Err(TsplibError::DimensionMismatch { declared, found: points.len(), line: section_line });
    }
    Ok(PointCloud { name, points, declared_dimension: declared })
}

fn split_keyword(line: &str) -> (String, &str) {
    match line.split_once(':') {
        Some((k, v)) => (k.trim().to_ascii_uppercase(), v.trim()),
        None => {
            let mut parts = line.splitn(2, char::is_whitespace);
            let key = parts.next().unwrap_or("").to_ascii_uppercase();
            (key, parts.next().unwrap_or("").trim())
        }
    }
}

fn parse_row<S: Scalar>(row: &str, line: usize) -> Result<IndexedPoint<S>, TsplibError> {
    let bad = |message: String| TsplibError::Syntax { keyword: "NODE_COORD_SECTION".into(), line, message };
    let fields: Vec<&str> = row.split_whitespace().collect();
    if fields.len() != 3 {
        return Err(bad(format!("expected `index x y`, got {row:?}")));
    }
    let index = fields[0].parse::<usize>().map_err(|_| bad(format!("bad node index {:?}", fields[0])))?;
    let coord = |s: &str| -> Result<S, TsplibError> {
        let v: f64 = s.parse().map_err(|_| bad(format!("bad coordinate {s:?}")))?;
        if !v.is_finite() {
            return Err(bad(format!("non-finite coordinate {s:?}")));
        }
        Ok(S::of(v))
    };
    Ok(IndexedPoint { index, x: coord(fields[1])?, y: coord(fields[2])? })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "NAME: tiny\nTYPE: TSP\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 3 4\n3 1.5 -2\nEOF\n";

    #[test]
    fn parses_minimal_file_in_order() {
        let cloud: PointCloud<f64> = parse(MINIMAL).unwrap();
        assert_eq!(cloud.name, "tiny");
        assert_eq!(cloud.declared_dimension, 3);
        let idx: Vec<usize> = cloud.points.iter().map(|p| p.index).collect();
        assert_eq!(idx, vec![1, 2, 3]);
        assert_eq!(cloud.points[2].x, 1.5);
        assert_eq!(cloud.points[2].y, -2.0);
    }

    #[test]
    fn tolerates_key_order_spacing_and_missing_eof() {
        let text = "NODE_COORD_SECTION\n  1   0 0\n\t2 1e1 2\nEDGE_WEIGHT_TYPE:EUC_2D\nDIMENSION : 2\nNAME :  x  \n";
        let cloud: PointCloud<f64> = parse(text).unwrap();
        assert_eq!(cloud.len(), 2);
        assert_eq!(cloud.points[1].x, 10.0);
        assert_eq!(cloud.name, "x");
    }

    #[test]
    fn keeps_nonconsecutive_indices() {
        let text = "DIMENSION: 2\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n7 0 0\n3 1 1\n";
        let cloud: PointCloud<f32> = parse(text).unwrap();
        assert_eq!(cloud.points[0].index, 7);
        assert_eq!(cloud.points[1].index, 3);
    }

    #[test]
    fn dimension_mismatch_names_the_section() {
        let text = "NAME: bad\nDIMENSION: 5\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 0 1\n3 1 0\n4 1 1\nEOF\n";
        let err = parse::<f64>(text).unwrap_err();
        assert!(matches!(err, TsplibError::DimensionMismatch { declared: 5, found: 4, line: 4 }), "{err}");
        assert!(err.to_string().contains("NODE_COORD_SECTION"));
    }

    #[test]
    fn rejects_other_edge_weight_types() {
        let text = "DIMENSION: 1\nEDGE_WEIGHT_TYPE: GEO\nNODE_COORD_SECTION\n1 0 0\n";
        let err = parse::<f64>(text).unwrap_err();
        assert!(matches!(err, TsplibError::UnsupportedEdgeWeightType { line: 2, .. }));
        assert!(err.to_string().contains("EDGE_WEIGHT_TYPE"));

        let text = "DIMENSION: 2\nEDGE_WEIGHT_TYPE: EXPLICIT\nEDGE_WEIGHT_SECTION\n0 1\n1 0\n";
        let err = parse::<f64>(text).unwrap_err();
        assert!(err.to_string().contains("EDGE_WEIGHT_SECTION"), "{err}");
    }

    #[test]
    fn missing_coordinate_section() {
        let err = parse::<f64>("NAME: a\nDIMENSION: 2\nEDGE_WEIGHT_TYPE: EUC_2D\nEOF\n").unwrap_err();
        assert!(matches!(err, TsplibError::Missing { keyword: "NODE_COORD_SECTION", .. }));
    }

    #[test]
    fn bad_rows_report_their_line() {
        let err = parse::<f64>("DIMENSION: 1\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 0\n").unwrap_err();
        assert_eq!(err.line(), Some(4));
    }

    #[test]
    fn distance_examples() {
        let o = Point::new(0.0f64, 0.0);
        for kind in [DistanceKind::ExactEuclidean, DistanceKind::TsplibRounded] {
            assert_eq!(tsplib_distance(o, o, kind), 0.0);
            assert_eq!(tsplib_distance(o, Point::new(3.0, 4.0), kind), 5.0);
        }
        let d = Point::new(1.0, 1.0);
        assert_eq!(tsplib_distance(o, d, DistanceKind::ExactEuclidean), 2f64.sqrt());
        assert_eq!(tsplib_distance(o, d, DistanceKind::TsplibRounded), 1.0);
        // halves round up
        assert_eq!(tsplib_distance(o, Point::new(2.5, 0.0), DistanceKind::TsplibRounded), 3.0);
    }

    #[test]
    fn round_trip_through_text() {
        let cloud: PointCloud<f64> = parse(MINIMAL).unwrap();
        let again: PointCloud<f64> = parse(&cloud.to_tsplib_string()).unwrap();
        assert_eq!(cloud.points, again.points);
    }
}
