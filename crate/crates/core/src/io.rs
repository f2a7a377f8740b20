//! CSV exchange format for points: vectors one value per line, matrices one
//! row per line with comma separators, LF endings, '.' decimals.

use crate::error::{Error, Result};
use crate::geometry::Point;

/// Parses a vector or matrix CSV into a flattened (row-major) point.
pub fn parse_point_csv(text: &str) -> Result<Point> {
    let mut coords = Vec::new();
    let mut width: Option<usize> = None;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let row: Vec<&str> = line.split(',').collect();
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(Error::InvalidParameter(format!(
                    "line {}: expected {w} values, got {}",
                    lineno + 1,
                    row.len()
                )))
            }
            _ => {}
        }
        for cell in row {
            let v: f64 = cell.trim().parse().map_err(|_| {
                Error::InvalidParameter(format!("line {}: bad value `{cell}`", lineno + 1))
            })?;
            coords.push(v);
        }
    }
    if coords.is_empty() {
        return Err(Error::EmptyInput);
    }
    Point::new(coords)
}

/// Formats a point as CSV. With a shape, one matrix row per line; otherwise
/// one value per line.
pub fn format_point_csv(point: &Point, shape: Option<(usize, usize)>) -> String {
    let coords = point.coords();
    let mut out = String::new();
    match shape {
        Some((rows, cols)) => {
            debug_assert_eq!(rows * cols, coords.len());
            for r in 0..rows {
                let row: Vec<String> = (0..cols)
                    .map(|c| format!("{}", coords[r * cols + c]))
                    .collect();
                out.push_str(&row.join(","));
                out.push('\n');
            }
        }
        None => {
            for v in coords {
                out.push_str(&format!("{v}\n"));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vector_round_trip() {
        let p = Point::new(vec![1.5, -2.0, 0.25]).unwrap();
        let csv = format_point_csv(&p, None);
        assert_eq!(csv, "1.5\n-2\n0.25\n");
        let back = parse_point_csv(&csv).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn matrix_round_trip() {
        let p = Point::new(vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let csv = format_point_csv(&p, Some((2, 2)));
        assert_eq!(csv, "1,2\n3,4\n");
        let back = parse_point_csv(&csv).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(parse_point_csv("1,2\n3\n").is_err());
        assert!(parse_point_csv("").is_err());
        assert!(parse_point_csv("1,oops\n").is_err());
    }
}
