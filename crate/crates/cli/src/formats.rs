//! Wire formats: scalar parsing, the CSV point format, and the JSON report.
//!
//! CSV files carry a header `x1,...,xd` and one point per row; tokens are
//! either exact fractions `p/q` or decimals. Exact scalars serialize back as
//! fractions so a round trip stays exact.

use mindisp_core::{
    bound_inverse, bound_sqrt, breakpoint_closed_form, cardinality_closed_form, AxisBox,
    CardinalityResult, ClosedFormRounding, DispersionResult, Error, PointSet, Result, Scalar,
};
use serde::Serialize;

/// Parses `p/q`, a decimal (approximate mode, optional tolerance override),
/// or `R<k>` for the k-th breakpoint of the step function.
pub fn parse_scalar(token: &str, tol: Option<f64>) -> Result<Scalar> {
    let trimmed = token.trim();
    if let Some(index) = trimmed
        .strip_prefix('R')
        .and_then(|rest| rest.parse::<u32>().ok())
    {
        return breakpoint_closed_form(index);
    }
    let scalar: Scalar = trimmed.parse()?;
    Ok(match (scalar, tol) {
        (Scalar::Approx { value, .. }, Some(t)) => Scalar::approx_with_tol(value, t),
        (s, _) => s,
    })
}

pub fn points_to_csv(dimension: usize, rows: &[Vec<Scalar>]) -> String {
    let mut out = String::new();
    let header: Vec<String> = (1..=dimension).map(|i| format!("x{i}")).collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(Scalar::to_string).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn parse_points_csv(text: &str, tol: Option<f64>) -> Result<PointSet> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty file: expected a header line x1,...,xd".into()))?;
    let dimension = header.split(',').count();
    if dimension == 0 {
        return Err(Error::Parse("header has no columns".into()));
    }
    let mut rows = Vec::new();
    for (number, line) in lines.enumerate() {
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != dimension {
            return Err(Error::Parse(format!(
                "row {} has {} cells, expected {dimension}",
                number + 2,
                cells.len()
            )));
        }
        let row: Result<Vec<Scalar>> = cells
            .iter()
            .map(|cell| parse_scalar(cell, tol))
            .collect();
        rows.push(row?);
    }
    PointSet::new(dimension, rows)
}

pub fn scan_to_csv(samples: &[(f64, u32)]) -> String {
    let mut out = String::from("r,alpha\n");
    for (r, alpha) in samples {
        out.push_str(&format!("{r},{alpha}\n"));
    }
    out
}

#[derive(Serialize)]
struct BoundsJson {
    thm1: Option<u32>,
    alpha_ceiling: u32,
    alpha_paper_floor: u32,
    sosnovec: u32,
}

#[derive(Serialize)]
struct DispersionJson<'a> {
    value: &'a Scalar,
    witness: &'a AxisBox,
}

#[derive(Serialize)]
struct ConstructJson<'a> {
    r: &'a Scalar,
    alpha: u32,
    n_r: u32,
    config: &'a [Scalar],
    bounds: BoundsJson,
    dispersion: Option<DispersionJson<'a>>,
}

/// Full JSON report for a constructed configuration. The dispersion slot is
/// null when the oracle budget ruled the evaluation out.
pub fn construct_report_json(
    card: &CardinalityResult,
    oracle: Option<&DispersionResult>,
) -> Result<String> {
    let r = &card.r;
    let half = Scalar::ratio(1, 2);
    let thm1 = if r.total_cmp(&half) == std::cmp::Ordering::Less {
        Some(bound_sqrt(r)?)
    } else {
        None
    };
    let report = ConstructJson {
        r,
        alpha: card.count,
        n_r: card.last_index(),
        config: &card.values,
        bounds: BoundsJson {
            thm1,
            alpha_ceiling: cardinality_closed_form(r, ClosedFormRounding::Ceiling)?,
            alpha_paper_floor: cardinality_closed_form(r, ClosedFormRounding::Floor)?,
            sosnovec: bound_inverse(r)?,
        },
        dispersion: oracle.map(|d| DispersionJson {
            value: &d.value,
            witness: &d.witness,
        }),
    };
    serde_json::to_string_pretty(&report)
        .map_err(|e| Error::Internal(format!("report serialization: {e}")))
}

pub fn dispersion_json(result: &DispersionResult) -> Result<String> {
    serde_json::to_string_pretty(result)
        .map_err(|e| Error::Internal(format!("report serialization: {e}")))
}

pub fn box_display(b: &AxisBox) -> String {
    b.intervals()
        .iter()
        .map(|(a, hi)| format!("[{a}, {hi})"))
        .collect::<Vec<_>>()
        .join(" x ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_tokens() {
        assert_eq!(parse_scalar("1/3", None).unwrap(), Scalar::ratio(1, 3));
        assert_eq!(parse_scalar("R1", None).unwrap(), Scalar::ratio(1, 2));
        assert_eq!(parse_scalar("R3", None).unwrap(), Scalar::ratio(1, 3));
        let t = parse_scalar("0.3", Some(1e-6)).unwrap();
        assert_eq!(t.tolerance(), 1e-6);
        assert!(parse_scalar("R0", None).is_err());
        assert!(parse_scalar("x", None).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let rows = vec![
            vec![Scalar::ratio(1, 3), Scalar::ratio(1, 3)],
            vec![Scalar::ratio(1, 2), Scalar::ratio(1, 2)],
        ];
        let text = points_to_csv(2, &rows);
        assert_eq!(text, "x1,x2\n1/3,1/3\n1/2,1/2\n");
        let set = parse_points_csv(&text, None).unwrap();
        assert!(set.is_exact());
        assert_eq!(set.len(), 2);
    }

    #[test]
    fn csv_header_only_is_empty_set() {
        let set = parse_points_csv("x1,x2,x3\n", None).unwrap();
        assert_eq!(set.dimension(), 3);
        assert!(set.is_empty());
        assert!(parse_points_csv("", None).is_err());
        assert!(parse_points_csv("x1,x2\n0.5\n", None).is_err());
    }
}
