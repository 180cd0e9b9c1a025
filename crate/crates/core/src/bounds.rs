//! Closed-form bounds on the required point count, side-by-side reporting,
//! and the uniqueness / cross / single-point verification drives.

use std::cmp::Ordering;
use std::f64::consts::PI;

use num::ToPrimitive;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::boxes::AxisBox;
use crate::config::{CrossConfig, DiagonalConfig};
use crate::error::{Error, Result};
use crate::oracle::{dispersion, maximal_empty_boxes, PointSet};
use crate::scalar::Scalar;
use crate::sequence::{breakpoint_closed_form, cardinality_iterative, require_volume_range};

/// `floor(pi / sqrt(r - 1/4)) - 3` for `1/4 < r < 1/2`; dominates the
/// iterative count on the whole range.
pub fn bound_sqrt(r: &Scalar) -> Result<u32> {
    let rf = r.to_f64();
    if !(rf > 0.25) || r.total_cmp(&Scalar::ratio(1, 2)) != Ordering::Less {
        return Err(Error::Domain(format!(
            "square-root bound needs 1/4 < r < 1/2, got {r}"
        )));
    }
    let quotient = PI / (rf - 0.25).sqrt();
    Ok(quotient.floor() as u32 - 3)
}

/// `floor(1 / (r - 1/4)) + 1` for `1/4 < r < 1`; the prior dimension-free
/// bound used as a comparator. Exact inputs evaluate exactly.
pub fn bound_inverse(r: &Scalar) -> Result<u32> {
    let in_range = r.total_cmp(&Scalar::ratio(1, 4)) == Ordering::Greater
        && r.total_cmp(&Scalar::one()) == Ordering::Less;
    if !in_range {
        return Err(Error::Domain(format!(
            "inverse bound needs 1/4 < r < 1, got {r}"
        )));
    }
    match r.as_rational() {
        Some(q) => {
            let inv = (q - num::BigRational::new(1.into(), 4.into()))
                .recip()
                .floor();
            let n = inv
                .to_integer()
                .to_u32()
                .ok_or_else(|| Error::Internal("inverse bound out of u32 range".into()))?;
            Ok(n + 1)
        }
        None => Ok((1.0 / (r.to_f64() - 0.25)).floor() as u32 + 1),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosedFormRounding {
    /// The printed closed form; matches the iterative count only at
    /// breakpoints and undercounts by one on interval interiors.
    Floor,
    /// Matches the iterative count everywhere on the volume range.
    Ceiling,
}

/// Closed-form count `pi / arccos(1 / (2 sqrt(r)))` minus 3, rounded per the
/// variant. Quotients within 1e-9 of an integer snap to it first, so both
/// variants agree with the iterative count at breakpoints despite rounding.
pub fn cardinality_closed_form(r: &Scalar, rounding: ClosedFormRounding) -> Result<u32> {
    require_volume_range(r)?;
    let rf = r.to_f64();
    let quotient = PI / (1.0 / (2.0 * rf.sqrt())).acos();
    let nearest = quotient.round();
    let snapped = if (quotient - nearest).abs() <= 1e-9 {
        nearest
    } else {
        match rounding {
            ClosedFormRounding::Floor => quotient.floor(),
            ClosedFormRounding::Ceiling => quotient.ceil(),
        }
    };
    Ok(snapped as u32 - 3)
}

/// Every bound evaluated at one volume, for reporting. The square-root
/// bound is undefined at r = 1/2 and reported as absent there.
#[derive(Clone, Debug, Serialize)]
pub struct BoundsReport {
    pub r: Scalar,
    #[serde(rename = "alpha")]
    pub cardinality: u32,
    #[serde(rename = "alpha_ceiling")]
    pub cardinality_ceiling: u32,
    #[serde(rename = "alpha_paper_floor")]
    pub cardinality_floor: u32,
    #[serde(rename = "thm1")]
    pub sqrt_bound: Option<u32>,
    #[serde(rename = "sosnovec")]
    pub inverse_bound: u32,
}

impl BoundsReport {
    pub fn evaluate(r: &Scalar) -> Result<Self> {
        let card = cardinality_iterative(r)?;
        let sqrt_bound = if r.total_cmp(&Scalar::ratio(1, 2)) == Ordering::Less {
            Some(bound_sqrt(r)?)
        } else {
            None
        };
        Ok(BoundsReport {
            r: r.clone(),
            cardinality: card.count,
            cardinality_ceiling: cardinality_closed_form(r, ClosedFormRounding::Ceiling)?,
            cardinality_floor: cardinality_closed_form(r, ClosedFormRounding::Floor)?,
            sqrt_bound,
            inverse_bound: bound_inverse(r)?,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct UniquenessViolation {
    pub trial: u32,
    pub dispersion: f64,
    pub points: Vec<Vec<f64>>,
}

/// Outcome of perturbing the diagonal configuration at the n-th breakpoint
/// inside its own cells: every perturbed set must disperse strictly worse.
#[derive(Clone, Debug, Serialize)]
pub struct UniquenessReport {
    pub n: u32,
    pub r: f64,
    pub trials: u32,
    pub magnitude: f64,
    pub violations: Vec<UniquenessViolation>,
}

impl UniquenessReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Perturbs each configuration point within its partition cell (each point
/// sits at the upper corner of its cell, so displacements go downward) by at
/// most `magnitude` per coordinate and checks that the oracle dispersion
/// strictly exceeds the breakpoint volume. Runs in the plane.
pub fn verify_uniqueness(n: u32, trials: u32, magnitude: f64) -> Result<UniquenessReport> {
    if n == 0 || n > 4 {
        return Err(Error::Domain(
            "uniqueness check runs at breakpoints 1..=4".into(),
        ));
    }
    if !(magnitude > 0.0) {
        return Err(Error::Domain("perturbation magnitude must be > 0".into()));
    }
    let r = breakpoint_closed_form(n)?;
    let rf = r.to_f64();
    let config = DiagonalConfig::new(&r, 2)?;
    let partition = config.partition();
    let values: Vec<f64> = config.values().iter().map(Scalar::to_f64).collect();
    let mut rng = StdRng::seed_from_u64(0x6d69_6e64_0000_0000 + u64::from(n));
    let mut violations = Vec::new();
    for trial in 0..trials {
        let mut points = Vec::with_capacity(values.len());
        let mut moved = false;
        for (i, &p) in values.iter().enumerate() {
            let (cell_lo, _) = partition.cell_lower(i);
            let lo = cell_lo.to_f64().max(p - magnitude);
            let mut coords = Vec::with_capacity(2);
            for _ in 0..2 {
                // sample in (lo, p]; the cell is open below, closed above
                let u: f64 = rng.random();
                let x = p - u * (p - lo);
                if x != p {
                    moved = true;
                }
                coords.push(x);
            }
            points.push(coords);
        }
        if !moved {
            continue;
        }
        let set = PointSet::from_f64(2, points.clone())?;
        let disp = dispersion(&set)?.value.to_f64();
        if !(disp > rf) {
            violations.push(UniquenessViolation {
                trial,
                dispersion: disp,
                points,
            });
        }
    }
    Ok(UniquenessReport {
        n,
        r: rf,
        trials,
        magnitude,
        violations,
    })
}

/// The thirteen planar boxes that every empty box of the cross
/// configuration is contained in; stored as closed interval hulls.
fn cross_containment_hulls() -> Vec<[(Scalar, Scalar); 2]> {
    let q = |a: i64, b: i64| (Scalar::ratio(a, 4), Scalar::ratio(b, 4));
    vec![
        [q(0, 2), q(0, 2)],
        [q(0, 2), q(2, 4)],
        [q(2, 4), q(0, 2)],
        [q(2, 4), q(2, 4)],
        [q(1, 3), q(1, 3)],
        [q(0, 1), q(0, 4)],
        [q(3, 4), q(0, 4)],
        [q(0, 4), q(3, 4)],
        [q(0, 4), q(0, 1)],
        [q(1, 2), q(0, 4)],
        [q(0, 4), q(1, 2)],
        [q(2, 3), q(0, 4)],
        [q(0, 4), q(2, 3)],
    ]
}

/// An empty box is contained in a hull when its open interior is: lower
/// bounds at least the hull's, upper bounds at most the hull's.
fn inside_hull(b: &AxisBox, hull: &[(Scalar, Scalar); 2]) -> bool {
    b.intervals().iter().zip(hull).all(|((a, bb), (lo, hi))| {
        a.total_cmp(lo) != Ordering::Less && bb.total_cmp(hi) != Ordering::Greater
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossReport {
    pub dimension: usize,
    pub dispersion: Scalar,
    pub exact_quarter: bool,
    /// Number of inclusion-maximal empty boxes (planar case only).
    pub maximal_boxes: Option<usize>,
    /// Maximal empty boxes not covered by the thirteen-box list; must stay
    /// empty (planar case only).
    pub uncontained: Vec<AxisBox>,
}

impl CrossReport {
    pub fn passed(&self) -> bool {
        self.exact_quarter && self.uncontained.is_empty()
    }
}

/// Exact oracle run on the cross configuration. In the plane, additionally
/// checks every maximal empty box against the thirteen-box containment list.
/// Dimensions past 3 trip the oracle budget.
pub fn verify_cross(dimension: usize) -> Result<CrossReport> {
    let cross = CrossConfig::new(dimension)?;
    let set = cross.point_set();
    let result = dispersion(&set)?;
    let exact_quarter = result.value.is_exact() && result.value == Scalar::ratio(1, 4);
    let (maximal_boxes, uncontained) = if dimension == 2 {
        let hulls = cross_containment_hulls();
        let maximal = maximal_empty_boxes(&set)?;
        let uncontained: Vec<AxisBox> = maximal
            .iter()
            .filter(|b| !hulls.iter().any(|h| inside_hull(b, h)))
            .cloned()
            .collect();
        (Some(maximal.len()), uncontained)
    } else {
        (None, Vec::new())
    };
    Ok(CrossReport {
        dimension,
        dispersion: result.value,
        exact_quarter,
        maximal_boxes,
        uncontained,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SinglePointReport {
    pub dimension: usize,
    pub grid: usize,
    pub min_dispersion: f64,
    pub argmin: Vec<f64>,
    /// True when no lattice point disperses below 1/2.
    pub floor_holds: bool,
}

/// Sweeps a `grid^d` lattice of single points and records the best
/// dispersion; the center of the cube attains 1/2 and nothing beats it.
pub fn verify_single_point_floor(dimension: usize, grid: usize) -> Result<SinglePointReport> {
    if !(1..=3).contains(&dimension) {
        return Err(Error::Domain("single-point sweep runs in dimensions 1..=3".into()));
    }
    if grid < 2 {
        return Err(Error::Domain("grid must have at least two points per axis".into()));
    }
    let steps = grid - 1;
    let mut min_dispersion = f64::INFINITY;
    let mut argmin = Vec::new();
    let mut lattice = vec![0usize; dimension];
    loop {
        let point: Vec<f64> = lattice.iter().map(|&i| i as f64 / steps as f64).collect();
        let set = PointSet::from_f64(dimension, vec![point.clone()])?;
        let disp = dispersion(&set)?.value.to_f64();
        if disp < min_dispersion {
            min_dispersion = disp;
            argmin = point;
        }
        // odometer over the lattice
        let mut axis = 0;
        loop {
            if axis == dimension {
                return Ok(SinglePointReport {
                    dimension,
                    grid,
                    min_dispersion,
                    argmin,
                    floor_holds: min_dispersion >= 0.5 - 1e-12,
                });
            }
            lattice[axis] += 1;
            if lattice[axis] <= steps {
                break;
            }
            lattice[axis] = 0;
            axis += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_bound_examples() {
        assert_eq!(bound_sqrt(&Scalar::approx(0.3)).unwrap(), 11);
        assert_eq!(bound_sqrt(&Scalar::ratio(1, 3)).unwrap(), 7);
        assert_eq!(bound_sqrt(&Scalar::approx(0.45)).unwrap(), 4);
        assert!(bound_sqrt(&Scalar::ratio(1, 2)).is_err());
        assert!(bound_sqrt(&Scalar::ratio(1, 4)).is_err());
    }

    #[test]
    fn inverse_bound_examples() {
        assert_eq!(bound_inverse(&Scalar::approx(0.3)).unwrap(), 21);
        assert_eq!(bound_inverse(&Scalar::ratio(1, 2)).unwrap(), 5);
        assert_eq!(bound_inverse(&Scalar::approx(0.45)).unwrap(), 6);
        assert!(bound_inverse(&Scalar::ratio(1, 4)).is_err());
        assert!(bound_inverse(&Scalar::one()).is_err());
    }

    #[test]
    fn closed_form_variants() {
        use ClosedFormRounding::*;
        assert_eq!(cardinality_closed_form(&Scalar::ratio(1, 2), Floor).unwrap(), 1);
        assert_eq!(cardinality_closed_form(&Scalar::ratio(1, 3), Ceiling).unwrap(), 3);
        // interior point: the printed floor form undercounts by one
        assert_eq!(cardinality_closed_form(&Scalar::approx(0.34), Floor).unwrap(), 2);
        assert_eq!(cardinality_closed_form(&Scalar::approx(0.34), Ceiling).unwrap(), 3);
        assert_eq!(cardinality_iterative(&Scalar::approx(0.34)).unwrap().count, 3);
    }

    #[test]
    fn closed_form_snaps_at_breakpoints() {
        use ClosedFormRounding::*;
        for n in 1..=12 {
            let r = breakpoint_closed_form(n).unwrap();
            assert_eq!(cardinality_closed_form(&r, Floor).unwrap(), n, "floor at {n}");
            assert_eq!(cardinality_closed_form(&r, Ceiling).unwrap(), n, "ceiling at {n}");
        }
    }

    #[test]
    fn report_at_half_omits_sqrt_bound() {
        let report = BoundsReport::evaluate(&Scalar::ratio(1, 2)).unwrap();
        assert_eq!(report.cardinality, 1);
        assert!(report.sqrt_bound.is_none());
        assert_eq!(report.inverse_bound, 5);
    }

    #[test]
    fn uniqueness_small_cases() {
        for n in [1, 2] {
            let report = verify_uniqueness(n, 25, 0.01).unwrap();
            assert!(report.passed(), "violations at n = {n}: {:?}", report.violations);
        }
        assert!(verify_uniqueness(0, 10, 0.01).is_err());
        assert!(verify_uniqueness(5, 10, 0.01).is_err());
    }

    #[test]
    fn cross_verification() {
        let report = verify_cross(2).unwrap();
        assert!(report.passed());
        assert_eq!(report.maximal_boxes, Some(13));
        match verify_cross(4) {
            Err(Error::BudgetExceeded { .. }) => {}
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn single_point_floor_small() {
        let report = verify_single_point_floor(1, 101).unwrap();
        assert!(report.floor_holds);
        assert!((report.min_dispersion - 0.5).abs() < 1e-12);
        assert_eq!(report.argmin, vec![0.5]);
        let report = verify_single_point_floor(2, 11).unwrap();
        assert!(report.floor_holds);
        assert_eq!(report.argmin, vec![0.5, 0.5]);
        assert!(verify_single_point_floor(4, 5).is_err());
    }
}
