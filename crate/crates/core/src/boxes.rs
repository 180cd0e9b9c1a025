//! Axis-parallel boxes: half-open products of intervals in the unit cube,
//! their volume, point avoidance, and the two-type classification that backs
//! the volume bound for boxes avoiding a diagonal configuration.

use std::cmp::Ordering;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::config::DiagonalConfig;
use crate::error::{Error, Result};
use crate::oracle::PointSet;
use crate::scalar::Scalar;
use crate::sequence::{cardinality_iterative, require_volume_range};

/// Product of half-open intervals `[a_i, b_i)` with `0 <= a_i < b_i <= 1`.
#[derive(Clone, Debug)]
pub struct AxisBox {
    intervals: Vec<(Scalar, Scalar)>,
}

impl AxisBox {
    pub fn new(intervals: Vec<(Scalar, Scalar)>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::Domain("box must have dimension >= 1".into()));
        }
        let zero = Scalar::zero();
        let one = Scalar::one();
        for (a, b) in &intervals {
            let ok = a.total_cmp(&zero) != Ordering::Less
                && a.total_cmp(b) == Ordering::Less
                && b.total_cmp(&one) != Ordering::Greater;
            if !ok {
                return Err(Error::Domain(format!(
                    "invalid interval [{a}, {b}): need 0 <= a < b <= 1"
                )));
            }
        }
        Ok(AxisBox { intervals })
    }

    /// The full cube `[0, 1)^d`.
    pub fn unit_cube(dimension: usize) -> Result<Self> {
        AxisBox::new(vec![(Scalar::zero(), Scalar::one()); dimension])
    }

    pub fn dimension(&self) -> usize {
        self.intervals.len()
    }

    pub fn intervals(&self) -> &[(Scalar, Scalar)] {
        &self.intervals
    }

    pub fn volume(&self) -> Scalar {
        let mut v = Scalar::one();
        for (a, b) in &self.intervals {
            v = v * (b - a);
        }
        v
    }

    /// Half-open membership: `a_i <= x_i < b_i` on every axis. A point on an
    /// upper face is outside, a point on a lower face is inside.
    pub fn contains_point(&self, point: &[Scalar]) -> bool {
        self.intervals.iter().zip(point).all(|((a, b), x)| {
            x.total_cmp(a) != Ordering::Less && x.total_cmp(b) == Ordering::Less
        })
    }

    /// True iff no point of `t` lies in the box (half-open semantics).
    pub fn avoids(&self, t: &PointSet) -> Result<bool> {
        if t.dimension() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                found: t.dimension(),
            });
        }
        Ok(!t.points().iter().any(|p| self.contains_point(p)))
    }
}

impl Serialize for AxisBox {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.intervals.len()))?;
        for (a, b) in &self.intervals {
            seq.serialize_element(&[a, b])?;
        }
        seq.end()
    }
}

/// One gap of the configuration partition on an axis: `[0, r]`, a middle
/// interval `[p_k, p_{k+1}]`, or the top interval `[p_last, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GapInterval {
    Low,
    Between(usize),
    High,
}

/// Certificate-carrying classification of a box against a configuration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum BoxKind {
    /// Some axis interval's closure fits inside one gap of the partition.
    Type1 { axis: usize, gap: GapInterval },
    /// One axis sits in `[p_k, 1]` while another sits in `[0, p_{k+1}]`.
    Type2 {
        high_axis: usize,
        low_axis: usize,
        index: usize,
    },
    Neither,
}

impl BoxKind {
    pub fn is_neither(&self) -> bool {
        matches!(self, BoxKind::Neither)
    }
}

fn le(a: &Scalar, b: &Scalar) -> bool {
    a.total_cmp(b) != Ordering::Greater
}

fn lt(a: &Scalar, b: &Scalar) -> bool {
    a.total_cmp(b) == Ordering::Less
}

/// Gap of the partition containing the closure `[a, b]`, if any.
fn gap_containing(a: &Scalar, b: &Scalar, values: &[Scalar]) -> Option<GapInterval> {
    let mut below = None;
    for (k, p) in values.iter().enumerate() {
        if le(p, a) {
            below = Some(k);
        } else {
            break;
        }
    }
    match below {
        None => le(b, &values[0]).then_some(GapInterval::Low),
        Some(k) if k + 1 == values.len() => Some(GapInterval::High),
        Some(k) => le(b, &values[k + 1]).then_some(GapInterval::Between(k)),
    }
}

/// Direct containment scan: Type 1 certificates first (axis order, then
/// gap order), then Type 2 certificates (gap index, then axis pair). The
/// containment tests compare interval closures, without tolerance.
pub fn classify(b: &AxisBox, r: &Scalar) -> Result<BoxKind> {
    require_volume_range(r)?;
    let card = cardinality_iterative(r)?;
    Ok(classify_against(b, &card.values))
}

fn classify_against(b: &AxisBox, values: &[Scalar]) -> BoxKind {
    for (axis, (a, hi)) in b.intervals().iter().enumerate() {
        if let Some(gap) = gap_containing(a, hi, values) {
            return BoxKind::Type1 { axis, gap };
        }
    }
    let last = values.len() - 1;
    for k in 0..last {
        for (j, (a_j, _)) in b.intervals().iter().enumerate() {
            if !le(&values[k], a_j) {
                continue;
            }
            for (l, (_, b_l)) in b.intervals().iter().enumerate() {
                if l != j && le(b_l, &values[k + 1]) {
                    return BoxKind::Type2 {
                        high_axis: j,
                        low_axis: l,
                        index: k,
                    };
                }
            }
        }
    }
    BoxKind::Neither
}

/// Checks that a certificate actually holds for the box.
pub fn certificate_holds(b: &AxisBox, values: &[Scalar], kind: &BoxKind) -> bool {
    match kind {
        BoxKind::Type1 { axis, gap } => {
            let Some((a, hi)) = b.intervals().get(*axis) else {
                return false;
            };
            match gap {
                GapInterval::Low => le(hi, &values[0]),
                GapInterval::Between(k) => {
                    *k + 1 < values.len() && le(&values[*k], a) && le(hi, &values[*k + 1])
                }
                GapInterval::High => le(values.last().expect("nonempty"), a),
            }
        }
        BoxKind::Type2 {
            high_axis,
            low_axis,
            index,
        } => {
            if high_axis == low_axis || *index + 1 >= values.len() {
                return false;
            }
            let (Some((a_high, _)), Some((_, b_low))) = (
                b.intervals().get(*high_axis),
                b.intervals().get(*low_axis),
            ) else {
                return false;
            };
            le(&values[*index], a_high) && le(b_low, &values[*index + 1])
        }
        BoxKind::Neither => false,
    }
}

/// Classifies a box known to avoid the configuration by walking between
/// axes: keep the axis interval that contains the smallest configuration
/// value met so far, find an axis excluding that value, and either close a
/// certificate or move to a higher value. The walk advances the pivot each
/// step, so it stops after at most one step per configuration value; the
/// certificate it returns is checked before being handed back.
pub fn classify_empty_box(b: &AxisBox, cfg: &DiagonalConfig) -> Result<BoxKind> {
    if b.dimension() != cfg.dimension() {
        return Err(Error::DimensionMismatch {
            expected: cfg.dimension(),
            found: b.dimension(),
        });
    }
    if !b.avoids(&cfg.point_set())? {
        return Err(Error::Precondition(
            "box intersects the configuration".into(),
        ));
    }
    let values = cfg.values();
    let kind = walk_classification(b, values)?;
    if !certificate_holds(b, values, &kind) {
        return Err(Error::Internal(format!(
            "walk produced an invalid certificate {kind:?}"
        )));
    }
    Ok(kind)
}

/// Interval membership of a configuration value, half-open like the box.
fn interval_holds(interval: &(Scalar, Scalar), p: &Scalar) -> bool {
    le(&interval.0, p) && lt(p, &interval.1)
}

/// Smallest configuration value inside the interval, if any.
fn min_value_index(interval: &(Scalar, Scalar), values: &[Scalar]) -> Option<usize> {
    values.iter().position(|p| interval_holds(interval, p))
}

fn walk_classification(b: &AxisBox, values: &[Scalar]) -> Result<BoxKind> {
    for (axis, (a, hi)) in b.intervals().iter().enumerate() {
        if let Some(gap) = gap_containing(a, hi, values) {
            return Ok(BoxKind::Type1 { axis, gap });
        }
    }
    // Every axis now holds some configuration value strictly inside it.
    let last = values.len() - 1;
    let mut current_axis = 0usize;
    let mut pivot = min_value_index(&b.intervals()[0], values)
        .ok_or_else(|| Error::Internal("axis without gap must meet a value".into()))?;
    for _ in 0..=values.len() + 1 {
        let p = &values[pivot];
        // The box avoids p * (1, ..., 1), so some axis excludes p.
        let excluding = b
            .intervals()
            .iter()
            .position(|iv| !interval_holds(iv, p))
            .ok_or_else(|| Error::Internal("avoided value excluded by no axis".into()))?;
        let (ex_a, ex_b) = &b.intervals()[excluding];
        if pivot == 0 {
            if le(ex_b, p) {
                return Ok(BoxKind::Type1 {
                    axis: excluding,
                    gap: GapInterval::Low,
                });
            }
        } else if pivot == last {
            return if lt(p, ex_a) {
                Ok(BoxKind::Type1 {
                    axis: excluding,
                    gap: GapInterval::High,
                })
            } else {
                Ok(BoxKind::Type2 {
                    high_axis: current_axis,
                    low_axis: excluding,
                    index: last - 1,
                })
            };
        } else if le(ex_b, p) {
            return Ok(BoxKind::Type2 {
                high_axis: current_axis,
                low_axis: excluding,
                index: pivot - 1,
            });
        }
        // The excluding axis lies above the pivot value; continue from it.
        match min_value_index(&b.intervals()[excluding], values) {
            None => {
                let gap = gap_containing(ex_a, ex_b, values).ok_or_else(|| {
                    Error::Internal("interval above pivot with no values must sit in a gap".into())
                })?;
                return Ok(BoxKind::Type1 {
                    axis: excluding,
                    gap,
                });
            }
            Some(next) => {
                debug_assert!(next > pivot);
                current_axis = excluding;
                pivot = next;
            }
        }
    }
    Err(Error::Internal("classification walk failed to terminate".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn boxn(intervals: &[(f64, f64)]) -> AxisBox {
        AxisBox::new(
            intervals
                .iter()
                .map(|&(a, b)| (Scalar::approx(a), Scalar::approx(b)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn volume_examples() {
        let b = AxisBox::new(vec![
            (Scalar::zero(), Scalar::ratio(1, 2)),
            (Scalar::zero(), Scalar::ratio(1, 2)),
        ])
        .unwrap();
        assert_eq!(b.volume(), Scalar::ratio(1, 4));
        assert_eq!(AxisBox::unit_cube(4).unwrap().volume(), Scalar::one());
        let c = AxisBox::new(vec![
            (Scalar::ratio(1, 4), Scalar::ratio(3, 4)),
            (Scalar::zero(), Scalar::ratio(1, 3)),
        ])
        .unwrap();
        assert_eq!(c.volume(), Scalar::ratio(1, 6));
    }

    #[test]
    fn invalid_intervals_rejected() {
        assert!(AxisBox::new(vec![(Scalar::ratio(1, 2), Scalar::ratio(1, 2))]).is_err());
        assert!(AxisBox::new(vec![(Scalar::ratio(-1, 2), Scalar::ratio(1, 2))]).is_err());
        assert!(AxisBox::new(vec![(Scalar::zero(), Scalar::ratio(3, 2))]).is_err());
        assert!(AxisBox::new(vec![]).is_err());
    }

    #[test]
    fn half_open_membership() {
        let center = PointSet::new(2, vec![vec![Scalar::ratio(1, 2); 2]]).unwrap();
        // upper face excludes
        assert!(boxn(&[(0.0, 0.5), (0.0, 0.5)]).avoids(&center).unwrap());
        assert!(!boxn(&[(0.0, 1.0), (0.0, 1.0)]).avoids(&center).unwrap());
        // lower face blocks
        let b = AxisBox::new(vec![
            (Scalar::ratio(1, 2), Scalar::one()),
            (Scalar::ratio(1, 2), Scalar::one()),
        ])
        .unwrap();
        assert!(!b.avoids(&center).unwrap());
    }

    #[test]
    fn avoids_diagonal_examples() {
        let cfg = DiagonalConfig::new(&Scalar::ratio(1, 3), 2).unwrap();
        let pts = cfg.point_set();
        // contains the middle point (1/2, 1/2)
        assert!(!boxn(&[(0.0, 2.0 / 3.0), (0.34, 1.0)]).avoids(&pts).unwrap());
        assert!(boxn(&[(0.0, 0.5), (0.51, 1.0)]).avoids(&pts).unwrap());
        let wrong_dim = PointSet::new(3, vec![vec![Scalar::ratio(1, 2); 3]]).unwrap();
        assert!(boxn(&[(0.0, 0.5), (0.0, 0.5)]).avoids(&wrong_dim).is_err());
    }

    #[test]
    fn classify_examples() {
        let third = Scalar::ratio(1, 3);
        assert_eq!(
            classify(&boxn(&[(0.0, 0.3), (0.0, 1.0)]), &third).unwrap(),
            BoxKind::Type1 {
                axis: 0,
                gap: GapInterval::Low
            }
        );
        assert_eq!(
            classify(&boxn(&[(0.51, 1.0), (0.0, 0.66)]), &third).unwrap(),
            BoxKind::Type2 {
                high_axis: 0,
                low_axis: 1,
                index: 1
            }
        );
        assert_eq!(
            classify(&boxn(&[(0.35, 0.49), (0.35, 0.49)]), &third).unwrap(),
            BoxKind::Type1 {
                axis: 0,
                gap: GapInterval::Between(0)
            }
        );
        assert_eq!(
            classify(&AxisBox::unit_cube(2).unwrap(), &third).unwrap(),
            BoxKind::Neither
        );
        assert!(classify(&boxn(&[(0.0, 0.5)]), &Scalar::approx(0.2)).is_err());
    }

    #[test]
    fn classify_empty_box_examples() {
        let cfg = DiagonalConfig::new(&Scalar::ratio(1, 3), 2).unwrap();
        let kind = classify_empty_box(&boxn(&[(0.0, 0.66), (0.51, 1.0)]), &cfg).unwrap();
        assert_eq!(
            kind,
            BoxKind::Type2 {
                high_axis: 1,
                low_axis: 0,
                index: 1
            }
        );
        let kind = classify_empty_box(&boxn(&[(0.7, 1.0), (0.7, 1.0)]), &cfg).unwrap();
        assert_eq!(
            kind,
            BoxKind::Type1 {
                axis: 0,
                gap: GapInterval::High
            }
        );
        // precondition: the box must avoid the configuration
        assert!(classify_empty_box(&AxisBox::unit_cube(2).unwrap(), &cfg).is_err());
    }

    #[test]
    fn single_point_configuration_classifies() {
        let cfg = DiagonalConfig::new(&Scalar::ratio(1, 2), 2).unwrap();
        let kind = classify_empty_box(&boxn(&[(0.0, 0.5), (0.0, 1.0)]), &cfg).unwrap();
        assert!(certificate_holds(&boxn(&[(0.0, 0.5), (0.0, 1.0)]), cfg.values(), &kind));
        let kind = classify_empty_box(&boxn(&[(0.51, 1.0), (0.2, 0.9)]), &cfg).unwrap();
        assert!(!kind.is_neither());
    }

    #[test]
    fn certificate_checker_rejects_bogus() {
        let cfg = DiagonalConfig::new(&Scalar::ratio(1, 3), 2).unwrap();
        let b = boxn(&[(0.0, 0.9), (0.0, 0.9)]);
        assert!(!certificate_holds(
            &b,
            cfg.values(),
            &BoxKind::Type1 {
                axis: 0,
                gap: GapInterval::Low
            }
        ));
        assert!(!certificate_holds(&b, cfg.values(), &BoxKind::Neither));
    }
}
