//! Diagonal point configurations, the cell partition of the extended
//! diagonal, and the 2d cross configuration.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::oracle::PointSet;
use crate::scalar::Scalar;
use crate::sequence::{breakpoint_closed_form, cardinality_iterative};

/// Points `v * (1, ..., 1)` for the recurrence values `v` carried by the
/// volume parameter `r`. The value list is one-dimensional; d-dimensional
/// points are materialized on demand.
#[derive(Clone, Debug)]
pub struct DiagonalConfig {
    r: Scalar,
    values: Vec<Scalar>,
    dimension: usize,
}

impl DiagonalConfig {
    pub fn new(r: &Scalar, dimension: usize) -> Result<Self> {
        if dimension < 1 {
            return Err(Error::Domain("dimension must be >= 1".into()));
        }
        let card = cardinality_iterative(r)?;
        Ok(DiagonalConfig {
            r: r.clone(),
            values: card.values,
            dimension,
        })
    }

    pub fn r(&self) -> &Scalar {
        &self.r
    }

    /// The strictly increasing diagonal values; the first is `r` itself.
    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn cardinality(&self) -> usize {
        self.values.len()
    }

    pub fn point_set(&self) -> PointSet {
        let points = self
            .values
            .iter()
            .map(|v| vec![v.clone(); self.dimension])
            .collect();
        PointSet::new(self.dimension, points).expect("diagonal values lie in (0, 1)")
    }

    pub fn partition(&self) -> CellPartition {
        CellPartition {
            values: self.values.clone(),
            dimension: self.dimension,
        }
    }
}

/// Partition of the extended diagonal into cubical cells: `[0, p_0]^d`, then
/// `(p_{i-1}, p_i]^d`, then `(p_last, 1]^d`. Cell 0 is closed, later cells
/// are half-open exactly as written; membership tests carry no tolerance so
/// the cells stay a true partition.
#[derive(Clone, Debug)]
pub struct CellPartition {
    values: Vec<Scalar>,
    dimension: usize,
}

impl CellPartition {
    pub fn cell_count(&self) -> usize {
        self.values.len() + 1
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    /// Index of the one-dimensional cell containing `x` in [0, 1].
    pub fn coordinate_cell(&self, x: &Scalar) -> usize {
        for (i, p) in self.values.iter().enumerate() {
            if x.total_cmp(p) != Ordering::Greater {
                return i;
            }
        }
        self.values.len()
    }

    /// Cell index of a point of the extended diagonal, or `None` when the
    /// coordinates fall in different one-dimensional cells.
    pub fn locate(&self, point: &[Scalar]) -> Result<Option<usize>> {
        if point.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: point.len(),
            });
        }
        let zero = Scalar::zero();
        let one = Scalar::one();
        for x in point {
            if x.total_cmp(&zero) == Ordering::Less || x.total_cmp(&one) == Ordering::Greater {
                return Err(Error::Domain(format!("coordinate {x} outside [0, 1]")));
            }
        }
        let first = self.coordinate_cell(&point[0]);
        for x in &point[1..] {
            if self.coordinate_cell(x) != first {
                return Ok(None);
            }
        }
        Ok(Some(first))
    }

    /// Lower bound of a cell (0 for the first cell, else the previous
    /// diagonal value) and whether that bound is excluded.
    pub fn cell_lower(&self, index: usize) -> (Scalar, bool) {
        if index == 0 {
            (Scalar::zero(), false)
        } else {
            (self.values[index - 1].clone(), true)
        }
    }

    /// Upper bound of a cell; always included.
    pub fn cell_upper(&self, index: usize) -> Scalar {
        if index < self.values.len() {
            self.values[index].clone()
        } else {
            Scalar::one()
        }
    }
}

/// Cell index of `point` within the extended diagonal built at volume `r`,
/// or `None` if the point lies outside it.
pub fn in_extended_diagonal(point: &[Scalar], r: &Scalar) -> Result<Option<usize>> {
    if point.is_empty() {
        return Err(Error::Domain("point must have dimension >= 1".into()));
    }
    let config = DiagonalConfig::new(r, point.len())?;
    config.partition().locate(point)
}

/// Largest deviation of the diagonal values at the n-th breakpoint from
/// being mirror-symmetric about 1/2. Exactly zero for n in {1, 3}.
pub fn symmetry_defect(n: u32) -> Result<Scalar> {
    let r = breakpoint_closed_form(n)?;
    let card = cardinality_iterative(&r)?;
    if card.count != n {
        return Err(Error::Internal(format!(
            "breakpoint {n} produced cardinality {}",
            card.count
        )));
    }
    let one = Scalar::one();
    let count = card.values.len();
    let mut worst = Scalar::zero();
    for j in 0..count {
        let defect = (&one - &card.values[j] - &card.values[count - 1 - j]).abs();
        if defect.total_cmp(&worst) == Ordering::Greater {
            worst = defect;
        }
    }
    Ok(worst)
}

/// 2d points with every coordinate 1/2 except one, which is 1/4 or 3/4.
#[derive(Clone, Debug)]
pub struct CrossConfig {
    dimension: usize,
    points: Vec<Vec<Scalar>>,
}

impl CrossConfig {
    pub fn new(dimension: usize) -> Result<Self> {
        if dimension < 2 {
            return Err(Error::Domain("cross configuration needs dimension >= 2".into()));
        }
        let mut points = Vec::with_capacity(2 * dimension);
        for arm in [Scalar::ratio(1, 4), Scalar::ratio(3, 4)] {
            for axis in 0..dimension {
                let mut p = vec![Scalar::ratio(1, 2); dimension];
                p[axis] = arm.clone();
                points.push(p);
            }
        }
        Ok(CrossConfig { dimension, points })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn points(&self) -> &[Vec<Scalar>] {
        &self.points
    }

    pub fn point_set(&self) -> PointSet {
        PointSet::new(self.dimension, self.points.clone())
            .expect("cross coordinates lie in (0, 1)")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_known_values() {
        let cfg = DiagonalConfig::new(&Scalar::ratio(1, 3), 2).unwrap();
        assert_eq!(
            cfg.values(),
            &[Scalar::ratio(1, 3), Scalar::ratio(1, 2), Scalar::ratio(2, 3)]
        );
        let single = DiagonalConfig::new(&Scalar::ratio(1, 2), 5).unwrap();
        assert_eq!(single.values(), &[Scalar::ratio(1, 2)]);
        assert_eq!(single.cardinality(), 1);
    }

    #[test]
    fn config_approx_values() {
        let cfg = DiagonalConfig::new(&Scalar::approx(0.3), 2).unwrap();
        let expected = [0.3, 0.428571, 0.525, 0.631579, 0.814286];
        assert_eq!(cfg.cardinality(), 5);
        for (v, e) in cfg.values().iter().zip(expected) {
            assert!((v.to_f64() - e).abs() < 1e-6);
        }
    }

    #[test]
    fn config_domain_and_dimension_errors() {
        assert!(DiagonalConfig::new(&Scalar::approx(0.2), 2).is_err());
        assert!(DiagonalConfig::new(&Scalar::ratio(1, 3), 0).is_err());
    }

    #[test]
    fn point_set_materializes_diagonal() {
        let cfg = DiagonalConfig::new(&Scalar::ratio(1, 3), 3).unwrap();
        let pts = cfg.point_set();
        assert_eq!(pts.len(), 3);
        assert_eq!(pts.points()[1], vec![Scalar::ratio(1, 2); 3]);
    }

    #[test]
    fn cell_membership() {
        let third = Scalar::ratio(1, 3);
        // boundary point belongs to the closed first cell
        assert_eq!(
            in_extended_diagonal(&[third.clone(), third.clone()], &third).unwrap(),
            Some(0)
        );
        assert_eq!(
            in_extended_diagonal(&[Scalar::approx(0.4), Scalar::approx(0.45)], &third).unwrap(),
            Some(1)
        );
        assert_eq!(
            in_extended_diagonal(&[Scalar::approx(0.2), Scalar::approx(0.6)], &third).unwrap(),
            None
        );
    }

    #[test]
    fn cells_partition_the_interval() {
        let cfg = DiagonalConfig::new(&Scalar::ratio(1, 3), 2).unwrap();
        let part = cfg.partition();
        assert_eq!(part.cell_count(), 4);
        // each configuration value belongs to its own cell
        for (i, v) in cfg.values().iter().enumerate() {
            assert_eq!(part.coordinate_cell(v), i);
        }
        assert_eq!(part.coordinate_cell(&Scalar::one()), 3);
        assert_eq!(part.coordinate_cell(&Scalar::zero()), 0);
        // upper bounds included, lower bounds excluded past cell 0
        assert_eq!(part.coordinate_cell(&Scalar::ratio(1, 2)), 1);
        assert_eq!(part.coordinate_cell(&Scalar::ratio(2, 3)), 2);
    }

    #[test]
    fn locate_checks_input() {
        let cfg = DiagonalConfig::new(&Scalar::ratio(1, 3), 2).unwrap();
        let part = cfg.partition();
        assert!(part.locate(&[Scalar::ratio(1, 2)]).is_err());
        assert!(part
            .locate(&[Scalar::ratio(3, 2), Scalar::ratio(1, 2)])
            .is_err());
    }

    #[test]
    fn symmetry_exact_at_rational_breakpoints() {
        assert_eq!(symmetry_defect(1).unwrap(), Scalar::zero());
        let d3 = symmetry_defect(3).unwrap();
        assert!(d3.is_exact());
        assert_eq!(d3, Scalar::zero());
        assert!(symmetry_defect(5).unwrap().to_f64() <= 1e-10);
    }

    #[test]
    fn cross_examples() {
        let k2 = CrossConfig::new(2).unwrap();
        let pts: Vec<(String, String)> = k2
            .points()
            .iter()
            .map(|p| (p[0].to_string(), p[1].to_string()))
            .collect();
        for expected in [
            ("1/2", "1/4"),
            ("1/2", "3/4"),
            ("1/4", "1/2"),
            ("3/4", "1/2"),
        ] {
            assert!(pts.contains(&(expected.0.into(), expected.1.into())));
        }
        assert_eq!(pts.len(), 4);
        assert_eq!(CrossConfig::new(3).unwrap().points().len(), 6);
        assert!(CrossConfig::new(1).is_err());
    }
}
