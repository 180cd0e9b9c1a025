//! Exact dispersion of finite point sets at desk scale.
//!
//! The oracle enumerates boxes whose lower bounds come from `{0}` plus the
//! point coordinates on each axis and whose upper bounds come from the
//! coordinates plus `{1}`. A candidate box counts as empty when no point
//! lies in its open interior; the maximum volume over these equals the
//! supremum over half-open empty boxes, because a maximal empty open box can
//! be grown until every face touches a point coordinate or the cube wall.

use std::cmp::Ordering;

use num::BigRational;
use serde::Serialize;

use crate::boxes::AxisBox;
use crate::error::{Error, Result};
use crate::scalar::{Scalar, DEFAULT_TOLERANCE};

/// Candidate-box cap for the enumeration guard.
pub const DEFAULT_ORACLE_BUDGET: u128 = 100_000_000;

/// Finite list of points in the unit cube. Construction normalizes the
/// number mode: the set is exact only when every coordinate is; otherwise
/// all coordinates degrade to doubles.
#[derive(Clone, Debug)]
pub struct PointSet {
    dimension: usize,
    points: Vec<Vec<Scalar>>,
    exact: bool,
    max_tol: f64,
}

impl PointSet {
    pub fn new(dimension: usize, points: Vec<Vec<Scalar>>) -> Result<Self> {
        if dimension < 1 {
            return Err(Error::Domain("point set dimension must be >= 1".into()));
        }
        let zero = Scalar::zero();
        let one = Scalar::one();
        for p in &points {
            if p.len() != dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    found: p.len(),
                });
            }
            for x in p {
                if x.total_cmp(&zero) == Ordering::Less || x.total_cmp(&one) == Ordering::Greater {
                    return Err(Error::Domain(format!("coordinate {x} outside [0, 1]")));
                }
            }
        }
        let exact = points.iter().flatten().all(Scalar::is_exact);
        let points = if exact {
            points
        } else {
            points
                .into_iter()
                .map(|p| {
                    p.into_iter()
                        .map(|x| {
                            if x.is_exact() {
                                Scalar::approx(x.to_f64())
                            } else {
                                x
                            }
                        })
                        .collect()
                })
                .collect()
        };
        let max_tol = points
            .iter()
            .flatten()
            .map(Scalar::tolerance)
            .fold(DEFAULT_TOLERANCE, f64::max);
        Ok(PointSet {
            dimension,
            points,
            exact,
            max_tol,
        })
    }

    pub fn from_f64(dimension: usize, rows: Vec<Vec<f64>>) -> Result<Self> {
        PointSet::new(
            dimension,
            rows.into_iter()
                .map(|r| r.into_iter().map(Scalar::approx).collect())
                .collect(),
        )
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn points(&self) -> &[Vec<Scalar>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn max_tolerance(&self) -> f64 {
        self.max_tol
    }
}

/// Supremum volume and a box attaining it (closed lower faces, open upper
/// faces; the supremum may only be approached by half-open boxes, so the
/// witness is empty in the open-interior sense).
#[derive(Clone, Debug, Serialize)]
pub struct DispersionResult {
    pub value: Scalar,
    pub witness: AxisBox,
}

/// `d * (n + 2)^(2d)`, the guard estimate for the candidate enumeration.
pub fn enumeration_estimate(point_count: usize, dimension: usize) -> u128 {
    let base = (point_count as u128).saturating_add(2);
    let exp = (dimension as u32).saturating_mul(2);
    match base.checked_pow(exp) {
        Some(p) => p.saturating_mul(dimension as u128),
        None => u128::MAX,
    }
}

trait OracleValue: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn cmp_val(&self, other: &Self) -> Ordering;
}

impl OracleValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn cmp_val(&self, other: &Self) -> Ordering {
        self.total_cmp(other)
    }
}

impl OracleValue for BigRational {
    fn zero() -> Self {
        num::Zero::zero()
    }
    fn one() -> Self {
        num::One::one()
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn cmp_val(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
}

/// Per-axis candidate bounds: lowers from `{0}` plus coordinates, uppers
/// from coordinates plus `{1}`, sorted and deduplicated.
fn candidates<V: OracleValue>(points: &[Vec<V>], dimension: usize) -> (Vec<Vec<V>>, Vec<Vec<V>>) {
    let zero = V::zero();
    let one = V::one();
    let mut lowers = Vec::with_capacity(dimension);
    let mut uppers = Vec::with_capacity(dimension);
    for axis in 0..dimension {
        let mut coords: Vec<V> = points.iter().map(|p| p[axis].clone()).collect();
        coords.sort_by(|a, b| a.cmp_val(b));
        coords.dedup_by(|a, b| a.cmp_val(b) == Ordering::Equal);
        let mut lo = coords.clone();
        if lo.first().map(|v| v.cmp_val(&zero)) != Some(Ordering::Equal) {
            lo.insert(0, zero.clone());
        }
        let mut hi = coords;
        if hi.last().map(|v| v.cmp_val(&one)) != Some(Ordering::Equal) {
            hi.push(one.clone());
        }
        lowers.push(lo);
        uppers.push(hi);
    }
    (lowers, uppers)
}

struct Search<'a, V> {
    dimension: usize,
    points: &'a [Vec<V>],
    lowers: Vec<Vec<V>>,
    uppers: Vec<Vec<V>>,
    prefix: Vec<(V, V)>,
    arena: Vec<usize>,
    best_vol: Option<V>,
    best_box: Vec<(V, V)>,
    // when set, collect every inclusion-candidate empty box instead of the best
    collect_all: Option<Vec<Vec<(V, V)>>>,
}

impl<'a, V: OracleValue> Search<'a, V> {
    fn new(points: &'a [Vec<V>], dimension: usize, collect_all: bool) -> Self {
        let (lowers, uppers) = candidates(points, dimension);
        Search {
            dimension,
            points,
            lowers,
            uppers,
            prefix: Vec::with_capacity(dimension),
            arena: (0..points.len()).collect(),
            best_vol: None,
            best_box: Vec::new(),
            collect_all: collect_all.then(Vec::new),
        }
    }

    fn full_box_from_prefix(&self) -> Vec<(V, V)> {
        let mut b = self.prefix.clone();
        while b.len() < self.dimension {
            b.push((V::zero(), V::one()));
        }
        b
    }

    /// Record the current prefix completed with full axes. Candidates are
    /// visited in lexicographic order and ties never replace, so the stored
    /// witness is the lexicographically smallest maximizer.
    fn record(&mut self, vol: V) {
        let filled = self.full_box_from_prefix();
        if let Some(all) = &mut self.collect_all {
            all.push(filled);
            return;
        }
        let better = match &self.best_vol {
            None => true,
            Some(b) => vol.cmp_val(b) == Ordering::Greater,
        };
        if better {
            self.best_box = filled;
            self.best_vol = Some(vol);
        }
    }

    fn run(&mut self) {
        let survivors = self.arena.len();
        self.search(0, V::one(), 0, survivors);
    }

    fn search(&mut self, axis: usize, vol: V, lo: usize, hi: usize) {
        if lo == hi {
            self.record(vol);
            return;
        }
        if axis == self.dimension {
            return;
        }
        if self.collect_all.is_none() {
            if let Some(best) = &self.best_vol {
                // completions only shrink the volume
                if vol.cmp_val(best) != Ordering::Greater {
                    return;
                }
            }
        }
        let pair_count = self.lowers[axis].len() * self.uppers[axis].len();
        for pair in 0..pair_count {
            let a = self.lowers[axis][pair / self.uppers[axis].len()].clone();
            let b = self.uppers[axis][pair % self.uppers[axis].len()].clone();
            if a.cmp_val(&b) != Ordering::Less {
                continue;
            }
            let v2 = vol.mul(&b.sub(&a));
            if self.collect_all.is_none() {
                if let Some(best) = &self.best_vol {
                    if v2.cmp_val(best) != Ordering::Greater {
                        continue;
                    }
                }
            }
            let start = self.arena.len();
            for i in lo..hi {
                let pi = self.arena[i];
                let x = &self.points[pi][axis];
                if x.cmp_val(&a) == Ordering::Greater && x.cmp_val(&b) == Ordering::Less {
                    self.arena.push(pi);
                }
            }
            let end = self.arena.len();
            self.prefix.push((a, b));
            self.search(axis + 1, v2, start, end);
            self.prefix.pop();
            self.arena.truncate(start);
        }
    }
}

fn best_box<V: OracleValue>(points: &[Vec<V>], dimension: usize) -> (V, Vec<(V, V)>) {
    if points.is_empty() {
        return (V::one(), vec![(V::zero(), V::one()); dimension]);
    }
    let mut search = Search::new(points, dimension, false);
    search.run();
    (
        search.best_vol.expect("some candidate box is always empty"),
        search.best_box,
    )
}

fn all_empty_boxes<V: OracleValue>(points: &[Vec<V>], dimension: usize) -> Vec<Vec<(V, V)>> {
    if points.is_empty() {
        return vec![vec![(V::zero(), V::one()); dimension]];
    }
    let mut search = Search::new(points, dimension, true);
    search.run();
    search.collect_all.expect("collector was enabled")
}

fn box_contains<V: OracleValue>(outer: &[(V, V)], inner: &[(V, V)]) -> bool {
    outer.iter().zip(inner).all(|(o, i)| {
        o.0.cmp_val(&i.0) != Ordering::Greater && o.1.cmp_val(&i.1) != Ordering::Less
    })
}

fn exact_rows(t: &PointSet) -> Vec<Vec<BigRational>> {
    t.points()
        .iter()
        .map(|p| {
            p.iter()
                .map(|x| x.as_rational().expect("exact point set").clone())
                .collect()
        })
        .collect()
}

fn float_rows(t: &PointSet) -> Vec<Vec<f64>> {
    t.points()
        .iter()
        .map(|p| p.iter().map(Scalar::to_f64).collect())
        .collect()
}

fn check_budget(t: &PointSet, budget: u128) -> Result<()> {
    let estimate = enumeration_estimate(t.len(), t.dimension());
    if estimate > budget {
        Err(Error::BudgetExceeded { estimate, budget })
    } else {
        Ok(())
    }
}

/// Dispersion of `t`: the supremum volume of axis-parallel boxes avoiding
/// it, with a witness box. Exact when the point set is.
pub fn dispersion(t: &PointSet) -> Result<DispersionResult> {
    dispersion_with_budget(t, DEFAULT_ORACLE_BUDGET)
}

pub fn dispersion_with_budget(t: &PointSet, budget: u128) -> Result<DispersionResult> {
    check_budget(t, budget)?;
    let (value, intervals) = if t.is_exact() {
        let rows = exact_rows(t);
        let (v, b) = best_box(&rows, t.dimension());
        (
            Scalar::exact(v),
            b.into_iter()
                .map(|(a, x)| (Scalar::exact(a), Scalar::exact(x)))
                .collect(),
        )
    } else {
        let rows = float_rows(t);
        let (v, b) = best_box(&rows, t.dimension());
        let tol = t.max_tolerance();
        (
            Scalar::approx_with_tol(v, tol),
            b.into_iter()
                .map(|(a, x)| {
                    (
                        Scalar::approx_with_tol(a, tol),
                        Scalar::approx_with_tol(x, tol),
                    )
                })
                .collect(),
        )
    };
    Ok(DispersionResult {
        value,
        witness: AxisBox::new(intervals)?,
    })
}

/// All inclusion-maximal empty candidate boxes of `t`, in enumeration order.
pub fn maximal_empty_boxes(t: &PointSet) -> Result<Vec<AxisBox>> {
    maximal_empty_boxes_with_budget(t, DEFAULT_ORACLE_BUDGET)
}

pub fn maximal_empty_boxes_with_budget(t: &PointSet, budget: u128) -> Result<Vec<AxisBox>> {
    check_budget(t, budget)?;
    fn run<V: OracleValue>(rows: &[Vec<V>], dimension: usize) -> Vec<Vec<(V, V)>> {
        let boxes = all_empty_boxes(rows, dimension);
        boxes
            .iter()
            .filter(|b| {
                !boxes
                    .iter()
                    .any(|other| !box_contains(b, other) && box_contains(other, b))
            })
            .cloned()
            .collect()
    }
    let to_axis_box = |intervals: Vec<(Scalar, Scalar)>| AxisBox::new(intervals);
    if t.is_exact() {
        let rows = exact_rows(t);
        run(&rows, t.dimension())
            .into_iter()
            .map(|b| {
                to_axis_box(
                    b.into_iter()
                        .map(|(a, x)| (Scalar::exact(a), Scalar::exact(x)))
                        .collect(),
                )
            })
            .collect()
    } else {
        let rows = float_rows(t);
        run(&rows, t.dimension())
            .into_iter()
            .map(|b| {
                to_axis_box(
                    b.into_iter()
                        .map(|(a, x)| (Scalar::approx(a), Scalar::approx(x)))
                        .collect(),
                )
            })
            .collect()
    }
}

/// Closed-form dispersion of a diagonal point set in dimension >= 2: the
/// largest of the products `e_{i+1} (1 - e_i)` over the value chain extended
/// by 0 below and 1 above. Validated against the enumeration oracle.
pub fn diagonal_dispersion(values: &[Scalar], dimension: usize) -> Result<Scalar> {
    if dimension < 2 {
        return Err(Error::Domain(
            "diagonal dispersion is a closed form for dimension >= 2".into(),
        ));
    }
    let zero = Scalar::zero();
    let one = Scalar::one();
    for v in values {
        if v.total_cmp(&zero) != Ordering::Greater || v.total_cmp(&one) != Ordering::Less {
            return Err(Error::Domain(format!("diagonal value {v} outside (0, 1)")));
        }
    }
    for pair in values.windows(2) {
        if pair[0].total_cmp(&pair[1]) != Ordering::Less {
            return Err(Error::Domain(
                "diagonal values must be strictly increasing".into(),
            ));
        }
    }
    let mut best: Option<Scalar> = None;
    let mut prev = zero;
    for next in values.iter().chain(std::iter::once(&one)) {
        let product = next * (&one - &prev);
        best = match best {
            None => Some(product),
            Some(b) if product.total_cmp(&b) == Ordering::Greater => Some(product),
            Some(b) => Some(b),
        };
        prev = next.clone();
    }
    Ok(best.expect("chain has at least the boundary product"))
}

/// Feasibility of covering with `count` diagonal points at dispersion `c`:
/// the equal-product chain e_1 = c, e_{i+1} = c / (1 - e_i) must reach
/// 1 - c within `count` values.
fn chain_reaches(c: f64, count: u32) -> bool {
    let mut e = c;
    for i in 1..=count {
        if e >= 1.0 - c {
            return true;
        }
        if i < count {
            e = c / (1.0 - e);
        }
    }
    false
}

/// Minimal dispersion achievable by `count` diagonal points in dimension
/// >= 2, found by bisection on the equal-product chain. Converges to the
/// `count`-th breakpoint of the cardinality step function.
pub fn min_diagonal_dispersion(count: u32, tol: f64) -> Result<Scalar> {
    if count < 1 {
        return Err(Error::Domain("need at least one point".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance {tol} must be > 0")));
    }
    let mut lo = 0.25 + 1e-12;
    let mut hi = 0.5;
    if chain_reaches(lo, count) || !chain_reaches(hi, count) {
        return Err(Error::Convergence(
            "equal-product chain bracket is invalid".into(),
        ));
    }
    let mut steps = 0;
    while hi - lo > tol {
        steps += 1;
        if steps > 200 {
            return Err(Error::Convergence(format!(
                "bisection failed to reach width {tol}"
            )));
        }
        let mid = 0.5 * (lo + hi);
        if chain_reaches(mid, count) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Scalar::approx_with_tol(
        0.5 * (lo + hi),
        tol.max(DEFAULT_TOLERANCE),
    ))
}
