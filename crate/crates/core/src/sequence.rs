//! The defining recurrence `x_k = r / (1 - x_{k-1})`, the step function that
//! counts how many recurrence values fit below `1 - r`, the breakpoints where
//! that count jumps, and the reduced rational orbit used for cycle detection.

use std::cmp::Ordering;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::scalar::{Scalar, DEFAULT_TOLERANCE};

/// `1/4 < r <= 1/2`, decided without tolerance.
pub(crate) fn in_volume_range(r: &Scalar) -> bool {
    r.total_cmp(&Scalar::ratio(1, 4)) == Ordering::Greater
        && r.total_cmp(&Scalar::ratio(1, 2)) != Ordering::Greater
}

pub(crate) fn require_volume_range(r: &Scalar) -> Result<()> {
    if in_volume_range(r) {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "volume parameter {r} outside (1/4, 1/2]"
        )))
    }
}

/// Evaluates the k-th value of the recurrence started at `r`: the 0-th value
/// is `r` itself and each step maps `x` to `r / (1 - x)`.
///
/// Errors if an intermediate value reaches 1, i.e. `r` lies outside the
/// domain of the k-th map. The domain check is by iteration; the domain
/// endpoints are irrational in general.
pub fn chain_value(r: &Scalar, k: u32) -> Result<Scalar> {
    let zero = Scalar::zero();
    let one = Scalar::one();
    if r.total_cmp(&zero) == Ordering::Less || r.total_cmp(&one) == Ordering::Greater {
        return Err(Error::Domain(format!("chain input {r} outside [0, 1]")));
    }
    let mut value = r.clone();
    for step in 1..=k {
        if value.total_cmp(&one) != Ordering::Less {
            return Err(Error::Domain(format!(
                "chain value at index {} is {} >= 1; {} is outside the domain for k = {}",
                step - 1,
                value,
                r,
                k
            )));
        }
        value = r / (&one - &value);
    }
    Ok(value)
}

/// Iteration cap for [`cardinality_iterative`], derived from the closed-form
/// count. Exceeding it indicates a numeric bug, not a bad input.
fn iteration_cap(r: f64) -> u32 {
    let quotient = PI / (1.0 / (2.0 * r.sqrt())).acos();
    quotient.ceil() as u32 + 1
}

/// Result of the iterative cardinality computation: the number of recurrence
/// values up to and including the first one that reaches `1 - r`.
#[derive(Clone, Debug)]
pub struct CardinalityResult {
    pub r: Scalar,
    /// Number of configuration points carried by `r`.
    pub count: u32,
    /// The recurrence values `x_0, ..., x_{count-1}`; strictly increasing,
    /// every value but the last is `< 1 - r`, the last is `>= 1 - r`.
    pub values: Vec<Scalar>,
}

impl CardinalityResult {
    /// Index of the last value, one less than the count.
    pub fn last_index(&self) -> u32 {
        self.count - 1
    }
}

/// Counts recurrence values by direct iteration until one reaches `1 - r`.
///
/// In approximate mode the stopping comparison honours the scalar tolerance,
/// which keeps the count stable when `r` sits on a breakpoint up to rounding.
pub fn cardinality_iterative(r: &Scalar) -> Result<CardinalityResult> {
    require_volume_range(r)?;
    let one = Scalar::one();
    let target = &one - r;
    let cap = iteration_cap(r.to_f64());
    let mut value = r.clone();
    let mut values = vec![value.clone()];
    let mut index = 0u32;
    while !value.tol_ge(&target) {
        index += 1;
        if index > cap {
            return Err(Error::Internal(format!(
                "cardinality iteration at r = {r} exceeded cap {cap}"
            )));
        }
        value = r / (&one - &value);
        values.push(value.clone());
    }
    Ok(CardinalityResult {
        r: r.clone(),
        count: index + 1,
        values,
    })
}

/// n-th breakpoint of the step function: `1 / (4 cos^2(pi / (n + 3)))`.
/// Rational (and returned exact) for n = 1 and n = 3.
pub fn breakpoint_closed_form(n: u32) -> Result<Scalar> {
    match n {
        0 => Err(Error::Domain("breakpoint index must be >= 1".into())),
        1 => Ok(Scalar::ratio(1, 2)),
        3 => Ok(Scalar::ratio(1, 3)),
        _ => {
            let c = (PI / f64::from(n + 3)).cos();
            Ok(Scalar::approx(0.25 / (c * c)))
        }
    }
}

fn chain_f64(r: f64, k: u32) -> f64 {
    let mut value = r;
    for _ in 0..k {
        if value >= 1.0 {
            return f64::INFINITY;
        }
        value = r / (1.0 - value);
    }
    value
}

/// n-th breakpoint by bisection: the unique root of
/// `x_{n-1}(x) - (1 - x)` between 1/4 and the previous breakpoint.
pub fn breakpoint_bisection(n: u32, tol: f64) -> Result<Scalar> {
    if n == 0 {
        return Err(Error::Domain("breakpoint index must be >= 1".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("bisection tolerance {tol} must be > 0")));
    }
    let g = |x: f64| chain_f64(x, n - 1) - (1.0 - x);
    let mut lo = 0.25 + 1e-9;
    let mut hi = if n == 1 {
        1.0 - 1e-15
    } else {
        breakpoint_closed_form(n - 1)?.to_f64() - 1e-15
    };
    if !(g(lo) < 0.0 && g(hi) > 0.0) {
        return Err(Error::Convergence(format!(
            "no sign change on bracket [{lo}, {hi}] for breakpoint {n}"
        )));
    }
    let mut steps = 0;
    while hi - lo > tol {
        steps += 1;
        if steps > 200 {
            return Err(Error::Convergence(format!(
                "bracket for breakpoint {n} failed to shrink below {tol}"
            )));
        }
        let mid = 0.5 * (lo + hi);
        if g(mid) >= 0.0 {
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

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum BreakpointSource {
    ClosedForm,
    Bisection,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct BreakpointEntry {
    pub index: u32,
    pub value: Scalar,
    pub source: BreakpointSource,
}

/// Breakpoints 1..=max computed both ways, for cross-checking.
#[derive(Clone, Debug, serde::Serialize)]
pub struct BreakpointTable {
    pub entries: Vec<BreakpointEntry>,
}

impl BreakpointTable {
    pub fn build(max_index: u32, bisect_tol: f64) -> Result<Self> {
        let mut entries = Vec::new();
        for n in 1..=max_index {
            entries.push(BreakpointEntry {
                index: n,
                value: breakpoint_closed_form(n)?,
                source: BreakpointSource::ClosedForm,
            });
            entries.push(BreakpointEntry {
                index: n,
                value: breakpoint_bisection(n, bisect_tol)?,
                source: BreakpointSource::Bisection,
            });
        }
        Ok(BreakpointTable { entries })
    }

    /// Returns violation messages; empty means the table is consistent:
    /// strictly decreasing per source, first value 1/2, all in (1/4, 1/2],
    /// and the two sources agree within `agree_tol` at every index.
    pub fn validate(&self, agree_tol: f64) -> Vec<String> {
        let mut failures = Vec::new();
        for source in [BreakpointSource::ClosedForm, BreakpointSource::Bisection] {
            let seq: Vec<&BreakpointEntry> =
                self.entries.iter().filter(|e| e.source == source).collect();
            if let Some(first) = seq.first() {
                if (first.value.to_f64() - 0.5).abs() > agree_tol {
                    failures.push(format!("{source:?}: first breakpoint {} != 1/2", first.value));
                }
            }
            for pair in seq.windows(2) {
                if pair[1].value.total_cmp(&pair[0].value) != Ordering::Less {
                    failures.push(format!(
                        "{source:?}: breakpoint {} >= breakpoint {}",
                        pair[1].index, pair[0].index
                    ));
                }
            }
            for e in &seq {
                let v = e.value.to_f64();
                if !(v > 0.25 && v <= 0.5 + agree_tol) {
                    failures.push(format!(
                        "{source:?}: breakpoint {} = {} outside (1/4, 1/2]",
                        e.index, e.value
                    ));
                }
            }
        }
        for n in self.entries.iter().map(|e| e.index).collect::<std::collections::BTreeSet<_>>() {
            let vals: Vec<f64> = self
                .entries
                .iter()
                .filter(|e| e.index == n)
                .map(|e| e.value.to_f64())
                .collect();
            if vals.len() == 2 && (vals[0] - vals[1]).abs() > agree_tol {
                failures.push(format!(
                    "sources disagree at index {n}: |{} - {}| > {agree_tol}",
                    vals[0], vals[1]
                ));
            }
        }
        failures
    }
}

/// One term of the reduced orbit. Infinity is an explicit state, never a
/// floating-point infinity, so the step function never divides by zero.
#[derive(Clone, Debug)]
pub enum ReducedState {
    Finite(Scalar),
    Infinity,
}

impl ReducedState {
    pub fn finite(value: Scalar) -> Self {
        ReducedState::Finite(value)
    }
}

/// One step of the reduced orbit `y -> -1 - r/y`, with the sentinel chain
/// `0 -> infinity -> -1`.
pub fn reduced_step(state: &ReducedState, r: &Scalar) -> ReducedState {
    match state {
        ReducedState::Infinity => ReducedState::Finite(Scalar::from_int(-1)),
        ReducedState::Finite(y) if y.is_zero() => ReducedState::Infinity,
        ReducedState::Finite(y) => {
            ReducedState::Finite(-Scalar::one() - r / y)
        }
    }
}

/// Distance on the projective line (infinity is a regular point). Values
/// that blow up and come back compare sanely under this metric, which keeps
/// near-sentinel passes from producing false matches or misses.
fn chordal(u: f64, v: f64) -> f64 {
    (u - v).abs() / ((1.0 + u * u).sqrt() * (1.0 + v * v).sqrt())
}

fn state_eq(a: &ReducedState, b: &ReducedState, tol: f64) -> bool {
    match (a, b) {
        (ReducedState::Infinity, ReducedState::Infinity) => true,
        (ReducedState::Finite(x), ReducedState::Finite(y)) => {
            if x.is_exact() && y.is_exact() {
                x.total_cmp(y) == Ordering::Equal
            } else {
                chordal(x.to_f64(), y.to_f64()) <= tol
            }
        }
        (ReducedState::Infinity, ReducedState::Finite(v))
        | (ReducedState::Finite(v), ReducedState::Infinity) => {
            if v.is_exact() {
                false
            } else {
                let w = v.to_f64();
                1.0 / (1.0 + w * w).sqrt() <= tol
            }
        }
    }
}

/// First period of the reduced orbit started at `-1 + r`, if one shows up
/// within `max_iter` steps.
///
/// Exact inputs use exact state equality. Approximate inputs require the
/// candidate return within `tol` of the start *and* the next three terms to
/// match the start of the orbit, which rules out accidental near-misses.
pub fn cycle_length(r: &Scalar, max_iter: usize, tol: f64) -> Result<Option<usize>> {
    require_volume_range(r)?;
    if max_iter < 4 {
        return Err(Error::Domain("cycle search needs max_iter >= 4".into()));
    }
    let mut states = vec![ReducedState::Finite(r - &Scalar::one())];
    let extend_to = |states: &mut Vec<ReducedState>, len: usize| {
        while states.len() <= len {
            let next = reduced_step(states.last().expect("nonempty"), r);
            states.push(next);
        }
    };
    for m in 1..=max_iter {
        extend_to(&mut states, m);
        if state_eq(&states[m], &states[0], tol) {
            extend_to(&mut states, m + 3);
            if (1..=3).all(|j| state_eq(&states[m + j], &states[j], tol)) {
                return Ok(Some(m));
            }
        }
    }
    Ok(None)
}

/// Rotation angle of the reduced orbit: `arccos(-1 / (2 sqrt(r)))`, in
/// (pi/2, pi) for r > 1/4. The orbit is periodic exactly when this is a
/// rational multiple of pi.
pub fn rotation_angle(r: &Scalar) -> Result<Scalar> {
    if r.total_cmp(&Scalar::ratio(1, 4)) != Ordering::Greater {
        return Err(Error::Domain(format!("rotation angle requires r > 1/4, got {r}")));
    }
    let rf = r.to_f64();
    Ok(Scalar::approx((-1.0 / (2.0 * rf.sqrt())).acos()))
}
