//! Named verification suites driving the library's invariants end to end.
//! Each suite returns a [`CheckOutcome`] with one failure string per broken
//! claim; the CLI `verify` command and the acceptance tests both run these.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::boxes::{classify, classify_empty_box, AxisBox};
use crate::bounds::{
    bound_inverse, bound_sqrt, cardinality_closed_form, verify_cross, verify_single_point_floor,
    verify_uniqueness, ClosedFormRounding,
};
use crate::config::{symmetry_defect, DiagonalConfig};
use crate::error::Result;
use crate::oracle::{diagonal_dispersion, dispersion, min_diagonal_dispersion, PointSet};
use crate::scalar::Scalar;
use crate::sequence::{
    breakpoint_closed_form, cardinality_iterative, cycle_length, BreakpointTable,
};

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub details: Vec<String>,
    pub failures: Vec<String>,
}

impl CheckOutcome {
    fn new(name: &str) -> Self {
        CheckOutcome {
            name: name.to_string(),
            passed: false,
            details: Vec::new(),
            failures: Vec::new(),
        }
    }

    fn note(&mut self, msg: String) {
        self.details.push(msg);
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(msg());
        }
    }

    fn finish(mut self) -> Self {
        self.passed = self.failures.is_empty();
        self
    }
}

pub const CHECK_NAMES: &[&str] = &[
    "endpoints",
    "step-function",
    "construction",
    "cross",
    "lemma-volume",
    "lemma-classify",
    "sharpness",
    "uniqueness",
    "cycles",
    "bounds",
    "symmetry",
    "diagonal",
    "single-point",
];

/// Runs a suite by name; `None` when the name is unknown.
pub fn run_named(name: &str) -> Option<Result<CheckOutcome>> {
    match name {
        "endpoints" => Some(breakpoint_identities()),
        "step-function" => Some(step_function_grids()),
        "construction" => Some(construction_optimality()),
        "cross" => Some(cross_configuration()),
        "lemma-volume" => Some(lemma_volume(10_000)),
        "lemma-classify" => Some(lemma_classification(1_000)),
        "sharpness" => Some(sharpness()),
        "uniqueness" => Some(uniqueness()),
        "cycles" => Some(cycle_lengths()),
        "bounds" => Some(bound_ordering(10_000)),
        "symmetry" => Some(symmetry()),
        "diagonal" => Some(diagonal_agreement(200)),
        "single-point" => Some(single_point_floor()),
        _ => None,
    }
}

/// Closed-form breakpoints are exact where rational, match the quadratic
/// root at index 2, and agree with bisection to 1e-10 through index 12.
pub fn breakpoint_identities() -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("endpoints");
    let b1 = breakpoint_closed_form(1)?;
    out.check(b1.is_exact() && b1 == Scalar::ratio(1, 2), || {
        format!("breakpoint 1 is {b1}, expected exactly 1/2")
    });
    let b3 = breakpoint_closed_form(3)?;
    out.check(b3.is_exact() && b3 == Scalar::ratio(1, 3), || {
        format!("breakpoint 3 is {b3}, expected exactly 1/3")
    });
    let b2 = breakpoint_closed_form(2)?.to_f64();
    let golden_root = (3.0 - 5.0_f64.sqrt()) / 2.0;
    out.check((b2 - golden_root).abs() <= 1e-12, || {
        format!("breakpoint 2 is {b2}, expected {golden_root}")
    });
    let table = BreakpointTable::build(12, 1e-12)?;
    for failure in table.validate(1e-10) {
        out.failures.push(failure);
    }
    out.note("closed form vs bisection agrees to 1e-10 for indices 1..=12".into());
    Ok(out.finish())
}

/// The cardinality equals k on a 50-point grid of every interval between
/// consecutive breakpoints, k <= 10, and the configuration at 1/3 is exactly
/// {1/3, 1/2, 2/3}.
pub fn step_function_grids() -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("step-function");
    for k in 1u32..=10 {
        let grid: Vec<f64> = if k == 1 {
            vec![0.5]
        } else {
            let lo = breakpoint_closed_form(k)?.to_f64();
            let hi = breakpoint_closed_form(k - 1)?.to_f64();
            (0..50).map(|i| lo + f64::from(i) * (hi - lo) / 50.0).collect()
        };
        for r in grid {
            let count = cardinality_iterative(&Scalar::approx(r))?.count;
            out.check(count == k, || {
                format!("cardinality at r = {r} is {count}, expected {k}")
            });
        }
    }
    let third = cardinality_iterative(&Scalar::ratio(1, 3))?;
    let expected = [Scalar::ratio(1, 3), Scalar::ratio(1, 2), Scalar::ratio(2, 3)];
    out.check(third.count == 3 && third.values == expected, || {
        format!("configuration at 1/3 is {:?}", third.values)
    });
    out.note("step function constant on 50-point grids for k <= 10".into());
    Ok(out.finish())
}

/// Oracle dispersion of the built configuration equals its volume parameter
/// to 1e-9 on a 100-point grid of (0.26, 0.5], in dimensions 2 and 3.
pub fn construction_optimality() -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("construction");
    for i in 1..=100u32 {
        let r = (0.26 + f64::from(i) * 0.24 / 100.0).min(0.5);
        for d in [2usize, 3] {
            let cfg = DiagonalConfig::new(&Scalar::approx(r), d)?;
            let disp = dispersion(&cfg.point_set())?.value.to_f64();
            out.check((disp - r).abs() <= 1e-9, || {
                format!("dispersion {disp} != r = {r} in dimension {d}")
            });
        }
    }
    out.note("dispersion(configuration) = r on 100 grid volumes, d in {2, 3}".into());
    Ok(out.finish())
}

/// The cross configuration disperses to exactly 1/4 in dimensions 2 and 3,
/// and in the plane every maximal empty box is covered by the thirteen-box
/// list.
pub fn cross_configuration() -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("cross");
    for d in [2usize, 3] {
        let report = verify_cross(d)?;
        out.check(report.exact_quarter, || {
            format!("cross dispersion in dimension {d} is {}", report.dispersion)
        });
        if d == 2 {
            out.check(report.uncontained.is_empty(), || {
                format!("{} maximal boxes escape the containment list", report.uncontained.len())
            });
            if let Some(n) = report.maximal_boxes {
                out.note(format!("{n} maximal empty boxes, all contained"));
            }
        }
    }
    Ok(out.finish())
}

fn sample_subinterval(rng: &mut StdRng, lo: f64, hi: f64) -> (f64, f64) {
    loop {
        let a = lo + rng.random::<f64>() * (hi - lo);
        let b = a + (1.0 - rng.random::<f64>()) * (hi - a);
        if a < b {
            return (a, b);
        }
    }
}

fn float_box(intervals: Vec<(f64, f64)>) -> Result<AxisBox> {
    AxisBox::new(
        intervals
            .into_iter()
            .map(|(a, b)| (Scalar::approx(a), Scalar::approx(b)))
            .collect(),
    )
}

fn lemma_volumes() -> Vec<Scalar> {
    vec![Scalar::ratio(1, 3), Scalar::approx(0.3), Scalar::approx(0.45)]
}

/// Boxes built from a random Type 1 or Type 2 certificate never exceed the
/// configuration volume.
pub fn lemma_volume(samples_per_case: u32) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("lemma-volume");
    let mut seed = 0x1e_a5e5u64;
    for r in lemma_volumes() {
        let rf = r.to_f64();
        let values: Vec<f64> = cardinality_iterative(&r)?
            .values
            .iter()
            .map(Scalar::to_f64)
            .collect();
        let last = values.len() - 1;
        for d in [2usize, 3] {
            seed += 1;
            let mut rng = StdRng::seed_from_u64(seed);
            let mut worst = 0.0f64;
            for _ in 0..samples_per_case {
                let type2 = last >= 1 && rng.random_bool(0.5);
                let mut iv: Vec<(f64, f64)> =
                    (0..d).map(|_| sample_subinterval(&mut rng, 0.0, 1.0)).collect();
                if type2 {
                    let k = rng.random_range(0..last);
                    let j = rng.random_range(0..d);
                    let mut l = rng.random_range(0..d - 1);
                    if l >= j {
                        l += 1;
                    }
                    iv[j] = sample_subinterval(&mut rng, values[k], 1.0);
                    iv[l] = sample_subinterval(&mut rng, 0.0, values[k + 1]);
                } else {
                    let axis = rng.random_range(0..d);
                    let gap = rng.random_range(0..=last + 1);
                    let (lo, hi) = if gap == 0 {
                        (0.0, rf)
                    } else if gap <= last {
                        (values[gap - 1], values[gap])
                    } else {
                        (values[last], 1.0)
                    };
                    iv[axis] = sample_subinterval(&mut rng, lo, hi);
                }
                let b = float_box(iv)?;
                let kind = classify(&b, &r)?;
                out.check(!kind.is_neither(), || {
                    format!("certificate-built box classified Neither at r = {r}, d = {d}")
                });
                let vol = b.volume().to_f64();
                worst = worst.max(vol - rf);
                out.check(vol <= rf + 1e-12, || {
                    format!("classified box has volume {vol} > r = {rf} (d = {d})")
                });
            }
            out.note(format!(
                "r = {r}, d = {d}: {samples_per_case} boxes, max volume excess {worst:.3e}"
            ));
        }
    }
    Ok(out.finish())
}

/// Random boxes that avoid the configuration always classify as Type 1 or
/// Type 2, through both the direct scan and the walk.
pub fn lemma_classification(samples_per_case: u32) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("lemma-classify");
    let mut seed = 0xc1a5_51f7u64;
    for r in lemma_volumes() {
        for d in [2usize, 3] {
            seed += 1;
            let mut rng = StdRng::seed_from_u64(seed);
            let cfg = DiagonalConfig::new(&r, d)?;
            let points = cfg.point_set();
            let mut accepted = 0u32;
            let mut attempts = 0u64;
            while accepted < samples_per_case {
                attempts += 1;
                if attempts > 400 * u64::from(samples_per_case) {
                    out.failures
                        .push(format!("rejection sampling stalled at r = {r}, d = {d}"));
                    break;
                }
                let iv: Vec<(f64, f64)> =
                    (0..d).map(|_| sample_subinterval(&mut rng, 0.0, 1.0)).collect();
                let b = float_box(iv)?;
                if !b.avoids(&points)? {
                    continue;
                }
                accepted += 1;
                let walked = classify_empty_box(&b, &cfg)?;
                out.check(!walked.is_neither(), || {
                    format!("avoided box walked to Neither at r = {r}, d = {d}")
                });
                let scanned = classify(&b, &r)?;
                out.check(!scanned.is_neither(), || {
                    format!("avoided box scanned as Neither at r = {r}, d = {d}")
                });
            }
            out.note(format!(
                "r = {r}, d = {d}: {accepted} avoided boxes classified in {attempts} attempts"
            ));
        }
    }
    Ok(out.finish())
}

fn for_each_sorted_tuple(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k == 0 || k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != n - k + i {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Sharpness of the construction on the diagonal: the equal-product minimum
/// matches the breakpoints, and exhaustive grid sweeps of one-short diagonal
/// sets always disperse strictly above the volume.
pub fn sharpness() -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("sharpness");
    for m in 1u32..=8 {
        let got = min_diagonal_dispersion(m, 1e-10)?.to_f64();
        let want = breakpoint_closed_form(m)?.to_f64();
        out.check((got - want).abs() <= 1e-8, || {
            format!("minimal diagonal dispersion for {m} points is {got}, expected {want}")
        });
    }
    out.note("equal-product minimum matches breakpoints for 1..=8 points".into());

    let grid: Vec<f64> = (1..=50).map(|i| f64::from(i) / 51.0).collect();
    for r in [0.45, 1.0 / 3.0, 0.3] {
        let short = cardinality_iterative(&Scalar::approx(r))?.count as usize - 1;
        let mut checked = 0u64;
        let mut min_disp = f64::INFINITY;
        let mut bad = 0u64;
        for_each_sorted_tuple(grid.len(), short, |idx| {
            let points: Vec<Vec<f64>> = idx.iter().map(|&i| vec![grid[i]; 2]).collect();
            let set = PointSet::from_f64(2, points).expect("grid points lie in (0, 1)");
            let disp = dispersion(&set).expect("sweep sets are within budget").value.to_f64();
            min_disp = min_disp.min(disp);
            if disp <= r {
                bad += 1;
            }
            checked += 1;
        });
        out.check(bad == 0, || {
            format!("{bad} diagonal sets of size {short} dispersed at or below r = {r}")
        });
        out.note(format!(
            "r = {r}: {checked} grid sets of size {short}, min dispersion {min_disp:.6}"
        ));
    }
    Ok(out.finish())
}

/// Perturbing the breakpoint configurations inside their cells always makes
/// the dispersion strictly worse (plane, breakpoints 1..=3).
pub fn uniqueness() -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("uniqueness");
    for n in 1u32..=3 {
        let report = verify_uniqueness(n, 100, 0.01)?;
        out.check(report.passed(), || {
            format!("{} violations at breakpoint {n}", report.violations.len())
        });
        out.note(format!("breakpoint {n}: {} trials, 0 violations", report.trials));
    }
    Ok(out.finish())
}

/// The reduced orbit at the n-th breakpoint cycles with length n + 3;
/// exactly (tolerance-free) at the rational breakpoints 1 and 3.
pub fn cycle_lengths() -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("cycles");
    for n in 1u32..=12 {
        let r = breakpoint_closed_form(n)?;
        let got = cycle_length(&r, 100, 1e-9)?;
        out.check(got == Some(n as usize + 3), || {
            format!("cycle length at breakpoint {n} is {got:?}, expected {}", n + 3)
        });
    }
    for (n, r) in [(1u32, Scalar::ratio(1, 2)), (3, Scalar::ratio(1, 3))] {
        let got = cycle_length(&r, 100, 0.0)?;
        out.check(got == Some(n as usize + 3), || {
            format!("exact cycle length at {r} is {got:?}, expected {}", n + 3)
        });
    }
    out.note("cycle lengths n + 3 for n <= 12; exact at the rational breakpoints".into());
    Ok(out.finish())
}

/// Bound ordering on a dense volume grid: the iterative count never exceeds
/// either closed-form bound, the ceiling variant reproduces it exactly, and
/// the printed floor variant trails by at most one, agreeing at breakpoints.
pub fn bound_ordering(grid_points: u32) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("bounds");
    let lo = 0.2501;
    let hi = 0.5;
    for i in 1..=grid_points {
        let r = lo + f64::from(i) * (hi - lo) / f64::from(grid_points + 1);
        let scalar = Scalar::approx(r);
        let count = cardinality_iterative(&scalar)?.count;
        let sqrt_b = bound_sqrt(&scalar)?;
        let inv_b = bound_inverse(&scalar)?;
        let ceil = cardinality_closed_form(&scalar, ClosedFormRounding::Ceiling)?;
        let floor = cardinality_closed_form(&scalar, ClosedFormRounding::Floor)?;
        out.check(count <= sqrt_b, || {
            format!("count {count} > square-root bound {sqrt_b} at r = {r}")
        });
        out.check(count <= inv_b, || {
            format!("count {count} > inverse bound {inv_b} at r = {r}")
        });
        out.check(ceil == count, || {
            format!("ceiling closed form {ceil} != count {count} at r = {r}")
        });
        out.check(floor == count || floor + 1 == count, || {
            format!("floor closed form {floor} vs count {count} at r = {r}")
        });
        if !out.failures.is_empty() && out.failures.len() > 32 {
            break;
        }
    }
    for n in 1u32..=12 {
        let r = breakpoint_closed_form(n)?;
        let floor = cardinality_closed_form(&r, ClosedFormRounding::Floor)?;
        out.check(floor == n, || {
            format!("floor closed form {floor} != {n} at breakpoint {n}")
        });
    }
    for (r, expected) in [(0.34, 3u32), (0.3, 5), (0.45, 2)] {
        let scalar = Scalar::approx(r);
        let count = cardinality_iterative(&scalar)?.count;
        let floor = cardinality_closed_form(&scalar, ClosedFormRounding::Floor)?;
        out.check(count == expected && floor + 1 == count, || {
            format!("interior point r = {r}: floor {floor}, count {count}")
        });
    }
    out.note(format!("{grid_points} grid volumes in ({lo}, {hi})"));
    Ok(out.finish())
}

/// Breakpoint configurations are mirror-symmetric about 1/2, exactly at the
/// rational breakpoints and to 1e-10 elsewhere.
pub fn symmetry() -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("symmetry");
    for n in 1u32..=12 {
        let defect = symmetry_defect(n)?;
        out.check(defect.to_f64() <= 1e-10, || {
            format!("symmetry defect {defect} at breakpoint {n}")
        });
        if n == 1 || n == 3 {
            out.check(defect.is_exact() && defect.is_zero(), || {
                format!("defect at rational breakpoint {n} is {defect}, expected exact 0")
            });
        }
    }
    out.note("mirror symmetry holds through breakpoint 12".into());
    Ok(out.finish())
}

/// The diagonal closed form agrees with the enumeration oracle on random
/// strictly increasing value sets in dimensions 2 and 3.
pub fn diagonal_agreement(sets: u32) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("diagonal");
    let mut rng = StdRng::seed_from_u64(0xd1a6);
    let mut worst = 0.0f64;
    for _ in 0..sets {
        let m = rng.random_range(1..=8);
        let values = loop {
            let mut v: Vec<f64> = (0..m).map(|_| rng.random_range(0.01..0.99)).collect();
            v.sort_by(f64::total_cmp);
            if v.windows(2).all(|w| w[1] - w[0] > 1e-6) {
                break v;
            }
        };
        let scalars: Vec<Scalar> = values.iter().copied().map(Scalar::approx).collect();
        for d in [2usize, 3] {
            let closed = diagonal_dispersion(&scalars, d)?.to_f64();
            let points: Vec<Vec<f64>> = values.iter().map(|&v| vec![v; d]).collect();
            let oracle = dispersion(&PointSet::from_f64(d, points)?)?.value.to_f64();
            let diff = (closed - oracle).abs();
            worst = worst.max(diff);
            out.check(diff <= 1e-12, || {
                format!("closed form {closed} vs oracle {oracle} for {values:?} in d = {d}")
            });
        }
    }
    out.note(format!("{sets} random diagonal sets, max deviation {worst:.3e}"));
    Ok(out.finish())
}

/// No single point beats the cube center: lattice sweeps in dimensions 1..=3
/// bottom out at dispersion 1/2.
pub fn single_point_floor() -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("single-point");
    for (d, grid) in [(2usize, 21usize), (1, 101), (3, 11)] {
        let report = verify_single_point_floor(d, grid)?;
        out.check(report.floor_holds, || {
            format!(
                "single point {:?} in dimension {d} disperses at {}",
                report.argmin, report.min_dispersion
            )
        });
        out.check((report.min_dispersion - 0.5).abs() <= 1e-12, || {
            format!("grid minimum {} differs from 1/2 in dimension {d}", report.min_dispersion)
        });
        out.note(format!(
            "d = {d}, grid {grid}: minimum {} at {:?}",
            report.min_dispersion, report.argmin
        ));
    }
    Ok(out.finish())
}
