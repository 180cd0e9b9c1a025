//! Property-based invariants for the recurrence, configurations, boxes, and
//! the dispersion oracle.

use proptest::prelude::*;

use mindisp_core::{
    breakpoint_closed_form, cardinality_iterative, chain_value, classify, diagonal_dispersion,
    dispersion, reduced_step, AxisBox, DiagonalConfig, PointSet, ReducedState, Scalar,
};

/// Volume parameters a safe distance inside (1/4, 1/2].
fn volume_param() -> impl Strategy<Value = f64> {
    0.2501f64..=0.5
}

/// Exact rationals p/q in (1/4, 1/2].
fn rational_volume() -> impl Strategy<Value = (i64, i64)> {
    (5i64..=200).prop_flat_map(|q| {
        let lo = q / 4 + 1;
        let hi = (q / 2).max(lo);
        (lo..=hi, Just(q)).prop_map(|(p, q)| (p, q)).prop_filter(
            "must land in (1/4, 1/2]",
            |&(p, q)| 4 * p > q && 2 * p <= q,
        )
    })
}

proptest! {
    /// Each map of the recurrence family is strictly increasing on its
    /// domain.
    #[test]
    fn chain_maps_strictly_increase(k in 1u32..=12, raw1 in 0.0f64..1.0, raw2 in 0.0f64..1.0) {
        let upper = if k == 1 { 1.0 } else { breakpoint_closed_form(k - 1).unwrap().to_f64() };
        let margin = upper - 1e-9;
        let x1 = raw1.min(raw2) * margin;
        let x2 = raw1.max(raw2) * margin;
        prop_assume!(x2 - x1 > 1e-9);
        let f1 = chain_value(&Scalar::approx(x1), k).unwrap().to_f64();
        let f2 = chain_value(&Scalar::approx(x2), k).unwrap().to_f64();
        prop_assert!(f1 < f2, "f_{k}({x1}) = {f1} >= f_{k}({x2}) = {f2}");
    }

    /// The recurrence trace grows strictly until it crosses 1 - r.
    #[test]
    fn trace_strictly_increases(r in volume_param()) {
        let card = cardinality_iterative(&Scalar::approx(r)).unwrap();
        let values: Vec<f64> = card.values.iter().map(Scalar::to_f64).collect();
        for pair in values.windows(2) {
            prop_assert!(pair[0] < pair[1], "trace not increasing at r = {r}: {values:?}");
        }
    }

    /// Consecutive-product identity, exactly in rational mode: each trace
    /// value times the complement of its predecessor reproduces r.
    #[test]
    fn consecutive_products_reproduce_r((p, q) in rational_volume()) {
        let r = Scalar::ratio(p, q);
        let card = cardinality_iterative(&r).unwrap();
        let one = Scalar::one();
        for pair in card.values.windows(2) {
            let product = &pair[1] * (&one - &pair[0]);
            prop_assert!(product.is_exact());
            prop_assert!(product == r, "product {product} != r = {r}");
        }
    }

    /// Configuration cardinality equals the step-function value.
    #[test]
    fn config_len_matches_cardinality(r in volume_param()) {
        let scalar = Scalar::approx(r);
        let cfg = DiagonalConfig::new(&scalar, 2).unwrap();
        let card = cardinality_iterative(&scalar).unwrap();
        prop_assert_eq!(cfg.cardinality(), card.count as usize);
    }

    /// Every configuration point lies in its own partition cell, and every
    /// coordinate of the unit interval lands in exactly the cell whose
    /// bounds enclose it.
    #[test]
    fn partition_cells_are_consistent(r in volume_param(), x in 0.0f64..=1.0) {
        let cfg = DiagonalConfig::new(&Scalar::approx(r), 2).unwrap();
        let part = cfg.partition();
        for (i, v) in cfg.values().iter().enumerate() {
            prop_assert_eq!(part.coordinate_cell(v), i);
        }
        let coord = Scalar::approx(x);
        let cell = part.coordinate_cell(&coord);
        let (lower, open) = part.cell_lower(cell);
        let upper = part.cell_upper(cell);
        prop_assert!(x <= upper.to_f64());
        if open {
            prop_assert!(x > lower.to_f64());
        } else {
            prop_assert!(x >= lower.to_f64());
        }
    }

    /// The reduced orbit tracks the recurrence: its k-th term is the k-th
    /// chain value shifted down by one, while the chain stays below 1.
    #[test]
    fn reduced_orbit_tracks_chain(r in 0.2501f64..0.49, k in 1u32..=8) {
        let scalar = Scalar::approx(r);
        let upper = breakpoint_closed_form(k).unwrap().to_f64();
        prop_assume!(r < upper - 1e-9);
        let mut state = ReducedState::Finite(&scalar - &Scalar::one());
        for _ in 0..k {
            state = reduced_step(&state, &scalar);
        }
        let chain = chain_value(&scalar, k).unwrap().to_f64();
        match state {
            ReducedState::Finite(y) => {
                prop_assert!((y.to_f64() - (chain - 1.0)).abs() <= 1e-9);
            }
            ReducedState::Infinity => prop_assert!(false, "orbit hit the sentinel early"),
        }
    }

    /// Adding a point never increases dispersion.
    #[test]
    fn dispersion_monotone_under_points(
        coords in prop::collection::vec((0.0f64..=1.0, 0.0f64..=1.0), 1..=5),
    ) {
        let rows: Vec<Vec<f64>> = coords.iter().map(|&(x, y)| vec![x, y]).collect();
        let full = PointSet::from_f64(2, rows.clone()).unwrap();
        let smaller = PointSet::from_f64(2, rows[..rows.len() - 1].to_vec()).unwrap();
        let d_full = dispersion(&full).unwrap().value.to_f64();
        let d_small = dispersion(&smaller).unwrap().value.to_f64();
        prop_assert!(d_full <= d_small + 1e-15);
    }

    /// The diagonal closed form never undercuts a concrete empty-box
    /// witness: slabs below the smallest and above the largest value.
    #[test]
    fn diagonal_closed_form_dominates_slabs(
        values in prop::collection::vec(0.01f64..0.99, 1..=6),
    ) {
        let mut sorted = values;
        sorted.sort_by(f64::total_cmp);
        sorted.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
        let scalars: Vec<Scalar> = sorted.iter().copied().map(Scalar::approx).collect();
        let disp = diagonal_dispersion(&scalars, 2).unwrap().to_f64();
        prop_assert!(disp >= sorted[0] - 1e-15);
        prop_assert!(disp >= 1.0 - sorted[sorted.len() - 1] - 1e-15);
    }

    /// Any box built inside one gap of the partition classifies Type 1 and
    /// respects the volume bound.
    #[test]
    fn gap_boxes_classify_and_bound(r in volume_param(), t in 0.0f64..1.0, w in 0.01f64..1.0) {
        let scalar = Scalar::approx(r);
        // build an interval inside [0, r]
        let a = t * r * 0.9;
        let b = (a + w * (r - a)).max(a + 1e-9).min(r);
        prop_assume!(a < b);
        let bx = AxisBox::new(vec![
            (Scalar::approx(a), Scalar::approx(b)),
            (Scalar::approx(0.0), Scalar::approx(1.0)),
        ]).unwrap();
        let kind = classify(&bx, &scalar).unwrap();
        prop_assert!(!kind.is_neither());
        prop_assert!(bx.volume().to_f64() <= r + 1e-12);
    }
}

/// Breakpoint fixed points: at the k-th breakpoint the (k-1)-th chain value
/// is the mirror 1 - r and the k-th reaches 1; exactly at the rational
/// breakpoints.
#[test]
fn breakpoint_fixed_points() {
    for k in 1u32..=12 {
        let r = breakpoint_closed_form(k).unwrap();
        let rf = r.to_f64();
        let mirror = chain_value(&r, k - 1).unwrap().to_f64();
        assert!(
            (mirror - (1.0 - rf)).abs() <= 1e-9,
            "chain_{}({rf}) = {mirror} != 1 - r",
            k - 1
        );
        let top = chain_value(&r, k).unwrap().to_f64();
        assert!((top - 1.0).abs() <= 1e-6, "chain_{k}({rf}) = {top} != 1");
    }
    assert_eq!(
        chain_value(&Scalar::ratio(1, 2), 1).unwrap(),
        Scalar::one()
    );
    assert_eq!(
        chain_value(&Scalar::ratio(1, 3), 2).unwrap(),
        Scalar::ratio(2, 3)
    );
    assert_eq!(
        chain_value(&Scalar::ratio(1, 3), 3).unwrap(),
        Scalar::one()
    );
}

/// The diagonal closed form agrees with the enumeration oracle on random
/// strictly increasing sets in dimensions 2 and 3.
#[test]
fn diagonal_closed_form_matches_oracle() {
    let outcome = mindisp_core::checks::diagonal_agreement(200).unwrap();
    assert!(outcome.passed, "{:?}", outcome.failures);
}
