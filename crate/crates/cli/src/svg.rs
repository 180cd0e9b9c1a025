//! Deterministic SVG emitters: the unit-square configuration plot and the
//! step plot of the cardinality function with breakpoint markers.

use std::fmt::Write;

const PLOT_SIZE: f64 = 560.0;
const MARGIN: f64 = 48.0;

fn svg_open(out: &mut String, width: f64, height: f64) {
    let _ = write!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = write!(
        out,
        r#"<rect width="{width}" height="{height}" fill="white"/>"#
    );
}

/// Unit-square plot of a diagonal configuration (planar projection): points
/// on the diagonal with tick marks at the configuration values on both axes.
pub fn config_plot(values: &[f64], r_label: &str) -> String {
    let span = PLOT_SIZE - 2.0 * MARGIN;
    let x = |v: f64| MARGIN + v * span;
    let y = |v: f64| PLOT_SIZE - MARGIN - v * span;
    let mut out = String::new();
    svg_open(&mut out, PLOT_SIZE, PLOT_SIZE);
    let _ = write!(
        out,
        r#"<rect x="{:.2}" y="{:.2}" width="{span:.2}" height="{span:.2}" fill="none" stroke="black" stroke-width="1.5"/>"#,
        MARGIN, MARGIN
    );
    let _ = write!(
        out,
        r#"<text x="{:.2}" y="24" font-family="monospace" font-size="14">diagonal configuration, r = {}, {} points</text>"#,
        MARGIN,
        r_label,
        values.len()
    );
    for &v in values {
        let _ = write!(
            out,
            r##"<line x1="{0:.2}" y1="{1:.2}" x2="{0:.2}" y2="{2:.2}" stroke="#bbbbbb" stroke-width="0.7" stroke-dasharray="3 3"/>"##,
            x(v),
            y(0.0),
            y(1.0)
        );
        let _ = write!(
            out,
            r##"<line x1="{1:.2}" y1="{0:.2}" x2="{2:.2}" y2="{0:.2}" stroke="#bbbbbb" stroke-width="0.7" stroke-dasharray="3 3"/>"##,
            y(v),
            x(0.0),
            x(1.0)
        );
        let _ = write!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-family="monospace" font-size="9" text-anchor="middle">{:.4}</text>"#,
            x(v),
            PLOT_SIZE - MARGIN + 14.0,
            v
        );
        let _ = write!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-family="monospace" font-size="9" text-anchor="end">{:.4}</text>"#,
            MARGIN - 4.0,
            y(v) + 3.0,
            v
        );
    }
    for &v in values {
        let _ = write!(
            out,
            r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="black"/>"#,
            x(v),
            y(v)
        );
    }
    out.push_str("</svg>\n");
    out
}

const STEP_W: f64 = 640.0;
const STEP_H: f64 = 400.0;

/// Step plot of the cardinality function on `[r_min, r_max]`. Segments are
/// drawn per interval between breakpoints, with a filled marker at the
/// closed left endpoint and an open marker above it where the function
/// jumps.
pub fn step_plot(r_min: f64, r_max: f64, breakpoints: &[(u32, f64)]) -> String {
    let k_lo = breakpoints.iter().map(|&(k, _)| k).min().unwrap_or(1);
    let k_hi = breakpoints.iter().map(|&(k, _)| k).max().unwrap_or(1);
    let span_x = STEP_W - 2.0 * MARGIN;
    let span_y = STEP_H - 2.0 * MARGIN;
    let x = |r: f64| MARGIN + (r - r_min) / (r_max - r_min) * span_x;
    let y = |k: f64| {
        let lo = f64::from(k_lo).max(1.0) - 0.5;
        let hi = f64::from(k_hi) + 0.5;
        STEP_H - MARGIN - (k - lo) / (hi - lo) * span_y
    };
    let mut out = String::new();
    svg_open(&mut out, STEP_W, STEP_H);
    let _ = write!(
        out,
        r#"<text x="{MARGIN:.2}" y="24" font-family="monospace" font-size="14">configuration size over volume [{r_min}, {r_max}]</text>"#
    );
    let _ = write!(
        out,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black" stroke-width="1"/>"#,
        MARGIN,
        STEP_H - MARGIN,
        STEP_W - MARGIN,
        STEP_H - MARGIN
    );
    // one horizontal segment per step interval [R_k, R_{k-1})
    for &(k, bp) in breakpoints {
        let left = bp.max(r_min);
        let right = breakpoints
            .iter()
            .find(|&&(kk, _)| kk + 1 == k)
            .map(|&(_, v)| v)
            .unwrap_or(r_max)
            .min(r_max);
        if left < right {
            let _ = write!(
                out,
                r#"<line x1="{:.2}" y1="{1:.2}" x2="{2:.2}" y2="{1:.2}" stroke="black" stroke-width="2"/>"#,
                x(left),
                y(f64::from(k)),
                x(right)
            );
        }
        if bp >= r_min && bp <= r_max {
            // closed left endpoint at height k, open endpoint above it where
            // the function jumps
            let _ = write!(
                out,
                r##"<line x1="{0:.2}" y1="{1:.2}" x2="{0:.2}" y2="{2:.2}" stroke="#999999" stroke-width="0.7" stroke-dasharray="4 3"/>"##,
                x(bp),
                y(f64::from(k_lo).max(1.0) - 0.5),
                y(f64::from(k_hi) + 0.5)
            );
            let _ = write!(
                out,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3.5" fill="black"/>"#,
                x(bp),
                y(f64::from(k))
            );
            let _ = write!(
                out,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3.5" fill="white" stroke="black" stroke-width="1.2"/>"#,
                x(bp),
                y(f64::from(k + 1))
            );
            let _ = write!(
                out,
                r#"<text x="{:.2}" y="{:.2}" font-family="monospace" font-size="9" text-anchor="middle">{bp:.5}</text>"#,
                x(bp),
                STEP_H - MARGIN + 14.0
            );
        }
        let _ = write!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-family="monospace" font-size="10" text-anchor="end">{k}</text>"#,
            MARGIN - 6.0,
            y(f64::from(k)) + 3.0
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_plot_is_svg() {
        let svg = config_plot(&[1.0 / 3.0, 0.5, 2.0 / 3.0], "1/3");
        assert!(svg.starts_with("<svg"));
        assert!(svg.ends_with("</svg>\n"));
        assert_eq!(svg.matches("<circle").count(), 3);
    }

    #[test]
    fn step_plot_marks_breakpoints() {
        let bps = vec![(2u32, 0.381966), (3, 1.0 / 3.0)];
        let svg = step_plot(0.3, 0.5, &bps);
        assert!(svg.contains("0.38197"));
        assert!(svg.contains(r#"fill="white""#));
    }

    #[test]
    fn plots_are_deterministic() {
        let a = config_plot(&[0.3, 0.525], "0.3");
        let b = config_plot(&[0.3, 0.525], "0.3");
        assert_eq!(a, b);
    }
}
