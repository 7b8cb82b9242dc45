//! Minimal SVG rendering of information-plane trajectories.

use std::fmt::Write;

use crate::trajectory::{CharacteristicPoints, TrajectoryPoint};

const SIZE: f64 = 560.0;
const PAD: f64 = 64.0;
const RUN_COLORS: [&str; 5] = ["#9ecae1", "#a1d99b", "#fdae6b", "#bcbddc", "#d9d9d9"];

fn px(x: f64) -> f64 {
    PAD + x.clamp(0.0, 1.0) * (SIZE - 2.0 * PAD)
}

fn py(y: f64) -> f64 {
    SIZE - PAD - y.clamp(0.0, 1.0) * (SIZE - 2.0 * PAD)
}

fn polyline(out: &mut String, points: &[TrajectoryPoint], stroke: &str, width: f64) {
    let coords: Vec<String> = points
        .iter()
        .map(|p| format!("{:.2},{:.2}", px(p.i_fx_norm), py(p.i_fy_norm)))
        .collect();
    let _ = writeln!(
        out,
        r#"<polyline fill="none" stroke="{stroke}" stroke-width="{width}" points="{}"/>"#,
        coords.join(" ")
    );
}

fn star(out: &mut String, cx: f64, cy: f64, r: f64) {
    let pts: Vec<String> = (0..10)
        .map(|k| {
            let radius = if k % 2 == 0 { r } else { r * 0.45 };
            let a = std::f64::consts::PI * (k as f64 / 5.0 - 0.5);
            format!("{:.2},{:.2}", cx + radius * a.cos(), cy + radius * a.sin())
        })
        .collect();
    let _ = writeln!(
        out,
        r#"<polygon fill="red" stroke="darkred" stroke-width="1" points="{}"/>"#,
        pts.join(" ")
    );
}

fn at_round(points: &[TrajectoryPoint], round: usize) -> Option<&TrajectoryPoint> {
    points.iter().find(|p| p.round == round)
}

/// Renders `average` (thick line), up to five `individual` runs (thin
/// lines) and the characteristic points of `average`: LMC target (red
/// star), training-error minimum (full black circle), test-error minimum
/// (magenta square) and margin maximum (hollow green circle).
pub fn plane_svg(
    title: &str,
    average: &[TrajectoryPoint],
    characteristic: &CharacteristicPoints,
    individual: &[&[TrajectoryPoint]],
) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
        SIZE / 2.0,
        escape(title)
    );
    // frame, grid and ticks
    for k in 0..=5 {
        let v = k as f64 / 5.0;
        let _ = writeln!(
            s,
            r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#eeeeee"/>"##,
            px(v),
            py(0.0),
            px(v),
            py(1.0)
        );
        let _ = writeln!(
            s,
            r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#eeeeee"/>"##,
            px(0.0),
            py(v),
            px(1.0),
            py(v)
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{v:.1}</text>"#,
            px(v),
            py(0.0) + 18.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{v:.1}</text>"#,
            px(0.0) - 8.0,
            py(v) + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<rect x="{PAD}" y="{PAD}" width="{w}" height="{w}" fill="none" stroke="black"/>"#,
        w = SIZE - 2.0 * PAD
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">I(F;X) / H(X)</text>"#,
        SIZE / 2.0,
        SIZE - 20.0
    );
    let _ = writeln!(
        s,
        r#"<text x="18" y="{y}" text-anchor="middle" transform="rotate(-90 18 {y})">I(F;Y) / H(Y)</text>"#,
        y = SIZE / 2.0
    );

    for (run, color) in individual.iter().zip(RUN_COLORS) {
        polyline(&mut s, run, color, 1.0);
    }
    polyline(&mut s, average, "#1f4e9c", 2.0);

    let c = characteristic;
    if let Some(p) = at_round(average, c.train_min_round) {
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="6" fill="black"/>"#,
            px(p.i_fx_norm),
            py(p.i_fy_norm)
        );
    }
    if let Some(p) = at_round(average, c.test_min_round) {
        let _ = writeln!(
            s,
            r#"<rect x="{:.2}" y="{:.2}" width="10" height="10" fill="magenta"/>"#,
            px(p.i_fx_norm) - 5.0,
            py(p.i_fy_norm) - 5.0
        );
    }
    if let Some(p) = at_round(average, c.margin_max_round) {
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="9" fill="none" stroke="green" stroke-width="2"/>"#,
            px(p.i_fx_norm),
            py(p.i_fy_norm)
        );
    }
    star(&mut s, px(c.lmc_target.0), py(c.lmc_target.1), 10.0);

    // legend
    let lx = SIZE - PAD - 150.0;
    let ly = PAD + 130.0;
    let items = [
        "LMC point",
        "min. training error",
        "min. test error",
        "max. average margin",
    ];
    for (i, label) in items.iter().enumerate() {
        let y = ly + 18.0 * i as f64;
        let mx = lx + 8.0;
        match i {
            0 => star(&mut s, mx, y - 4.0, 6.0),
            1 => {
                let _ = writeln!(s, r#"<circle cx="{mx}" cy="{}" r="4" fill="black"/>"#, y - 4.0);
            }
            2 => {
                let _ = writeln!(
                    s,
                    r#"<rect x="{}" y="{}" width="8" height="8" fill="magenta"/>"#,
                    mx - 4.0,
                    y - 8.0
                );
            }
            _ => {
                let _ = writeln!(
                    s,
                    r#"<circle cx="{mx}" cy="{}" r="5" fill="none" stroke="green" stroke-width="2"/>"#,
                    y - 4.0
                );
            }
        }
        let _ = writeln!(s, r#"<text x="{}" y="{y}">{label}</text>"#, lx + 20.0);
    }
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contains_all_markers() {
        let p = |round: usize, x: f64, y: f64| TrajectoryPoint {
            round,
            i_fx_norm: x,
            i_fy_norm: y,
            train_error: 0.0,
            test_error: 0.0,
            avg_margin: 0.0,
            min_margin: 0.0,
            margin_variance: 0.0,
        };
        let traj = vec![p(0, 0.0, 0.0), p(1, 0.6, 0.9), p(2, 0.2, 1.0)];
        let c = CharacteristicPoints {
            train_min_round: 1,
            test_min_round: 2,
            margin_max_round: 2,
            fx_peak_round: 1,
            lmc_round: Some(2),
            lmc_target: (0.2, 1.0),
        };
        let svg = plane_svg("a < b", &traj, &c, &[&traj]);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains(r#"fill="red""#));
        assert!(svg.contains(r#"fill="black""#));
        assert!(svg.contains(r#"fill="magenta""#));
        assert!(svg.contains(r#"stroke="green""#));
        assert!(svg.contains("a &lt; b"));
        assert_eq!(svg.matches("<polyline").count(), 2);
    }
}
