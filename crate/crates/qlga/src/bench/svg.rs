//! Minimal self-contained SVG writer for log-log convergence plots.

use std::fmt::Write as _;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 55.0;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

/// Renders one or more (x, y) series on log-log axes with reference slope
/// guide lines anchored at the first series' first point.
pub fn log_log_plot(
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[(String, Vec<(f64, f64)>)],
    guides: &[(f64, &str)],
) -> String {
    let points: Vec<(f64, f64)> = series
        .iter()
        .flat_map(|(_, pts)| pts.iter().copied())
        .filter(|&(x, y)| x > 0.0 && y > 0.0)
        .collect();
    let (mut x0, mut x1) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &points {
        x0 = x0.min(x.log10());
        x1 = x1.max(x.log10());
        y0 = y0.min(y.log10());
        y1 = y1.max(y.log10());
    }
    if points.is_empty() {
        x0 = -1.0;
        x1 = 0.0;
        y0 = -1.0;
        y1 = 0.0;
    }
    // A little padding in log space.
    let pad = |a: &mut f64, b: &mut f64| {
        let span = (*b - *a).max(0.5);
        *a -= 0.08 * span;
        *b += 0.08 * span;
    };
    pad(&mut x0, &mut x1);
    pad(&mut y0, &mut y1);

    let to_px = |lx: f64, ly: f64| -> (f64, f64) {
        let px = MARGIN_L + (lx - x0) / (x1 - x0) * (WIDTH - MARGIN_L - MARGIN_R);
        let py = HEIGHT - MARGIN_B - (ly - y0) / (y1 - y0) * (HEIGHT - MARGIN_T - MARGIN_B);
        (px, py)
    };

    let mut svg = String::new();
    write!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"monospace\" font-size=\"12\">\n"
    )
    .unwrap();
    writeln!(svg, "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>").unwrap();
    writeln!(
        svg,
        "<text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">{}</text>",
        WIDTH / 2.0,
        title
    )
    .unwrap();

    // Decade grid lines and tick labels.
    for dx in (x0.floor() as i64)..=(x1.ceil() as i64) {
        let lx = dx as f64;
        if lx < x0 || lx > x1 {
            continue;
        }
        let (px, _) = to_px(lx, y0);
        writeln!(
            svg,
            "<line x1=\"{px:.1}\" y1=\"{MARGIN_T}\" x2=\"{px:.1}\" y2=\"{}\" \
             stroke=\"#dddddd\"/>",
            HEIGHT - MARGIN_B
        )
        .unwrap();
        writeln!(
            svg,
            "<text x=\"{px:.1}\" y=\"{}\" text-anchor=\"middle\">1e{dx}</text>",
            HEIGHT - MARGIN_B + 18.0
        )
        .unwrap();
    }
    for dy in (y0.floor() as i64)..=(y1.ceil() as i64) {
        let ly = dy as f64;
        if ly < y0 || ly > y1 {
            continue;
        }
        let (_, py) = to_px(x0, ly);
        writeln!(
            svg,
            "<line x1=\"{MARGIN_L}\" y1=\"{py:.1}\" x2=\"{}\" y2=\"{py:.1}\" \
             stroke=\"#dddddd\"/>",
            WIDTH - MARGIN_R
        )
        .unwrap();
        writeln!(
            svg,
            "<text x=\"{}\" y=\"{py:.1}\" text-anchor=\"end\" dy=\"4\">1e{dy}</text>",
            MARGIN_L - 6.0
        )
        .unwrap();
    }
    // Axes box and labels.
    writeln!(
        svg,
        "<rect x=\"{MARGIN_L}\" y=\"{MARGIN_T}\" width=\"{:.1}\" height=\"{:.1}\" \
         fill=\"none\" stroke=\"black\"/>",
        WIDTH - MARGIN_L - MARGIN_R,
        HEIGHT - MARGIN_T - MARGIN_B
    )
    .unwrap();
    writeln!(
        svg,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>",
        (MARGIN_L + WIDTH - MARGIN_R) / 2.0,
        HEIGHT - 12.0,
        x_label
    )
    .unwrap();
    writeln!(
        svg,
        "<text x=\"16\" y=\"{}\" text-anchor=\"middle\" \
         transform=\"rotate(-90 16 {})\">{}</text>",
        (MARGIN_T + HEIGHT - MARGIN_B) / 2.0,
        (MARGIN_T + HEIGHT - MARGIN_B) / 2.0,
        y_label
    )
    .unwrap();

    // Guide lines with the requested slopes, anchored at the first point.
    if let Some(&(ax, ay)) = points.first() {
        for (i, (slope, label)) in guides.iter().enumerate() {
            let (lx0, lx1) = (x0 + 0.05, x1 - 0.05);
            let ly_at = |lx: f64| ay.log10() + slope * (lx - ax.log10());
            let (p0x, p0y) = to_px(lx0, ly_at(lx0));
            let (p1x, p1y) = to_px(lx1, ly_at(lx1));
            writeln!(
                svg,
                "<line x1=\"{p0x:.1}\" y1=\"{p0y:.1}\" x2=\"{p1x:.1}\" y2=\"{p1y:.1}\" \
                 stroke=\"#888888\" stroke-dasharray=\"6 4\"/>"
            )
            .unwrap();
            writeln!(
                svg,
                "<text x=\"{:.1}\" y=\"{:.1}\" fill=\"#555555\">{}</text>",
                p1x - 60.0,
                p1y - 6.0 - 14.0 * i as f64,
                label
            )
            .unwrap();
        }
    }

    // Data series.
    for (si, (label, pts)) in series.iter().enumerate() {
        let color = COLORS[si % COLORS.len()];
        let mut path = String::new();
        for (i, &(x, y)) in pts.iter().enumerate() {
            let (px, py) = to_px(x.log10(), y.log10());
            write!(path, "{}{px:.1},{py:.1} ", if i == 0 { "M" } else { "L" }).unwrap();
        }
        writeln!(
            svg,
            "<path d=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>",
            path.trim_end()
        )
        .unwrap();
        for &(x, y) in pts {
            let (px, py) = to_px(x.log10(), y.log10());
            writeln!(svg, "<circle cx=\"{px:.1}\" cy=\"{py:.1}\" r=\"3\" fill=\"{color}\"/>")
                .unwrap();
        }
        writeln!(
            svg,
            "<text x=\"{:.1}\" y=\"{:.1}\" fill=\"{color}\">{}</text>",
            WIDTH - MARGIN_R - 150.0,
            MARGIN_T + 16.0 + 16.0 * si as f64,
            label
        )
        .unwrap();
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_wellformed_svg() {
        let series = vec![(
            "basic".to_string(),
            vec![(1.0 / 64.0, 1e-3), (1.0 / 128.0, 2.5e-4), (1.0 / 256.0, 6e-5)],
        )];
        let svg = log_log_plot("t", "dx", "err", &series, &[(0.5, "slope 0.5")]);
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<circle").count(), 3);
        assert!(svg.contains("slope 0.5"));
    }
}
