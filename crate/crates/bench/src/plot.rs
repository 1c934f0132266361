//! Convergence plot as a standalone SVG. Output bytes depend only on the
//! input traces and labels.

use std::fmt::Write as _;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 180.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 50.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub values: Vec<f64>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Screen coordinates of each series; x is the 1-based iteration.
pub fn project(series: &[Series]) -> Vec<Vec<(f64, f64)>> {
    let max_len = series.iter().map(|s| s.values.len()).max().unwrap_or(1).max(2);
    let finite = series.iter().flat_map(|s| s.values.iter().copied()).filter(|v| v.is_finite());
    let (mut lo, mut hi) = finite.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        (lo, hi) = (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        lo -= 0.5;
        hi += 0.5;
    }
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    series
        .iter()
        .map(|s| {
            s.values
                .iter()
                .enumerate()
                .map(|(i, &v)| {
                    let x = LEFT + pw * i as f64 / (max_len - 1) as f64;
                    let y = TOP + ph * (hi - v) / (hi - lo);
                    (x, y)
                })
                .collect()
        })
        .collect()
}

pub fn render_svg(series: &[Series], title: &str) -> String {
    let points = project(series);
    let max_len = series.iter().map(|s| s.values.len()).max().unwrap_or(0);
    let finite: Vec<f64> = series.iter().flat_map(|s| s.values.iter().copied()).filter(|v| v.is_finite()).collect();
    let lo = finite.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = finite.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="18" text-anchor="middle">{}</text>"#, WIDTH / 2.0, escape(title));
    let (x0, x1, y0, y1) = (LEFT, WIDTH - RIGHT, TOP, HEIGHT - BOTTOM);
    let _ = writeln!(
        s,
        r#"<path d="M{x0} {y0} L{x0} {y1} L{x1} {y1}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">iteration</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">best-so-far SICD</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    );
    if lo.is_finite() {
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{:.4}</text>"#, x0 - 4.0, y0 + 4.0, hi);
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{:.4}</text>"#, x0 - 4.0, y1, lo);
    }
    let _ = writeln!(s, r#"<text x="{x0}" y="{}" text-anchor="middle">1</text>"#, y1 + 16.0);
    let _ = writeln!(s, r#"<text x="{x1}" y="{}" text-anchor="middle">{max_len}</text>"#, y1 + 16.0);

    for (i, (serie, pts)) in series.iter().zip(&points).enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let coords: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
        let _ = writeln!(
            s,
            r#"<polyline data-label="{}" fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            escape(&serie.label),
            coords.join(" ")
        );
        let ly = TOP + 10.0 + 18.0 * i as f64;
        let lx = WIDTH - RIGHT + 12.0;
        let _ = writeln!(
            s,
            r#"<g class="legend"><line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}">{}</text></g>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0,
            escape(&serie.label)
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn polylines(svg: &str) -> Vec<Vec<(f64, f64)>> {
        svg.lines()
            .filter(|l| l.starts_with("<polyline"))
            .map(|l| {
                let start = l.find("points=\"").unwrap() + 8;
                let end = l[start..].find('"').unwrap() + start;
                l[start..end]
                    .split(' ')
                    .map(|p| {
                        let (x, y) = p.split_once(',').unwrap();
                        (x.parse().unwrap(), y.parse().unwrap())
                    })
                    .collect()
            })
            .collect()
    }

    fn series(label: &str, values: Vec<f64>) -> Series {
        Series {
            label: label.into(),
            values,
        }
    }

    #[test]
    fn one_polyline_per_trace_with_all_points() {
        let svg = render_svg(&[series("a", vec![5.0, 4.0, 4.0, 1.0, 0.5])], "t");
        let p = polylines(&svg);
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].len(), 5);
    }

    #[test]
    fn identical_traces_coincide() {
        let v = vec![3.0, 2.0, 1.0];
        let svg = render_svg(&[series("a", v.clone()), series("b", v)], "t");
        let p = polylines(&svg);
        assert_eq!(p[0], p[1]);
        assert_eq!(svg.matches("class=\"legend\"").count(), 2);
    }

    #[test]
    fn decreasing_trace_never_rises_on_screen() {
        let svg = render_svg(&[series("a", vec![9.0, 7.5, 7.5, 3.0, 2.9])], "t");
        // screen y grows downward, so falling values mean growing y
        let p = &polylines(&svg)[0];
        assert!(p.windows(2).all(|w| w[1].1 >= w[0].1));
    }

    #[test]
    fn output_is_deterministic_and_escaped() {
        let s = [series("x<y", vec![1.0, 1.0])];
        assert_eq!(render_svg(&s, "a&b"), render_svg(&s, "a&b"));
        assert!(render_svg(&s, "a&b").contains("x&lt;y"));
    }
}
