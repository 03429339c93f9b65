//! Minimal SVG line charts of a [`Series`]: first column on the x axis,
//! every other column as one polyline.

use std::fmt::Write as _;

use super::record::Series;

const W: f64 = 640.0;
const H: f64 = 400.0;
const PAD: f64 = 50.0;
const COLOURS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.filter(|v| v.is_finite()).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo <= f64::EPSILON * lo.abs().max(1e-300) {
        return (lo - 0.5, hi + 0.5);
    }
    (lo, hi)
}

pub fn line_chart(title: &str, series: &Series) -> String {
    let (x0, x1) = range(series.rows.iter().map(|r| r[0]));
    let (y0, y1) = range(series.rows.iter().flat_map(|r| r[1..].iter().copied()));
    let px = |x: f64| PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD);
    let py = |y: f64| H - PAD - (y - y0) / (y1 - y0) * (H - 2.0 * PAD);
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{PAD}" y="24" font-family="sans-serif" font-size="14">{}</text>"#, escape(title));
    let _ = writeln!(
        s,
        r#"<path d="M{PAD} {PAD} V{:.1} H{:.1}" fill="none" stroke="black"/>"#,
        H - PAD,
        W - PAD
    );
    for (label, x, y, anchor) in [
        (format!("{x0:.4e}"), PAD, H - PAD + 18.0, "start"),
        (format!("{x1:.4e}"), W - PAD, H - PAD + 18.0, "end"),
        (format!("{y0:.4e}"), PAD - 4.0, H - PAD, "end"),
        (format!("{y1:.4e}"), PAD - 4.0, PAD + 10.0, "end"),
    ] {
        let _ = writeln!(s, r#"<text x="{x:.1}" y="{y:.1}" font-family="sans-serif" font-size="10" text-anchor="{anchor}">{label}</text>"#);
    }
    for c in 1..series.columns.len() {
        let colour = COLOURS[(c - 1) % COLOURS.len()];
        let pts: Vec<String> = series
            .rows
            .iter()
            .filter(|r| r[0].is_finite() && r[c].is_finite())
            .map(|r| format!("{:.2},{:.2}", px(r[0]), py(r[c])))
            .collect();
        let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="{colour}" stroke-width="1.5"/>"#, pts.join(" "));
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11" fill="{colour}">{}</text>"#,
            W - PAD + 4.0,
            PAD + 14.0 * c as f64,
            escape(&series.columns[c])
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_polyline_per_curve() {
        let mut s = Series::new(&["t", "a", "b<c"]);
        s.push(vec![0.0, 1.0, 2.0]);
        s.push(vec![1.0, 1.0, f64::NAN]);
        let out = line_chart("demo", &s);
        assert_eq!(out.matches("<polyline").count(), 2);
        assert!(out.contains("b&lt;c"));
        assert!(out.ends_with("</svg>\n"));
    }
}
