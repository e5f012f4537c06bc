//! Plain-text artifacts: RFC-4180 CSV, SVG 1.1 line plots and P2 greymaps.

use crate::geometry::Grid;
use crate::solver::DropletField;
use std::fmt::Write as _;

/// Grey levels of a PGM: liquid, vapour, outside the domain.
pub const PGM_LIQUID: u8 = 255;
pub const PGM_VAPOUR: u8 = 160;
pub const PGM_SOLID: u8 = 0;

/// Quotes a CSV field when it contains a separator, quote or line break.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\r', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// CSV text with CRLF line endings.
pub fn csv<S: AsRef<str>>(header: &[&str], rows: &[Vec<S>]) -> String {
    let mut out = String::new();
    let line = |fields: Vec<String>| fields.join(",") + "\r\n";
    out.push_str(&line(header.iter().map(|h| csv_field(h)).collect()));
    for r in rows {
        out.push_str(&line(r.iter().map(|f| csv_field(f.as_ref())).collect()));
    }
    out
}

/// Occupancy as a plain greymap, top row first.
pub fn pgm(grid: &Grid, field: &DropletField) -> String {
    let mut out = format!("P2\n{} {}\n255\n", grid.nx, grid.ny);
    for j in (0..grid.ny).rev() {
        let row: Vec<String> = (0..grid.nx)
            .map(|i| {
                let c = grid.index(i, j);
                let v = if field.is_occupied(c) {
                    PGM_LIQUID
                } else if grid.is_node(c) {
                    PGM_VAPOUR
                } else {
                    PGM_SOLID
                };
                v.to_string()
            })
            .collect();
        // lines of a plain PGM should stay under 70 characters
        for chunk in row.chunks(16) {
            out.push_str(&chunk.join(" "));
            out.push('\n');
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub colour: String,
    pub points: Vec<(f64, f64)>,
}

/// Line plot with markers and a legend; non-finite points are skipped.
pub fn svg_plot(title: &str, xlabel: &str, ylabel: &str, series: &[Series]) -> String {
    let (w, h) = (640.0, 420.0);
    let (l, r, t, b) = (80.0, 20.0, 40.0, 60.0);
    let pts = || series.iter().flat_map(|s| s.points.iter()).filter(|p| p.0.is_finite() && p.1.is_finite());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in pts() {
        x0 = x0.min(p.0);
        x1 = x1.max(p.0);
        y0 = y0.min(p.1);
        y1 = y1.max(p.1);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    x0 = x0.min(0.0);
    let pad = 0.08 * (y1 - y0).max(1e-9 * y1.abs().max(1.0));
    y0 -= pad;
    y1 += pad;
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    let sx = |x: f64| l + (x - x0) / (x1 - x0) * (w - l - r);
    let sy = |y: f64| h - b - (y - y0) / (y1 - y0) * (h - t - b);
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-family="sans-serif" font-size="15">{}</text>"#, w / 2.0, xml(title));
    let _ = writeln!(
        s,
        r#"<path d="M{l} {t} V{} H{}" fill="none" stroke="black"/>"#,
        h - b,
        w - r
    );
    for k in 0..=4 {
        let xv = x0 + (x1 - x0) * k as f64 / 4.0;
        let yv = y0 + (y1 - y0) * k as f64 / 4.0;
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="11">{}</text>"#,
            sx(xv),
            h - b + 16.0,
            tick(xv)
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{:.1}" text-anchor="end" font-family="sans-serif" font-size="11">{}</text>"#,
            l - 6.0,
            sy(yv) + 4.0,
            tick(yv)
        );
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="13">{}</text>"#, (l + w - r) / 2.0, h - 18.0, xml(xlabel));
    let _ = writeln!(
        s,
        r#"<text x="18" y="{}" text-anchor="middle" font-family="sans-serif" font-size="13" transform="rotate(-90 18 {})">{}</text>"#,
        (t + h - b) / 2.0,
        (t + h - b) / 2.0,
        xml(ylabel)
    );
    for (k, se) in series.iter().enumerate() {
        let good: Vec<&(f64, f64)> = se.points.iter().filter(|p| p.0.is_finite() && p.1.is_finite()).collect();
        if !good.is_empty() {
            let d: Vec<String> = good.iter().map(|p| format!("{:.2},{:.2}", sx(p.0), sy(p.1))).collect();
            let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="2"/>"#, d.join(" "), se.colour);
            for p in &good {
                let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3.5" fill="{}"/>"#, sx(p.0), sy(p.1), se.colour);
            }
        }
        let ly = t + 10.0 + 18.0 * k as f64;
        let _ = writeln!(s, r#"<line x1="{}" y1="{ly}" x2="{}" y2="{ly}" stroke="{}" stroke-width="2"/>"#, w - r - 150.0, w - r - 126.0, se.colour);
        let _ = writeln!(s, r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12">{}</text>"#, w - r - 120.0, ly + 4.0, xml(&se.label));
    }
    s.push_str("</svg>\n");
    s
}

fn tick(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-3..1e4).contains(&a) {
        format!("{v:.2e}")
    } else {
        format!("{v:.4}").trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

fn xml(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quoting() {
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"x\""), "\"say \"\"x\"\"\"");
        assert_eq!(csv_field("plain"), "plain");
        let t = csv(&["a", "b"], &[vec!["1", "2"]]);
        assert_eq!(t, "a,b\r\n1,2\r\n");
    }

    #[test]
    fn svg_is_closed() {
        let s = svg_plot("t", "x", "y", &[Series { label: "f".into(), colour: "red".into(), points: vec![(0.25, 1.0), (0.125, f64::NAN)] }]);
        assert!(s.starts_with("<?xml"));
        assert!(s.trim_end().ends_with("</svg>"));
        assert_eq!(s.matches("<circle").count(), 1);
    }
}
