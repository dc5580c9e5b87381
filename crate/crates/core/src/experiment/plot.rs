//! Scatter of λ₁/prediction against `n` as a standalone SVG document.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::records::TrialRecord;
use crate::error::{Error, Result};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 190.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 55.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Renders the plot with one series per distinct label, legend in label
/// order. Records without a ratio are skipped.
pub fn render_ratio_svg(
    records: &[TrialRecord],
    label: impl Fn(&TrialRecord) -> String,
) -> Result<String> {
    if records.is_empty() {
        return Err(Error::EmptyInput("no records to plot"));
    }
    let mut series: BTreeMap<String, Vec<(u32, f64)>> = BTreeMap::new();
    for r in records {
        let entry = series.entry(label(r)).or_default();
        if let Some(ratio) = r.ratio {
            entry.push((r.n, ratio));
        }
    }

    let n_min = records.iter().map(|r| r.n).min().unwrap_or(1);
    let n_max = records.iter().map(|r| r.n).max().unwrap_or(1);
    let (x0, x1) = (f64::from(n_min) - 1.0, f64::from(n_max) + 1.0);
    let ratios = records.iter().filter_map(|r| r.ratio);
    let y0 = ratios.clone().fold(0.9, f64::min).min(0.9) - 0.05;
    let y1 = ratios.fold(1.1, f64::max) + 0.05;
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * plot_w;
    let sy = |y: f64| TOP + (y1 - y) / (y1 - y0) * plot_h;

    let mut s = String::new();
    let w = &mut s;
    // Writing to a String cannot fail.
    let _ = writeln!(
        w,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        w,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        w,
        r#"<rect x="{LEFT:.2}" y="{TOP:.2}" width="{plot_w:.2}" height="{plot_h:.2}" fill="none" stroke="black"/>"#
    );

    for n in n_min..=n_max {
        let x = sx(f64::from(n));
        let _ = writeln!(
            w,
            r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{n}</text>"#,
            TOP + plot_h,
            TOP + plot_h + 5.0,
            TOP + plot_h + 20.0
        );
    }
    for i in 0..=5 {
        let y = y0 + (y1 - y0) * f64::from(i) / 5.0;
        let py = sy(y);
        let _ = writeln!(
            w,
            r#"<line x1="{:.2}" y1="{py:.2}" x2="{LEFT:.2}" y2="{py:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{y:.3}</text>"#,
            LEFT - 5.0,
            LEFT - 8.0,
            py + 4.0
        );
    }
    let _ = writeln!(
        w,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">n</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        w,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">λ₁ / max(√Δ, np)</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    );

    let ref_y = sy(1.0);
    let _ = writeln!(
        w,
        r##"<line class="reference" x1="{LEFT:.2}" y1="{ref_y:.2}" x2="{:.2}" y2="{ref_y:.2}" stroke="#555555" stroke-dasharray="6 4"/>"##,
        LEFT + plot_w
    );

    for (i, (name, points)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let _ = writeln!(
            w,
            r#"<g class="series" fill="{color}" fill-opacity="0.75">"#
        );
        for &(n, ratio) in points {
            let _ = writeln!(
                w,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3.5"/>"#,
                sx(f64::from(n)),
                sy(ratio)
            );
        }
        let _ = writeln!(w, "</g>");
        let ly = TOP + 10.0 + 20.0 * i as f64;
        let lx = WIDTH - RIGHT + 15.0;
        let _ = writeln!(
            w,
            r#"<g class="legend-entry"><circle cx="{lx:.2}" cy="{ly:.2}" r="4" fill="{color}"/><text x="{:.2}" y="{:.2}">{}</text></g>"#,
            lx + 10.0,
            ly + 4.0,
            escape(name)
        );
    }
    let _ = writeln!(w, "</svg>");
    Ok(s)
}

/// Writes the plot with one series per label.
pub fn plot_ratio_series(
    records: &[TrialRecord],
    label: impl Fn(&TrialRecord) -> String,
    path: &Path,
) -> Result<()> {
    let svg = render_ratio_svg(records, label)?;
    fs::write(path, svg)?;
    Ok(())
}

/// Writes the plot with one series per distinct `p`.
pub fn plot_ratio(records: &[TrialRecord], path: &Path) -> Result<()> {
    plot_ratio_series(records, |r| format!("p={}", r.p), path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degree_theory::Regime;

    fn rec(n: u32, p: f64, ratio: Option<f64>) -> TrialRecord {
        TrialRecord {
            n,
            p,
            trial_index: 0,
            derived_seed: 0,
            m: 1,
            delta: 1,
            kappa: Some(1),
            regime: Regime::Case2,
            lambda1: 1.0,
            iterations: 1,
            residual: 0.0,
            converged: true,
            prediction: 1.0,
            ratio,
            largest_component_edges: None,
            case4_shape: None,
        }
    }

    fn parse(svg: &str) -> roxmltree::Document<'_> {
        roxmltree::Document::parse(svg).expect("well-formed SVG")
    }

    #[test]
    fn one_record() {
        let svg = render_ratio_svg(&[rec(8, 0.5, Some(1.1))], |r| format!("p={}", r.p)).unwrap();
        let doc = parse(&svg);
        let circles = doc
            .descendants()
            .filter(|n| {
                n.has_tag_name("circle")
                    && n.parent()
                        .is_some_and(|p| p.attribute("class") == Some("series"))
            })
            .count();
        assert_eq!(circles, 1);
        assert_eq!(
            doc.descendants()
                .filter(|n| n.attribute("class") == Some("reference"))
                .count(),
            1
        );
    }

    #[test]
    fn two_series_legend() {
        let recs = [
            rec(8, 0.5, Some(1.1)),
            rec(9, 0.25, Some(1.2)),
            rec(9, 0.5, None),
        ];
        let svg = render_ratio_svg(&recs, |r| format!("p<{}>&", r.p)).unwrap();
        let doc = parse(&svg);
        let legend = doc
            .descendants()
            .filter(|n| n.attribute("class") == Some("legend-entry"))
            .count();
        assert_eq!(legend, 2);
    }

    #[test]
    fn deterministic_and_empty_error() {
        let recs = [rec(8, 0.5, Some(1.1)), rec(12, 0.5, Some(1.05))];
        let a = render_ratio_svg(&recs, |r| r.p.to_string()).unwrap();
        let b = render_ratio_svg(&recs, |r| r.p.to_string()).unwrap();
        assert_eq!(a, b);
        assert!(matches!(
            render_ratio_svg(&[], |_| String::new()),
            Err(Error::EmptyInput(_))
        ));
    }
}
