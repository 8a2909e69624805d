use std::fmt::Write as _;
use std::path::Path;

use super::summary::{Histogram, Quartiles, Summary};
use super::BenchError;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 360.0;
const MARGIN: f64 = 48.0;
const COLORS: [&str; 4] = ["#4e79a7", "#f28e2b", "#59a14f", "#e15759"];

fn header(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="20" text-anchor="middle" font-family="sans-serif" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    let _ = writeln!(
        out,
        r#"<path d="M{m:.1},{top:.1} V{b:.1} H{r:.1}" stroke="black" fill="none"/>"#,
        m = MARGIN,
        top = MARGIN,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN
    );
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn label(out: &mut String, x: f64, y: f64, anchor: &str, text: &str) {
    let _ = writeln!(
        out,
        r#"<text x="{x:.1}" y="{y:.1}" text-anchor="{anchor}" font-family="sans-serif" font-size="10">{}</text>"#,
        escape(text)
    );
}

/// Overlaid bar histograms, one series per label. Buckets share the same width.
pub fn histogram_svg(title: &str, series: &[(String, &Histogram)]) -> String {
    let mut out = String::new();
    header(&mut out, title);
    let keys: Vec<i64> = series.iter().flat_map(|(_, h)| h.buckets.keys().copied()).collect();
    if let (Some(&lo), Some(&hi)) = (keys.iter().min(), keys.iter().max()) {
        let width = series[0].1.width;
        let peak = series.iter().flat_map(|(_, h)| h.buckets.values().copied()).max().unwrap_or(1).max(1);
        let span = (hi - lo + 1) as f64;
        let plot_w = WIDTH - 2.0 * MARGIN;
        let plot_h = HEIGHT - 2.0 * MARGIN;
        let slot = plot_w / span;
        let bar = slot / series.len() as f64;
        for (s, (name, h)) in series.iter().enumerate() {
            let color = COLORS[s % COLORS.len()];
            for (&k, &count) in &h.buckets {
                let bh = plot_h * count as f64 / peak as f64;
                let x = MARGIN + (k - lo) as f64 * slot + s as f64 * bar;
                let _ = writeln!(
                    out,
                    r#"<rect x="{x:.2}" y="{:.2}" width="{bar:.2}" height="{bh:.2}" fill="{color}"/>"#,
                    HEIGHT - MARGIN - bh
                );
            }
            label(&mut out, WIDTH - MARGIN, MARGIN + 12.0 * s as f64, "end", name);
        }
        label(&mut out, MARGIN, HEIGHT - MARGIN + 14.0, "middle", &format!("{:.2}", lo as f64 * width));
        label(&mut out, WIDTH - MARGIN, HEIGHT - MARGIN + 14.0, "middle", &format!("{:.2}", (hi + 1) as f64 * width));
        label(&mut out, MARGIN - 4.0, MARGIN, "end", &peak.to_string());
    }
    out.push_str("</svg>\n");
    out
}

/// One box (quartiles, whiskers at min and max) per labelled group.
pub fn box_plot_svg(title: &str, groups: &[(String, Quartiles)]) -> String {
    let mut out = String::new();
    header(&mut out, title);
    if !groups.is_empty() {
        let lo = groups.iter().map(|(_, q)| q.min).fold(f64::INFINITY, f64::min);
        let hi = groups.iter().map(|(_, q)| q.max).fold(f64::NEG_INFINITY, f64::max);
        let span = if hi > lo { hi - lo } else { 1.0 };
        let plot_h = HEIGHT - 2.0 * MARGIN;
        let y = |v: f64| HEIGHT - MARGIN - plot_h * (v - lo) / span;
        let slot = (WIDTH - 2.0 * MARGIN) / groups.len() as f64;
        for (i, (name, q)) in groups.iter().enumerate() {
            let cx = MARGIN + slot * (i as f64 + 0.5);
            let half = slot * 0.3;
            let _ = writeln!(
                out,
                r#"<path d="M{cx:.2},{:.2} V{:.2} M{cx:.2},{:.2} V{:.2}" stroke="black"/>"#,
                y(q.max),
                y(q.q3),
                y(q.q1),
                y(q.min)
            );
            let _ = writeln!(
                out,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{}" stroke="black"/>"#,
                cx - half,
                y(q.q3),
                2.0 * half,
                (y(q.q1) - y(q.q3)).max(0.0),
                COLORS[0]
            );
            let _ = writeln!(
                out,
                r#"<path d="M{:.2},{m:.2} H{:.2}" stroke="black" stroke-width="2"/>"#,
                cx - half,
                cx + half,
                m = y(q.median)
            );
            label(&mut out, cx, HEIGHT - MARGIN + 14.0, "middle", name);
        }
        label(&mut out, MARGIN - 4.0, y(hi), "end", &format!("{hi:.3}"));
        label(&mut out, MARGIN - 4.0, y(lo), "end", &format!("{lo:.3}"));
    }
    out.push_str("</svg>\n");
    out
}

fn write(path: &Path, text: String) -> Result<(), BenchError> {
    std::fs::write(path, text).map_err(|source| BenchError::Io { path: path.to_path_buf(), source })
}

/// CIH/NNH cost ratio histogram, one series per direction.
pub fn emit_svg_histogram(summary: &Summary, path: &Path) -> Result<(), BenchError> {
    let series: Vec<(String, &Histogram)> =
        summary.per_direction.iter().map(|d| (d.direction.to_string(), &d.ratio_histogram)).collect();
    write(path, histogram_svg("CIH / NNH cost ratio", &series))
}

/// Box plots of the cost ratio per capacity and of the time ratio per node count, written
/// to `path` and to `path` with a `-time` stem suffix.
pub fn emit_svg_boxplots(summary: &Summary, path: &Path) -> Result<(), BenchError> {
    let cost: Vec<(String, Quartiles)> =
        summary.cost_ratio_by_capacity.iter().map(|(q, v)| (format!("Q={q}"), *v)).collect();
    write(path, box_plot_svg("CIH / NNH cost ratio by capacity", &cost))?;
    let time: Vec<(String, Quartiles)> =
        summary.time_ratio_by_nodes.iter().map(|(n, v)| (n.to_string(), *v)).collect();
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let time_path = path.with_file_name(format!("{stem}-time.svg"));
    write(&time_path, box_plot_svg("CIH / NNH wall time ratio by node count", &time))
}
