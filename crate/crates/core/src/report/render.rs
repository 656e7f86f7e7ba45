use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use super::summary::{IntervalKind, Summary, SummaryRow};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Markdown,
    SvgBars,
}

impl ReportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            Self::Markdown => "md",
            Self::SvgBars => "svg",
        }
    }
}

pub fn render(summary: &Summary, format: ReportFormat) -> String {
    match format {
        ReportFormat::Markdown => render_markdown(summary),
        ReportFormat::SvgBars => render_svg(summary),
    }
}

/// Renders and writes atomically to `path`.
pub fn write_report(summary: &Summary, format: ReportFormat, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(render(summary, format).as_bytes())?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn snr_label(snr: f64) -> String {
    if snr.is_infinite() {
        if snr > 0.0 { "inf dB".into() } else { "-inf dB".into() }
    } else {
        format!("{snr} dB")
    }
}

/// `name`, or `name[id]` when the method has several parameter sets.
fn method_labels(rows: &[&SummaryRow]) -> Vec<(Option<String>, Option<usize>, String)> {
    let mut keys: Vec<(Option<String>, Option<usize>)> = rows.iter().map(|r| (r.method.clone(), r.param_set_id)).collect();
    keys.sort();
    keys.dedup();
    keys.iter()
        .map(|(m, p)| {
            let name = m.clone().unwrap_or_else(|| "all methods".into());
            let several = keys.iter().filter(|(n, _)| n == m).count() > 1;
            let label = match p {
                Some(id) if several => format!("{name}[{id}]"),
                _ => name,
            };
            (m.clone(), *p, label)
        })
        .collect()
}

fn snr_columns(rows: &[&SummaryRow]) -> Vec<Option<f64>> {
    let mut snrs: Vec<Option<f64>> = rows.iter().map(|r| r.snr_db).collect();
    snrs.sort_by(|a, b| match (a, b) {
        (Some(a), Some(b)) => a.total_cmp(b),
        _ => a.is_some().cmp(&b.is_some()),
    });
    snrs.dedup_by(|a, b| a.map(f64::to_bits) == b.map(f64::to_bits));
    snrs
}

/// Panels of rows sharing metric and signal, in summary order.
fn panels(summary: &Summary) -> Vec<(String, Option<String>, Vec<&SummaryRow>)> {
    let mut out: Vec<(String, Option<String>, Vec<&SummaryRow>)> = Vec::new();
    for r in &summary.rows {
        match out.iter_mut().find(|(m, s, _)| *m == r.metric && *s == r.signal) {
            Some(p) => p.2.push(r),
            None => out.push((r.metric.clone(), r.signal.clone(), vec![r])),
        }
    }
    out.sort_by(|a, b| (&a.1, &a.0).cmp(&(&b.1, &b.0)));
    out
}

fn cell(r: &SummaryRow) -> String {
    if r.count == 0 {
        "NaN".into()
    } else {
        format!("{:.3} ± {:.3}", r.mean, r.half_width())
    }
}

fn find<'a>(rows: &[&'a SummaryRow], method: &Option<String>, pid: Option<usize>, snr: Option<f64>) -> Option<&'a SummaryRow> {
    rows.iter()
        .find(|r| r.method == *method && r.param_set_id == pid && r.snr_db.map(f64::to_bits) == snr.map(f64::to_bits))
        .copied()
}

/// One table per signal and metric: methods as rows, SNRs as columns,
/// `mean ± half-width` cells.
pub fn render_markdown(summary: &Summary) -> String {
    let mut out = String::from("# Benchmark report\n\n");
    if summary.is_empty() {
        out.push_str("No results to report.\n");
        return out;
    }
    let _ = writeln!(
        out,
        "Cells are mean ± half-width of the {:.4} confidence interval ({} Bonferroni comparisons).",
        summary.adjusted_confidence, summary.spec.bonferroni_comparisons
    );
    let nan = summary.nan_count();
    if nan > 0 {
        let _ = writeln!(out, "{nan} failed (NaN) values were excluded.");
    }
    for (metric, signal, rows) in panels(summary) {
        let kind = match rows[0].interval {
            IntervalKind::ClopperPearson => "Clopper-Pearson",
            IntervalKind::StudentT => "Student-t",
        };
        let signal = signal.unwrap_or_else(|| "all signals".into());
        let _ = writeln!(out, "\n## {signal}: {metric} ({kind})\n");
        let snrs = snr_columns(&rows);
        out.push_str("| method |");
        for s in &snrs {
            let _ = write!(out, " {} |", s.map_or_else(|| "all SNRs".into(), snr_label));
        }
        out.push_str("\n|---|");
        out.push_str(&"---|".repeat(snrs.len()));
        out.push('\n');
        for (m, pid, label) in method_labels(&rows) {
            let _ = write!(out, "| {label} |");
            for &s in &snrs {
                let text = find(&rows, &m, pid, s).map_or_else(|| "-".into(), cell);
                let _ = write!(out, " {text} |");
            }
            out.push('\n');
        }
    }
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

const PALETTE: [&str; 8] = ["#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#9c755f"];
const WIDTH: f64 = 760.0;
const PANEL_H: f64 = 280.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 40.0;

fn nice_ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = (hi - lo).max(1e-12);
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|s| span / s <= 6.0).unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|i| i as f64 * step).collect()
}

/// Grouped bars (SNR groups, one bar per method) with interval whiskers,
/// one panel per signal and metric.
pub fn render_svg(summary: &Summary) -> String {
    let panels = panels(summary);
    let height = if panels.is_empty() { 80.0 } else { panels.len() as f64 * PANEL_H };
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}" font-family="sans-serif" font-size="11">"#
    );
    if panels.is_empty() {
        let _ = writeln!(out, r#"<text x="20" y="45">No results to report.</text>"#);
    }
    for (p, (metric, signal, rows)) in panels.iter().enumerate() {
        let y0 = p as f64 * PANEL_H;
        let plot_w = WIDTH - LEFT - RIGHT;
        let plot_h = PANEL_H - TOP - BOTTOM;
        let finite = rows.iter().filter(|r| r.count > 0);
        let (mut lo, mut hi) = finite.fold((0.0f64, 0.0f64), |(l, h), r| (l.min(r.lo).min(r.mean), h.max(r.hi).max(r.mean)));
        if hi - lo < 1e-12 {
            hi = lo + 1.0;
        }
        let pad = 0.05 * (hi - lo);
        (lo, hi) = (if lo < 0.0 { lo - pad } else { lo }, hi + pad);
        let y = |v: f64| y0 + TOP + plot_h * (hi - v) / (hi - lo);
        let title = format!("{}: {}", signal.as_deref().unwrap_or("all signals"), metric);
        let _ = writeln!(out, r#"<g class="panel">"#);
        let _ = writeln!(out, r#"<text x="{}" y="{}" font-size="13" font-weight="bold">{}</text>"#, LEFT, y0 + 22.0, escape(&title));
        for t in nice_ticks(lo, hi) {
            let ty = y(t);
            let _ = writeln!(
                out,
                r##"<line x1="{LEFT}" y1="{ty:.2}" x2="{:.2}" y2="{ty:.2}" stroke="#dddddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"##,
                LEFT + plot_w,
                LEFT - 6.0,
                ty + 4.0,
                format_tick(t)
            );
        }
        let _ = writeln!(
            out,
            r##"<line x1="{LEFT}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#000000"/>"##,
            y(0.0f64.clamp(lo, hi)),
            LEFT + plot_w,
            y(0.0f64.clamp(lo, hi))
        );
        let snrs = snr_columns(rows);
        let methods = method_labels(rows);
        let group_w = plot_w / snrs.len() as f64;
        let bar_w = 0.8 * group_w / methods.len() as f64;
        for (g, &s) in snrs.iter().enumerate() {
            let gx = LEFT + g as f64 * group_w;
            let label = s.map_or_else(|| "all SNRs".into(), snr_label);
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
                gx + group_w / 2.0,
                y0 + PANEL_H - BOTTOM + 16.0,
                escape(&label)
            );
            for (b, (m, pid, _)) in methods.iter().enumerate() {
                let Some(r) = find(rows, m, *pid, s).filter(|r| r.count > 0) else {
                    continue;
                };
                let bx = gx + 0.1 * group_w + b as f64 * bar_w;
                let base = 0.0f64.clamp(lo, hi);
                let (top, bottom) = (y(r.mean.max(base)), y(r.mean.min(base)));
                let color = PALETTE[b % PALETTE.len()];
                let _ = writeln!(
                    out,
                    r#"<rect x="{bx:.2}" y="{top:.2}" width="{:.2}" height="{:.2}" fill="{color}"/>"#,
                    bar_w * 0.9,
                    (bottom - top).max(0.0)
                );
                let cx = bx + bar_w * 0.45;
                let _ = writeln!(
                    out,
                    r##"<path d="M{cx:.2} {:.2}V{:.2}M{:.2} {:.2}H{:.2}M{:.2} {:.2}H{:.2}" stroke="#222222" fill="none"/>"##,
                    y(r.lo),
                    y(r.hi),
                    cx - 3.0,
                    y(r.lo),
                    cx + 3.0,
                    cx - 3.0,
                    y(r.hi),
                    cx + 3.0
                );
            }
        }
        for (b, (_, _, label)) in methods.iter().enumerate() {
            let ly = y0 + TOP + 10.0 + b as f64 * 16.0;
            let lx = WIDTH - RIGHT + 15.0;
            let _ = writeln!(
                out,
                r#"<rect x="{lx}" y="{:.2}" width="10" height="10" fill="{}"/><text x="{}" y="{:.2}">{}</text>"#,
                ly - 9.0,
                PALETTE[b % PALETTE.len()],
                lx + 15.0,
                ly,
                escape(label)
            );
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}

fn format_tick(t: f64) -> String {
    let s = format!("{t:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::{ResultRow, ResultsTable};
    use crate::report::summary::{summarize, ReportSpec};

    fn table(methods: &[&str], snrs: &[f64]) -> ResultsTable {
        let mut rows = Vec::new();
        for m in methods {
            for &s in snrs {
                for rep in 0..3 {
                    rows.push(ResultRow {
                        method: m.to_string(),
                        param_set_id: 0,
                        signal: "LinearChirp".into(),
                        snr_db: s,
                        repetition: rep,
                        metric: "qrf".into(),
                        value: s + rep as f64 - 1.0,
                        runtime_s: 0.0,
                        error: None,
                    });
                }
            }
        }
        ResultsTable::new(rows)
    }

    #[test]
    fn empty_summary_has_notice() {
        let s = summarize(&ResultsTable::default(), &ReportSpec::default()).unwrap();
        assert!(render_markdown(&s).contains("No results"));
        let svg = render_svg(&s);
        roxmltree::Document::parse(&svg).unwrap();
        assert!(svg.contains("No results"));
    }

    #[test]
    fn two_methods_three_snrs_table_shape() {
        let s = summarize(&table(&["es", "hard"], &[-5.0, 10.0, 20.0]), &ReportSpec::default()).unwrap();
        let md = render_markdown(&s);
        let lines: Vec<&str> = md.lines().filter(|l| l.starts_with('|')).collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[2..].iter().all(|l| l.matches(" ± ").count() == 3));
        assert!(lines[2].starts_with("| es |") && lines[3].starts_with("| hard |"));
        assert!(lines[0].contains("-5 dB") && lines[0].contains("20 dB"));
    }

    #[test]
    fn svg_is_well_formed_with_one_bar_per_cell() {
        let s = summarize(&table(&["a<b", "hard", "es"], &[0.0, f64::INFINITY]), &ReportSpec::default()).unwrap();
        let svg = render_svg(&s);
        let doc = roxmltree::Document::parse(&svg).unwrap();
        let bars = doc
            .descendants()
            .filter(|n| n.has_tag_name("rect") && n.attribute("width") != Some("10"))
            .count();
        assert_eq!(bars, 6);
        assert_eq!(doc.descendants().filter(|n| n.has_tag_name("path")).count(), 6);
    }

    #[test]
    fn several_parameter_sets_get_indexed_labels() {
        let mut rows = table(&["hard"], &[0.0]).rows().to_vec();
        rows.extend(rows.clone().into_iter().map(|r| ResultRow { param_set_id: 1, ..r }));
        let s = summarize(&ResultsTable::new(rows), &ReportSpec::default()).unwrap();
        let md = render_markdown(&s);
        assert!(md.contains("| hard[0] |") && md.contains("| hard[1] |"));
    }

    #[test]
    fn report_file_is_written() {
        let dir = tempfile::tempdir().unwrap();
        let s = summarize(&table(&["hard"], &[0.0]), &ReportSpec::default()).unwrap();
        let path = dir.path().join("r.md");
        write_report(&s, ReportFormat::Markdown, &path).unwrap();
        assert_eq!(std::fs::read_to_string(path).unwrap(), render_markdown(&s));
    }
}
