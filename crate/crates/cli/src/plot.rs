//! SVG rendering of a sweep CSV.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{io_at, CliError, Result};
use crate::sweep::CSV_HEADER;

/// Rate columns drawn, with legend text and stroke color.
const SERIES: [(&str, &str, &str); 6] = [
    ("c_zs", "C_ZS  zero storage", "#7f7f7f"),
    ("r_niid", "R_NIID  naive i.i.d.", "#1f77b4"),
    ("r_oiid", "R_OIID  optimal i.i.d.", "#2ca02c"),
    ("r_a", "R_A  modulo scheme", "#d62728"),
    ("c_ub", "C_UB  upper bound", "#9467bd"),
    ("c_is", "C_IS  infinite storage", "#ff7f0e"),
];

const WIDTH: f64 = 780.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 560.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 440.0;

/// One parsed CSV row: `q` and the values in [`CSV_HEADER`] order.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotRow {
    pub q: f64,
    pub values: Vec<f64>,
}

/// Parses sweep CSV bytes. `source` only labels error messages.
pub fn parse_curve_csv(bytes: &[u8], source: &Path) -> Result<(Vec<String>, Vec<PlotRow>)> {
    let malformed = |line: u64, reason: String| CliError::MalformedCsv { path: source.to_owned(), line, reason };
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(bytes);
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| malformed(1, e.to_string()))?
        .iter()
        .map(str::to_owned)
        .collect();
    if header.join(",") != CSV_HEADER {
        return Err(malformed(1, format!("expected header `{CSV_HEADER}`")));
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            malformed(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let values = record
            .iter()
            .zip(&header)
            .map(|(field, name)| {
                field
                    .trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| malformed(line, format!("column {name}: `{field}` is not a number")))
            })
            .collect::<Result<Vec<f64>>>()?;
        if let Some(prev) = rows.last().map(|r: &PlotRow| r.q) {
            if values[0] <= prev {
                return Err(malformed(line, "q is not strictly increasing".into()));
            }
        }
        rows.push(PlotRow { q: values[0], values });
    }
    if rows.is_empty() {
        return Err(malformed(1, "no data rows".into()));
    }
    Ok((header, rows))
}

/// Renders parsed rows. Output depends only on the input values.
pub fn render_svg(header: &[String], rows: &[PlotRow]) -> String {
    let columns: Vec<(usize, &str, &str)> = SERIES
        .iter()
        .map(|(name, label, color)| (header.iter().position(|h| h == name).expect("validated header"), *label, *color))
        .collect();
    let peak = rows.iter().flat_map(|r| columns.iter().map(move |c| r.values[c.0])).fold(1.0, f64::max);
    let y_max = (peak * 10.0).ceil() / 10.0;
    let px = |q: f64| LEFT + q * (RIGHT - LEFT);
    let py = |v: f64| BOTTOM - v / y_max * (BOTTOM - TOP);

    let mut s = String::new();
    let w = &mut s;
    writeln!(w, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(w, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#).unwrap();
    for k in 0..=10 {
        let x = px(k as f64 / 10.0);
        writeln!(w, r##"<line x1="{x:.2}" y1="{TOP}" x2="{x:.2}" y2="{BOTTOM}" stroke="#e0e0e0"/>"##).unwrap();
        writeln!(w, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{:.1}</text>"#, BOTTOM + 16.0, k as f64 / 10.0).unwrap();
    }
    let y_ticks = (y_max * 10.0).round() as usize;
    for k in 0..=y_ticks {
        let v = k as f64 / 10.0;
        let y = py(v);
        writeln!(w, r##"<line x1="{LEFT}" y1="{y:.2}" x2="{RIGHT}" y2="{y:.2}" stroke="#e0e0e0"/>"##).unwrap();
        writeln!(w, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{v:.1}</text>"#, LEFT - 6.0, y + 4.0).unwrap();
    }
    writeln!(w, r#"<rect x="{LEFT}" y="{TOP}" width="{}" height="{}" fill="none" stroke="black"/>"#, RIGHT - LEFT, BOTTOM - TOP)
        .unwrap();
    writeln!(w, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">q</text>"#, (LEFT + RIGHT) / 2.0, BOTTOM + 36.0).unwrap();
    writeln!(
        w,
        r#"<text x="18" y="{0:.2}" text-anchor="middle" transform="rotate(-90 18 {0:.2})">bits/channel use</text>"#,
        (TOP + BOTTOM) / 2.0
    )
    .unwrap();
    for (col, label, color) in &columns {
        let points: Vec<String> = rows.iter().map(|r| format!("{:.2},{:.2}", px(r.q), py(r.values[*col]))).collect();
        writeln!(
            w,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.8" points="{}"><title>{label}</title></polyline>"#,
            points.join(" ")
        )
        .unwrap();
    }
    for (k, (_, label, color)) in columns.iter().enumerate() {
        let y = TOP + 12.0 + 20.0 * k as f64;
        writeln!(w, r#"<line x1="{}" y1="{y:.2}" x2="{}" y2="{y:.2}" stroke="{color}" stroke-width="2.5"/>"#, RIGHT + 15.0, RIGHT + 40.0)
            .unwrap();
        writeln!(w, r#"<text x="{}" y="{:.2}">{label}</text>"#, RIGHT + 46.0, y + 4.0).unwrap();
    }
    writeln!(w, "</svg>").unwrap();
    s
}

/// Reads `csv_path`, writes the plot to `out_path`. Nothing is written on error.
pub fn plot(csv_path: &Path, out_path: &Path) -> Result<()> {
    let bytes = std::fs::read(csv_path).map_err(io_at(csv_path))?;
    let (header, rows) = parse_curve_csv(&bytes, csv_path)?;
    std::fs::write(out_path, render_svg(&header, &rows)).map_err(io_at(out_path))
}
