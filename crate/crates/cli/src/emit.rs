//! Writers for the JSON record, the per-bitstring CSV and the SVG chart.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::Format;
use crate::error::CliError;
use crate::record::ExperimentRecord;

pub fn to_json(record: &ExperimentRecord) -> String {
    let mut s = serde_json::to_string_pretty(record).expect("record serializes");
    s.push('\n');
    s
}

pub fn to_csv(record: &ExperimentRecord) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["bitstring", "theoretical_p", "sampled_count", "sampled_freq"])
        .expect("in-memory write");
    for (bits, p, count) in record.rows() {
        let freq = if record.shots == 0 || record.sampled.is_empty() {
            0.0
        } else {
            count as f64 / record.shots as f64
        };
        w.write_record([bits, p.to_string(), count.to_string(), freq.to_string()])
            .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

/// Data embedded in the SVG `<metadata>` element, enough to rebuild the bars.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChartData {
    pub kind: String,
    pub shots: u64,
    pub bitstrings: Vec<String>,
    pub theoretical: Vec<f64>,
    pub sampled_counts: Vec<u64>,
}

impl ChartData {
    pub fn from_record(record: &ExperimentRecord) -> Self {
        let rows = record.rows();
        ChartData {
            kind: record.config.kind.to_string(),
            shots: if record.sampled.is_empty() { 0 } else { record.shots },
            bitstrings: rows.iter().map(|r| r.0.clone()).collect(),
            theoretical: rows.iter().map(|r| r.1).collect(),
            sampled_counts: rows.iter().map(|r| r.2).collect(),
        }
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn xml_unescape(s: &str) -> String {
    s.replace("&lt;", "<").replace("&gt;", ">").replace("&amp;", "&")
}

const BAR_WIDTH: f64 = 14.0;
const GROUP_GAP: f64 = 12.0;
const PLOT_HEIGHT: f64 = 240.0;
const MARGIN_LEFT: f64 = 56.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 90.0;

/// Paired bars per bitstring in basis order: theoretical probability
/// (hatched) next to sampled frequency (solid). Without samples only the
/// theoretical bars are drawn.
pub fn to_svg(record: &ExperimentRecord) -> String {
    let data = ChartData::from_record(record);
    let with_samples = data.shots > 0;
    let groups = data.bitstrings.len().max(1);
    let group_width = BAR_WIDTH * if with_samples { 2.0 } else { 1.0 } + GROUP_GAP;
    let width = MARGIN_LEFT + groups as f64 * group_width + 24.0;
    let height = MARGIN_TOP + PLOT_HEIGHT + MARGIN_BOTTOM;
    let base_y = MARGIN_TOP + PLOT_HEIGHT;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(
        s,
        r#"<metadata id="spinorq-data">{}</metadata>"#,
        xml_escape(&serde_json::to_string(&data).expect("chart data serializes"))
    );
    s.push_str(concat!(
        r##"<defs><pattern id="hatch" width="6" height="6" patternUnits="userSpaceOnUse" patternTransform="rotate(45)">"##,
        r##"<rect width="6" height="6" fill="#ffffff"/><line x1="0" y1="0" x2="0" y2="6" stroke="#1f5fa8" stroke-width="3"/>"##,
        "</pattern></defs>\n"
    ));
    let _ = writeln!(
        s,
        r#"<text x="{MARGIN_LEFT}" y="20" font-size="13">{} (n = {}, shots = {})</text>"#,
        xml_escape(&data.kind),
        record.config.n_qubits,
        data.shots
    );
    for tick in 0..=4 {
        let v = tick as f64 / 4.0;
        let y = base_y - v * PLOT_HEIGHT;
        let _ = writeln!(
            s,
            r##"<line x1="{MARGIN_LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#dddddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">{v:.2}</text>"##,
            width - 16.0,
            MARGIN_LEFT - 6.0,
            y + 4.0
        );
    }
    for (g, bits) in data.bitstrings.iter().enumerate() {
        let x0 = MARGIN_LEFT + GROUP_GAP / 2.0 + g as f64 * group_width;
        let p = data.theoretical[g].clamp(0.0, 1.0);
        let h = p * PLOT_HEIGHT;
        let _ = writeln!(
            s,
            r##"<rect class="bar theoretical" data-bitstring="{bits}" x="{x0:.2}" y="{:.2}" width="{BAR_WIDTH}" height="{h:.2}" fill="url(#hatch)" stroke="#1f5fa8"/>"##,
            base_y - h
        );
        if with_samples {
            let f = data.sampled_counts[g] as f64 / data.shots as f64;
            let h = f * PLOT_HEIGHT;
            let _ = writeln!(
                s,
                r##"<rect class="bar sampled" data-bitstring="{bits}" x="{:.2}" y="{:.2}" width="{BAR_WIDTH}" height="{h:.2}" fill="#d9822b"/>"##,
                x0 + BAR_WIDTH,
                base_y - h
            );
        }
        let lx = x0 + if with_samples { BAR_WIDTH } else { BAR_WIDTH / 2.0 };
        let _ = writeln!(
            s,
            r#"<text x="{lx:.2}" y="{:.2}" transform="rotate(-60 {lx:.2} {:.2})" text-anchor="end" font-family="monospace">{bits}</text>"#,
            base_y + 14.0,
            base_y + 14.0
        );
    }
    let _ = writeln!(
        s,
        r##"<line x1="{MARGIN_LEFT}" y1="{base_y}" x2="{:.2}" y2="{base_y}" stroke="#000000"/>"##,
        width - 16.0
    );
    let ly = height - 14.0;
    let _ = writeln!(
        s,
        r##"<rect x="{MARGIN_LEFT}" y="{:.2}" width="12" height="10" fill="url(#hatch)" stroke="#1f5fa8"/><text x="{:.2}" y="{ly:.2}">theoretical</text>"##,
        ly - 9.0,
        MARGIN_LEFT + 16.0
    );
    if with_samples {
        let _ = writeln!(
            s,
            r##"<rect x="{:.2}" y="{:.2}" width="12" height="10" fill="#d9822b"/><text x="{:.2}" y="{ly:.2}">sampled</text>"##,
            MARGIN_LEFT + 100.0,
            ly - 9.0,
            MARGIN_LEFT + 116.0
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Reads the chart data back out of an SVG produced by [`to_svg`].
pub fn parse_svg_metadata(svg: &str) -> Option<ChartData> {
    let open = r#"<metadata id="spinorq-data">"#;
    let start = svg.find(open)? + open.len();
    let end = start + svg[start..].find("</metadata>")?;
    serde_json::from_str(&xml_unescape(&svg[start..end])).ok()
}

/// Writes every requested format as `<dir>/<stem>.<ext>`.
pub fn write_outputs(
    record: &ExperimentRecord,
    dir: &Path,
    stem: &str,
    formats: &[Format],
) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut written = Vec::with_capacity(formats.len());
    for &f in formats {
        let path = dir.join(format!("{stem}.{}", f.extension()));
        let body = match f {
            Format::Json => to_json(record),
            Format::Csv => to_csv(record),
            Format::Svg => to_svg(record),
        };
        fs::write(&path, body).map_err(|e| CliError::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}
