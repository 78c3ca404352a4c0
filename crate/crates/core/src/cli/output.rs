//! Artifact writers. Files are written to a temporary sibling and renamed
//! into place, so readers never see a partial file.

use std::io::Write;
use std::path::{Path, PathBuf};

/// Digits after the point in CSV floats: 17 significant digits, enough to
/// round-trip any double.
pub const CSV_DIGITS: usize = 16;

pub fn write_atomic(dir: &Path, name: &str, bytes: &[u8]) -> std::io::Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let target = dir.join(name);
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(&target).map_err(|e| e.error)?;
    Ok(target)
}

pub fn csv_float(v: f64) -> String {
    format!("{v:.CSV_DIGITS$e}")
}

/// Header row plus one row per sample.
pub fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> std::io::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.iter().map(|v| csv_float(*v)))?;
    }
    w.into_inner().map_err(|e| e.into_error())
}

/// Pretty JSON with a trailing newline.
pub fn json_bytes<T: serde::Serialize>(value: &T) -> std::io::Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Fixed viewbox of the profile plot.
pub const SVG_WIDTH: f64 = 1000.0;
pub const SVG_HEIGHT: f64 = 400.0;
const SVG_MARGIN: f64 = 20.0;

/// Polyline of `points` scaled into the fixed viewbox, with `marked`
/// samples drawn as dots.
pub fn svg_polyline(points: &[(f64, f64)], marked: &[usize], title: &str) -> String {
    let (mut x0, mut x1, mut z0, mut z1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, z) in points {
        x0 = x0.min(x);
        x1 = x1.max(x);
        z0 = z0.min(z);
        z1 = z1.max(z);
    }
    let span_x = (x1 - x0).max(f64::MIN_POSITIVE);
    let span_z = (z1 - z0).max(f64::MIN_POSITIVE);
    let (w, h) = (SVG_WIDTH - 2.0 * SVG_MARGIN, SVG_HEIGHT - 2.0 * SVG_MARGIN);
    let map = |(x, z): (f64, f64)| {
        (SVG_MARGIN + (x - x0) / span_x * w, SVG_MARGIN + (z1 - z) / span_z * h)
    };
    let coords: Vec<String> = points
        .iter()
        .map(|&p| {
            let (u, v) = map(p);
            format!("{u:.3},{v:.3}")
        })
        .collect();
    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {SVG_WIDTH} {SVG_HEIGHT}\">\n<title>{title}</title>\n<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" points=\"{}\"/>\n",
        coords.join(" ")
    );
    for &i in marked {
        if let Some(&p) = points.get(i) {
            let (u, v) = map(p);
            svg.push_str(&format!("<circle cx=\"{u:.3}\" cy=\"{v:.3}\" r=\"4\" fill=\"red\"/>\n"));
        }
    }
    svg.push_str("</svg>\n");
    svg
}
