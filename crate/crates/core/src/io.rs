//! File formats: points CSV, diagram CSV, PGM images and SVG diagram plots.
//!
//! Readers report malformed input as [`Error::Parse`] with a 1-based line
//! number. Floats are written in Rust's shortest round-trip form, so writing
//! and reading back is exact.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::diagram::{ExtendedReal, PersistenceDiagram, PersistencePair};
use crate::error::{Error, Result};
use crate::metrics::GrayImage;
use crate::sample::ScalarSample;

fn parse_err(source: &str, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        source_name: source.to_string(),
        line,
        message: message.into(),
    }
}

fn source_name(path: &Path) -> String {
    path.display().to_string()
}

/// Rows of a points CSV before missing values are resolved.
#[derive(Debug, Clone, PartialEq)]
pub struct PointTable {
    pub coords: Vec<Vec<f64>>,
    /// `None` where the value field was empty.
    pub values: Vec<Option<f64>>,
}

impl PointTable {
    pub fn missing_count(&self) -> usize {
        self.values.iter().filter(|v| v.is_none()).count()
    }

    /// Replaces missing values by `max + 10·(max − min)` of the present ones,
    /// so they behave as outliers for the denoisers.
    pub fn fill_missing(self) -> Result<ScalarSample> {
        let present: Vec<f64> = self.values.iter().flatten().copied().collect();
        let (lo, hi) = present
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
        let fill = if present.is_empty() { 0.0 } else { hi + 10.0 * (hi - lo) };
        let values = self.values.iter().map(|v| v.unwrap_or(fill)).collect();
        ScalarSample::from_rows(self.coords, values)
    }
}

fn split_fields(line: &str) -> Vec<&str> {
    line.split(',').map(str::trim).collect()
}

/// Parses `x1,...,xd,value` rows. A first row whose fields are not all numeric
/// (ignoring an empty value) is taken as a header.
pub fn parse_points_csv(text: &str, source: &str) -> Result<PointTable> {
    let mut coords = Vec::new();
    let mut values = Vec::new();
    let mut width = None;
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let fields = split_fields(line);
        let numeric = fields[..fields.len() - 1].iter().all(|f| f.parse::<f64>().is_ok())
            && (fields[fields.len() - 1].is_empty() || fields[fields.len() - 1].parse::<f64>().is_ok());
        if width.is_none() && coords.is_empty() && !numeric {
            if fields.len() < 2 {
                return Err(parse_err(source, lineno, "header needs at least two columns"));
            }
            width = Some(fields.len());
            continue;
        }
        if fields.len() < 2 {
            return Err(parse_err(source, lineno, "expected at least one coordinate and a value"));
        }
        match width {
            Some(w) if w != fields.len() => {
                return Err(parse_err(
                    source,
                    lineno,
                    format!("expected {w} fields, found {}", fields.len()),
                ))
            }
            _ => width = Some(fields.len()),
        }
        let mut row = Vec::with_capacity(fields.len() - 1);
        for f in &fields[..fields.len() - 1] {
            let v: f64 = f
                .parse()
                .map_err(|_| parse_err(source, lineno, format!("bad coordinate {f:?}")))?;
            if !v.is_finite() {
                return Err(parse_err(source, lineno, format!("non-finite coordinate {f:?}")));
            }
            row.push(v);
        }
        let last = fields[fields.len() - 1];
        let value = if last.is_empty() {
            None
        } else {
            let v: f64 = last
                .parse()
                .map_err(|_| parse_err(source, lineno, format!("bad value {last:?}")))?;
            if !v.is_finite() {
                return Err(parse_err(source, lineno, format!("non-finite value {last:?}")));
            }
            Some(v)
        };
        coords.push(row);
        values.push(value);
    }
    if coords.is_empty() {
        return Err(parse_err(source, 1, "no data rows"));
    }
    Ok(PointTable { coords, values })
}

pub fn read_points_csv(path: &Path) -> Result<PointTable> {
    parse_points_csv(&fs::read_to_string(path)?, &source_name(path))
}

/// Header `x1,...,xd,value`, one row per point.
pub fn format_points_csv(sample: &ScalarSample) -> String {
    let d = sample.ambient_dim().unwrap_or(0);
    let mut out = String::new();
    for i in 1..=d {
        let _ = write!(out, "x{i},");
    }
    out.push_str("value\n");
    for (p, v) in sample.points().iter().zip(sample.values()) {
        for c in p.coords() {
            let _ = write!(out, "{c},");
        }
        let _ = writeln!(out, "{v}");
    }
    out
}

pub fn write_points_csv(path: &Path, sample: &ScalarSample) -> Result<()> {
    Ok(fs::write(path, format_points_csv(sample))?)
}

/// Parses `dim,birth,death` rows after a mandatory header; `death` may be `inf`.
pub fn parse_diagram_csv(text: &str, source: &str) -> Result<PersistenceDiagram> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, h)) if split_fields(h.trim()) == ["dim", "birth", "death"] => {}
        Some((i, _)) => return Err(parse_err(source, i + 1, "expected header dim,birth,death")),
        None => return Err(parse_err(source, 1, "missing header dim,birth,death")),
    }
    let mut pairs = Vec::new();
    for (i, raw) in lines {
        let lineno = i + 1;
        let fields = split_fields(raw.trim());
        if fields.len() != 3 {
            return Err(parse_err(source, lineno, format!("expected 3 fields, found {}", fields.len())));
        }
        let dim: usize = fields[0]
            .parse()
            .map_err(|_| parse_err(source, lineno, format!("bad dimension {:?}", fields[0])))?;
        let birth: f64 = fields[1]
            .parse()
            .map_err(|_| parse_err(source, lineno, format!("bad birth {:?}", fields[1])))?;
        let death: ExtendedReal = fields[2]
            .parse()
            .map_err(|_| parse_err(source, lineno, format!("bad death {:?}", fields[2])))?;
        let pair = PersistencePair::new(dim, birth, death).map_err(|e| parse_err(source, lineno, e.to_string()))?;
        pairs.push(pair);
    }
    Ok(PersistenceDiagram::new(pairs))
}

pub fn read_diagram_csv(path: &Path) -> Result<PersistenceDiagram> {
    parse_diagram_csv(&fs::read_to_string(path)?, &source_name(path))
}

pub fn format_diagram_csv(diagram: &PersistenceDiagram) -> String {
    let mut out = String::from("dim,birth,death\n");
    for p in diagram.pairs() {
        let _ = writeln!(out, "{},{},{}", p.dim, p.birth, p.death);
    }
    out
}

pub fn write_diagram_csv(path: &Path, diagram: &PersistenceDiagram) -> Result<()> {
    Ok(fs::write(path, format_diagram_csv(diagram))?)
}

/// Whitespace-separated header tokens of a PGM, skipping `#` comments.
struct PgmHeader<'a> {
    bytes: &'a [u8],
    pos: usize,
    line: usize,
    source: &'a str,
}

impl<'a> PgmHeader<'a> {
    fn skip_space(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                b'\n' => {
                    self.line += 1;
                    self.pos += 1;
                }
                c if c.is_ascii_whitespace() => self.pos += 1,
                _ => return,
            }
        }
    }

    fn token(&mut self) -> Result<(&'a str, usize)> {
        self.skip_space();
        let start = self.pos;
        while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() && self.bytes[self.pos] != b'#' {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(parse_err(self.source, self.line, "unexpected end of file"));
        }
        let tok = std::str::from_utf8(&self.bytes[start..self.pos])
            .map_err(|_| parse_err(self.source, self.line, "non-ASCII token"))?;
        Ok((tok, self.line))
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        let (tok, line) = self.token()?;
        tok.parse()
            .map_err(|_| parse_err(self.source, line, format!("bad {what} {tok:?}")))
    }
}

/// Decodes a P2 or P5 PGM with maxval 255.
pub fn parse_pgm(bytes: &[u8], source: &str) -> Result<GrayImage> {
    let mut h = PgmHeader {
        bytes,
        pos: 0,
        line: 1,
        source,
    };
    let (magic, line) = h.token()?;
    let binary = match magic {
        "P2" => false,
        "P5" => true,
        other => return Err(parse_err(source, line, format!("unsupported magic {other:?}, expected P2 or P5"))),
    };
    let width = h.number("width")?;
    let height = h.number("height")?;
    let maxval = h.number("maxval")?;
    if maxval != 255 {
        return Err(parse_err(source, h.line, format!("maxval must be 255, got {maxval}")));
    }
    let n = width
        .checked_mul(height)
        .ok_or_else(|| parse_err(source, h.line, "image too large"))?;
    let pixels = if binary {
        // Exactly one whitespace byte separates the header from the raster.
        let start = h.pos + 1;
        if h.pos >= bytes.len() || !bytes[h.pos].is_ascii_whitespace() {
            return Err(parse_err(source, h.line, "missing separator before raster"));
        }
        if bytes.len() < start + n {
            return Err(parse_err(
                source,
                h.line,
                format!("raster has {} bytes, expected {n}", bytes.len().saturating_sub(start)),
            ));
        }
        bytes[start..start + n].to_vec()
    } else {
        let mut px = Vec::with_capacity(n);
        for _ in 0..n {
            let (tok, line) = h.token()?;
            let v: u16 = tok
                .parse()
                .map_err(|_| parse_err(source, line, format!("bad pixel {tok:?}")))?;
            if v > 255 {
                return Err(parse_err(source, line, format!("pixel {v} exceeds maxval 255")));
            }
            px.push(v as u8);
        }
        px
    };
    GrayImage::new(width, height, pixels)
}

pub fn read_pgm(path: &Path) -> Result<GrayImage> {
    parse_pgm(&fs::read(path)?, &source_name(path))
}

/// Encodes as P5, or P2 when `ascii` is set.
pub fn encode_pgm(img: &GrayImage, ascii: bool) -> Vec<u8> {
    let header = format!("{}\n{} {}\n255\n", if ascii { "P2" } else { "P5" }, img.width(), img.height());
    let mut out = header.into_bytes();
    if ascii {
        for row in img.pixels().chunks(img.width().max(1)) {
            let line: Vec<String> = row.iter().map(u8::to_string).collect();
            out.extend_from_slice(line.join(" ").as_bytes());
            out.push(b'\n');
        }
    } else {
        out.extend_from_slice(img.pixels());
    }
    out
}

pub fn write_pgm(path: &Path, img: &GrayImage, ascii: bool) -> Result<()> {
    Ok(fs::write(path, encode_pgm(img, ascii))?)
}

const SVG_SIZE: f64 = 600.0;
const SVG_MARGIN: f64 = 50.0;
const SVG_STRIP: f64 = 30.0;
const SVG_COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

/// Birth/death scatter on a 600×600 canvas with the diagonal drawn. Essential
/// points sit on a strip along the top edge.
pub fn diagram_svg(diagram: &PersistenceDiagram) -> String {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for p in diagram.pairs() {
        lo = lo.min(p.birth);
        hi = hi.max(p.birth);
        if let ExtendedReal::Finite(d) = p.death {
            hi = hi.max(d);
        }
    }
    if !lo.is_finite() {
        (lo, hi) = (0.0, 1.0);
    }
    if hi - lo <= 0.0 {
        (lo, hi) = (lo - 0.5, hi + 0.5);
    }
    let pad = 0.05 * (hi - lo);
    let (lo, hi) = (lo - pad, hi + pad);
    let plot_top = SVG_MARGIN + SVG_STRIP;
    let plot = SVG_SIZE - SVG_MARGIN - plot_top;
    let sx = |v: f64| SVG_MARGIN + (v - lo) / (hi - lo) * plot;
    let sy = |v: f64| SVG_SIZE - SVG_MARGIN - (v - lo) / (hi - lo) * plot;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="600" height="600" viewBox="0 0 600 600">"#
    );
    let _ = writeln!(out, r#"<rect width="600" height="600" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<rect x="{m}" y="{t}" width="{p}" height="{p}" fill="none" stroke="black"/>"#,
        m = SVG_MARGIN,
        t = plot_top,
        p = plot
    );
    let _ = writeln!(
        out,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="gray" stroke-dasharray="4 3"/>"#,
        sx(lo),
        sy(lo),
        sx(hi),
        sy(hi)
    );
    let _ = writeln!(
        out,
        r#"<line x1="{m}" y1="{y:.2}" x2="{r}" y2="{y:.2}" stroke="lightgray"/>"#,
        m = SVG_MARGIN,
        y = SVG_MARGIN + SVG_STRIP / 2.0,
        r = SVG_SIZE - SVG_MARGIN
    );
    let _ = writeln!(
        out,
        r#"<text x="{x}" y="{y:.2}" font-size="11" font-family="sans-serif">inf</text>"#,
        x = SVG_MARGIN - 25.0,
        y = SVG_MARGIN + SVG_STRIP / 2.0 + 4.0
    );
    for (label, x, y, anchor) in [
        (format!("{lo:.3}"), sx(lo), SVG_SIZE - SVG_MARGIN + 15.0, "start"),
        (format!("{hi:.3}"), sx(hi), SVG_SIZE - SVG_MARGIN + 15.0, "end"),
        ("birth".to_string(), SVG_SIZE / 2.0, SVG_SIZE - 12.0, "middle"),
    ] {
        let _ = writeln!(
            out,
            r#"<text x="{x:.2}" y="{y:.2}" font-size="11" font-family="sans-serif" text-anchor="{anchor}">{label}</text>"#
        );
    }
    for p in diagram.pairs() {
        let color = SVG_COLORS[p.dim % SVG_COLORS.len()];
        let y = match p.death {
            ExtendedReal::Finite(d) => sy(d),
            ExtendedReal::Infinite => SVG_MARGIN + SVG_STRIP / 2.0,
        };
        let _ = writeln!(
            out,
            r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="{color}" fill-opacity="0.8"><title>H{} ({}, {})</title></circle>"#,
            sx(p.birth),
            y,
            p.dim,
            p.birth,
            p.death
        );
    }
    let dims = diagram.max_dim().map_or(0, |d| d + 1);
    for d in 0..dims {
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="12" font-family="sans-serif" fill="{}">H{d}</text>"#,
            SVG_SIZE - SVG_MARGIN - 30.0,
            plot_top + 20.0 + 16.0 * d as f64,
            SVG_COLORS[d % SVG_COLORS.len()]
        );
    }
    out.push_str("</svg>\n");
    out
}

pub fn write_diagram_svg(path: &Path, diagram: &PersistenceDiagram) -> Result<()> {
    Ok(fs::write(path, diagram_svg(diagram))?)
}
