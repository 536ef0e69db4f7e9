//! Plain-text level files: one decimal real per line, `#` comments.
//!
//! Tables of Riemann zeros sit near 10²¹ with spacings near 0.1, which is
//! beyond what an f64 can resolve. Each line is therefore split into an
//! exact integer part and a fractional part, and the smallest value is
//! subtracted before anything is rounded to f64.

use std::cmp::Ordering;
use std::path::Path;

use super::Spectrum;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
struct Reading {
    whole: i128,
    frac: f64,
    /// The whole line parsed as one f64.
    direct: f64,
    line: usize,
}

impl Reading {
    fn cmp_value(&self, other: &Self) -> Ordering {
        self.whole.cmp(&other.whole).then(self.frac.total_cmp(&other.frac))
    }

    fn minus(&self, origin: &Self) -> f64 {
        if origin.whole == 0 && origin.frac == 0.0 {
            // Already anchored at zero: keep the correctly rounded value so
            // written files read back bit for bit.
            return self.direct;
        }
        (self.whole - origin.whole) as f64 + (self.frac - origin.frac)
    }
}

fn parse_reading(text: &str, line: usize) -> Option<Reading> {
    let plain = text.bytes().all(|b| b.is_ascii_digit() || b == b'.' || b == b'-' || b == b'+');
    if plain {
        let negative = text.starts_with('-');
        let (int_text, frac_text) = match text.split_once('.') {
            Some((i, f)) => (i, f),
            None => (text, ""),
        };
        let digits = int_text.trim_start_matches(['+', '-']);
        if digits.is_empty() && frac_text.is_empty() {
            return None;
        }
        if !frac_text.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let mut whole: i128 = if digits.is_empty() { 0 } else { digits.parse().ok()? };
        let mut frac: f64 =
            if frac_text.is_empty() { 0.0 } else { format!("0.{frac_text}").parse().ok()? };
        if negative {
            whole = -whole;
            frac = -frac;
        }
        let direct: f64 = text.parse().ok()?;
        return Some(Reading { whole, frac, direct, line });
    }
    let v: f64 = text.parse().ok()?;
    if !v.is_finite() || v.abs() >= 1e36 {
        return None;
    }
    let whole = v.trunc();
    Some(Reading { whole: whole as i128, frac: v - whole, direct: v, line })
}

/// Parses level-file text. Values are sorted, duplicates rejected, and the
/// smallest value is subtracted so the spectrum starts at 0.
pub fn parse_levels(text: &str, label: &str) -> Result<Spectrum> {
    let mut readings = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let reading = parse_reading(line, i + 1)
            .ok_or_else(|| Error::Parse { path: label.into(), line: i + 1, text: line.into() })?;
        readings.push(reading);
    }
    if readings.is_empty() {
        return Err(Error::EmptyInput(format!("{label}: no levels")));
    }
    readings.sort_by(Reading::cmp_value);
    for w in readings.windows(2) {
        if w[0].cmp_value(&w[1]) == Ordering::Equal {
            let (first, second) = (w[0].line.min(w[1].line), w[0].line.max(w[1].line));
            let value = text.lines().nth(first - 1).unwrap_or_default().trim().to_string();
            return Err(Error::DuplicateLevel { value, first_line: first, second_line: second });
        }
    }
    let origin = readings[0];
    let levels: Vec<f64> = readings.iter().map(|r| r.minus(&origin)).collect();
    if let Some(w) = levels.windows(2).position(|w| w[0] >= w[1]) {
        return Err(Error::DuplicateLevel {
            value: format!("{} (after offset removal)", levels[w + 1]),
            first_line: readings[w].line,
            second_line: readings[w + 1].line,
        });
    }
    Spectrum::new(levels, label)
}

/// Reads a level file; the spectrum label is the file name.
pub fn ingest_levels(path: &Path) -> Result<Spectrum> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    let label = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    parse_levels(&text, &label)
}

/// Level-file text, one shortest round-trip decimal per line.
pub fn format_levels(spectrum: &Spectrum) -> String {
    let mut out = format!("# {} ({} levels)\n", spectrum.label(), spectrum.len());
    for x in spectrum.levels() {
        out.push_str(&format!("{x}\n"));
    }
    out
}

pub fn write_levels(spectrum: &Spectrum, path: &Path) -> Result<()> {
    std::fs::write(path, format_levels(spectrum))
        .map_err(|source| Error::Io { path: path.to_path_buf(), source })
}
