//! Text formats: grid CSV, converter and profile CSVs, key-value configs,
//! and the plot-ready curve CSV.
//!
//! Every parser takes untrusted text and reports failures as
//! [`Error::Parse`] with a 1-based line number.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Deserialize;

use crate::amdahl::{BenchmarkProfile, ProfileRow};
use crate::complexity::{CurvePoint, TabulatedCurve};
use crate::error::{Error, Result};
use crate::field::ComplexGrid;
use crate::pareto::ConverterRecord;
use crate::ratio::Ratio;

pub const CONVERTER_HEADER: [&str; 6] = ["id", "kind", "power_w", "sample_rate_hz", "resolution_bits", "year"];
pub const PROFILE_HEADER: [&str; 4] = ["benchmark", "function", "cumulative_s", "total_s"];
pub const REDUCED_HEADER: [&str; 3] = ["benchmark", "accel_time_s", "total_time_s"];
pub const TABULATED_HEADER: [&str; 2] = ["N", "ops"];

fn parse_err(line: u64, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn lift(line: u64, e: Error) -> Error {
    match e {
        Error::InvalidInput(m) => parse_err(line, m),
        other => other,
    }
}

// ---------------------------------------------------------------- grids

fn parse_cell(cell: &str, line: u64) -> Result<Complex64> {
    let cell = cell.trim();
    let num = |s: &str| -> Result<f64> {
        let v: f64 = s.trim().parse().map_err(|_| parse_err(line, format!("bad number {s:?}")))?;
        if !v.is_finite() {
            return Err(parse_err(line, format!("non-finite value {s:?}")));
        }
        Ok(v)
    };
    match cell.split_once(':') {
        Some((re, im)) => Ok(Complex64::new(num(re)?, num(im)?)),
        None => Ok(Complex64::new(num(cell)?, 0.0)),
    }
}

/// One grid row per line, comma-separated cells encoded `re:im` (a bare
/// number is a real value). Blank lines are skipped.
pub fn parse_grid_csv(text: &str) -> Result<ComplexGrid> {
    let mut cols = None;
    let mut data = Vec::new();
    let mut rows = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx as u64 + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let row: Vec<Complex64> = raw.split(',').map(|c| parse_cell(c, line)).collect::<Result<_>>()?;
        match cols {
            None => cols = Some(row.len()),
            Some(n) if n != row.len() => {
                return Err(parse_err(line, format!("expected {n} cells, found {}", row.len())))
            }
            Some(_) => {}
        }
        data.extend(row);
        rows += 1;
    }
    let cols = cols.ok_or_else(|| parse_err(1, "empty grid"))?;
    ComplexGrid::new(rows, cols, data).map_err(|e| lift(1, e))
}

/// Writes a grid as `re:im` cells using shortest round-trip formatting.
pub fn write_grid_csv(grid: &ComplexGrid) -> String {
    let mut out = String::new();
    for r in 0..grid.rows() {
        for c in 0..grid.cols() {
            if c > 0 {
                out.push(',');
            }
            let z = grid[(r, c)];
            let _ = write!(out, "{:?}:{:?}", z.re, z.im);
        }
        out.push('\n');
    }
    out
}

// ---------------------------------------------------------------- CSV tables

fn reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(text.as_bytes())
}

fn csv_err(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    let message = match e.kind() {
        csv::ErrorKind::Deserialize { err, .. } => err.to_string(),
        _ => e.to_string(),
    };
    parse_err(line, message)
}

fn check_header(rdr: &mut csv::Reader<&[u8]>, want: &[&str]) -> Result<()> {
    let got = rdr.headers().map_err(csv_err)?;
    if got.iter().ne(want.iter().copied()) {
        return Err(parse_err(
            1,
            format!("header must be `{}`, found `{}`", want.join(","), got.iter().collect::<Vec<_>>().join(",")),
        ));
    }
    Ok(())
}

fn record_line(rec: &csv::StringRecord) -> u64 {
    rec.position().map_or(0, |p| p.line())
}

#[derive(Deserialize)]
struct RawConverter {
    id: String,
    kind: String,
    power_w: f64,
    sample_rate_hz: f64,
    resolution_bits: u32,
    year: i32,
}

/// Converter survey CSV with header `id,kind,power_w,sample_rate_hz,resolution_bits,year`.
pub fn parse_converter_csv(text: &str) -> Result<Vec<ConverterRecord>> {
    let mut rdr = reader(text);
    check_header(&mut rdr, &CONVERTER_HEADER)?;
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        let line = record_line(&rec);
        let raw: RawConverter = rec.deserialize(None).map_err(|e| parse_err(line, e.to_string()))?;
        let kind = raw.kind.parse().map_err(|e| lift(line, e))?;
        out.push(
            ConverterRecord::new(raw.id, kind, raw.power_w, raw.sample_rate_hz, raw.resolution_bits, raw.year)
                .map_err(|e| lift(line, e))?,
        );
    }
    if out.is_empty() {
        return Err(parse_err(1, "no converter records"));
    }
    Ok(out)
}

#[derive(Deserialize)]
struct RawProfileRow {
    benchmark: String,
    function: String,
    cumulative_s: f64,
    total_s: f64,
}

#[derive(Deserialize)]
struct RawReduced {
    benchmark: String,
    accel_time_s: f64,
    total_time_s: f64,
}

/// Profile CSV in either form, chosen by header:
/// `benchmark,function,cumulative_s,total_s` (full; rows grouped by
/// benchmark in order of first appearance) or
/// `benchmark,accel_time_s,total_time_s` (reduced).
pub fn parse_profiles(text: &str) -> Result<Vec<BenchmarkProfile>> {
    let mut rdr = reader(text);
    let header: Vec<String> = rdr.headers().map_err(csv_err)?.iter().map(str::to_owned).collect();
    let profiles = if header.iter().map(String::as_str).eq(PROFILE_HEADER) {
        parse_full(rdr)?
    } else if header.iter().map(String::as_str).eq(REDUCED_HEADER) {
        parse_reduced(rdr)?
    } else {
        return Err(parse_err(
            1,
            format!(
                "header must be `{}` or `{}`, found `{}`",
                PROFILE_HEADER.join(","),
                REDUCED_HEADER.join(","),
                header.join(",")
            ),
        ));
    };
    if profiles.is_empty() {
        return Err(parse_err(1, "no profile rows"));
    }
    Ok(profiles)
}

fn parse_reduced(mut rdr: csv::Reader<&[u8]>) -> Result<Vec<BenchmarkProfile>> {
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        let line = record_line(&rec);
        let raw: RawReduced = rec.deserialize(None).map_err(|e| parse_err(line, e.to_string()))?;
        out.push(
            BenchmarkProfile::reduced(raw.benchmark, raw.accel_time_s, raw.total_time_s).map_err(|e| lift(line, e))?,
        );
    }
    Ok(out)
}

fn parse_full(mut rdr: csv::Reader<&[u8]>) -> Result<Vec<BenchmarkProfile>> {
    // name -> (first line, total, rows); order tracked separately.
    let mut order: Vec<String> = Vec::new();
    let mut groups: BTreeMap<String, (u64, f64, Vec<ProfileRow>)> = BTreeMap::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        let line = record_line(&rec);
        let raw: RawProfileRow = rec.deserialize(None).map_err(|e| parse_err(line, e.to_string()))?;
        let row = ProfileRow { function: raw.function, cumulative_s: raw.cumulative_s };
        match groups.get_mut(&raw.benchmark) {
            Some((_, total, rows)) => {
                if *total != raw.total_s {
                    return Err(parse_err(
                        line,
                        format!("total_s {} disagrees with earlier {} for {:?}", raw.total_s, total, raw.benchmark),
                    ));
                }
                rows.push(row);
            }
            None => {
                order.push(raw.benchmark.clone());
                groups.insert(raw.benchmark, (line, raw.total_s, vec![row]));
            }
        }
    }
    order
        .into_iter()
        .map(|name| {
            let (line, total, rows) = groups.remove(&name).expect("grouped above");
            BenchmarkProfile::full(name, total, rows).map_err(|e| lift(line, e))
        })
        .collect()
}

/// User-supplied complexity curve, header `N,ops`.
pub fn parse_tabulated_csv(label: &str, text: &str) -> Result<TabulatedCurve> {
    #[derive(Deserialize)]
    struct Raw {
        #[serde(rename = "N")]
        n: u64,
        ops: f64,
    }
    let mut rdr = reader(text);
    check_header(&mut rdr, &TABULATED_HEADER)?;
    let mut points = Vec::new();
    let mut last_line = 1;
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        last_line = record_line(&rec);
        let raw: Raw = rec.deserialize(None).map_err(|e| parse_err(last_line, e.to_string()))?;
        points.push((raw.n, raw.ops));
    }
    TabulatedCurve::new(label, points).map_err(|e| lift(last_line, e))
}

fn format_speedup(p: &CurvePoint) -> String {
    match (p.speedup, p.log10_speedup) {
        (Ratio::Unbounded, _) => "unbounded".into(),
        (Ratio::Finite(v), _) if v.is_finite() => format!("{v:e}"),
        (Ratio::Finite(_), Some(l)) => {
            let exp = l.floor();
            format!("{}e{}", 10f64.powf(l - exp), exp as i64)
        }
        (Ratio::Finite(v), None) => format!("{v:e}"),
    }
}

/// `N,speedup` plot CSV. Values beyond the `f64` range are written from
/// their logarithm so they stay finite and ordered.
pub fn write_curve_csv(points: &[CurvePoint]) -> String {
    let mut out = String::from("N,speedup\n");
    for p in points {
        let _ = writeln!(out, "{},{}", p.n, format_speedup(p));
    }
    out
}

// ---------------------------------------------------------------- key-value

/// `key = value` lines; `#` starts a comment. Keys are lowercase
/// identifiers and may appear once.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct KeyValues {
    entries: BTreeMap<String, (u64, String)>,
}

impl KeyValues {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx as u64 + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| parse_err(line, format!("expected `key = value`, found {content:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() || !key.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_') {
                return Err(parse_err(line, format!("invalid key {key:?}")));
            }
            if value.is_empty() {
                return Err(parse_err(line, format!("missing value for {key}")));
            }
            if entries.insert(key.to_owned(), (line, value.to_owned())).is_some() {
                return Err(parse_err(line, format!("duplicate key {key}")));
            }
        }
        Ok(Self { entries })
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(_, v)| v.as_str())
    }

    pub fn get_f64(&self, key: &str) -> Result<Option<f64>> {
        match self.entries.get(key) {
            None => Ok(None),
            Some((line, v)) => {
                let x: f64 = v.parse().map_err(|_| parse_err(*line, format!("{key}: bad number {v:?}")))?;
                if !x.is_finite() {
                    return Err(parse_err(*line, format!("{key}: non-finite value")));
                }
                Ok(Some(x))
            }
        }
    }

    pub fn get_u64(&self, key: &str) -> Result<Option<u64>> {
        match self.entries.get(key) {
            None => Ok(None),
            Some((line, v)) => v
                .parse()
                .map(Some)
                .map_err(|_| parse_err(*line, format!("{key}: expected a non-negative integer, got {v:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pareto::ConverterKind;

    #[test]
    fn grid_cells() {
        let g = parse_grid_csv("1:2, 3\n-0.5:1e-3,0:0\n\n").unwrap();
        assert_eq!(g.dims(), (2, 2));
        assert_eq!(g[(0, 0)], Complex64::new(1.0, 2.0));
        assert_eq!(g[(0, 1)], Complex64::new(3.0, 0.0));
        assert_eq!(g[(1, 0)], Complex64::new(-0.5, 1e-3));
    }

    #[test]
    fn grid_errors_name_lines() {
        assert_eq!(parse_grid_csv("1,2\n3\n"), Err(parse_err(2, "expected 2 cells, found 1")));
        assert!(matches!(parse_grid_csv("1,x\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_grid_csv("1,inf\n"), Err(Error::Parse { line: 1, .. })));
        assert!(parse_grid_csv("").is_err());
    }

    #[test]
    fn grid_round_trip() {
        let g = ComplexGrid::new(1, 2, vec![Complex64::new(0.1, -1.0 / 3.0), Complex64::new(1e-300, 7.0)]).unwrap();
        assert_eq!(parse_grid_csv(&write_grid_csv(&g)).unwrap(), g);
    }

    #[test]
    fn converters() {
        let text =
            "id,kind,power_w,sample_rate_hz,resolution_bits,year\nk1,DAC,0.01,1e9,8,2019\nl1,ADC,0.02,5e8,10,2020\n";
        let rs = parse_converter_csv(text).unwrap();
        assert_eq!(rs.len(), 2);
        assert_eq!(rs[0].kind, ConverterKind::Dac);
        assert_eq!(rs[1].resolution_bits, 10);
    }

    #[test]
    fn converter_errors() {
        let h = "id,kind,power_w,sample_rate_hz,resolution_bits,year\n";
        assert!(matches!(parse_converter_csv(h), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_converter_csv(&format!("{h}a,DAC,1,1,8,2000\nb,dac,1,1,8,2000\n")),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(parse_converter_csv(&format!("{h}a,DAC,-1,1,8,2000\n")), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_converter_csv(&format!("{h}a,DAC,x,1,8,2000\n")), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_converter_csv("id,kind\na,DAC\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn full_profiles_group_in_order() {
        let text = "benchmark,function,cumulative_s,total_s\nb,fft2,1,4\na,conv,1,2\nb,load,2,4\n";
        let ps = parse_profiles(text).unwrap();
        assert_eq!(ps.iter().map(|p| p.name.as_str()).collect::<Vec<_>>(), ["b", "a"]);
        assert!(matches!(
            parse_profiles("benchmark,function,cumulative_s,total_s\nb,f,1,4\nb,g,1,5\n"),
            Err(Error::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn reduced_profiles() {
        let ps = parse_profiles("benchmark,accel_time_s,total_time_s\nConvolution,0.158,0.159\n").unwrap();
        assert_eq!(ps.len(), 1);
        assert!(matches!(
            parse_profiles("benchmark,accel_time_s,total_time_s\nx,2,1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(parse_profiles("benchmark,accel_time_s,total_time_s\n").is_err());
        assert!(parse_profiles("").is_err());
        assert!(parse_profiles("a,b\n1,2\n").is_err());
    }

    #[test]
    fn key_values() {
        let kv = KeyValues::parse("# c\na_s = 1.5 # trailing\n\nn = 3\n").unwrap();
        assert_eq!(kv.get_f64("a_s").unwrap(), Some(1.5));
        assert_eq!(kv.get_u64("n").unwrap(), Some(3));
        assert_eq!(kv.get_f64("missing").unwrap(), None);
        assert!(KeyValues::parse("a = 1\na = 2\n").is_err());
        assert!(KeyValues::parse("just text\n").is_err());
        assert!(KeyValues::parse("Bad = 1\n").is_err());
        assert!(KeyValues::parse("a =\n").is_err());
        let kv = KeyValues::parse("x = -3\n").unwrap();
        assert!(matches!(kv.get_u64("x"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn tabulated() {
        let t = parse_tabulated_csv("t", "N,ops\n1,1\n10,100\n").unwrap();
        assert_eq!(t.points(), &[(1, 1.0), (10, 100.0)]);
        assert!(parse_tabulated_csv("t", "N,ops\n10,1\n1,100\n").is_err());
    }

    #[test]
    fn huge_curve_values_stay_finite() {
        let p = CurvePoint { n: 5000, speedup: Ratio::Finite(f64::INFINITY), log10_speedup: Some(1501.25) };
        let s = format_speedup(&p);
        assert!(s.ends_with("e1501"), "{s}");
    }
}
