//! Sampled surfaces stored as CSV. Row 0 holds the `x` nodes after an empty corner cell,
//! column 0 holds the `y` nodes, and `values[i][j] = f(xs[j], ys[i])`.

use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use sha2::{Digest, Sha256};

use crate::core::{Rect, Surface};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct GridFile {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

fn parse_err(row: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse { row, col, msg: msg.into() }
}

fn number(cell: &str, row: usize, col: usize) -> Result<f64> {
    let v: f64 = cell
        .trim()
        .parse()
        .map_err(|_| parse_err(row, col, format!("'{cell}' is not a number")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(parse_err(row, col, format!("'{cell}' is not finite")))
    }
}

fn check_axis(axis: &[f64], row: usize, col: usize, along_row: bool) -> Result<()> {
    if axis.len() < 2 {
        return Err(parse_err(row, col, "an axis needs at least two nodes"));
    }
    for k in 1..axis.len() {
        if axis[k] <= axis[k - 1] {
            let (r, c) = if along_row { (row, k + 2) } else { (k + 2, col) };
            return Err(parse_err(r, c, "axis is not strictly increasing"));
        }
    }
    Ok(())
}

impl GridFile {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>, values: Vec<Vec<f64>>) -> Result<Self> {
        let g = GridFile { xs, ys, values };
        g.validate()?;
        Ok(g)
    }

    /// Sample `f` on the tensor grid `xs x ys`.
    pub fn sample(f: &Surface, xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        let values = ys.iter().map(|&y| xs.iter().map(|&x| f.eval(x, y)).collect()).collect();
        Self::new(xs, ys, values)
    }

    fn validate(&self) -> Result<()> {
        check_axis(&self.xs, 1, 2, true)?;
        check_axis(&self.ys, 2, 1, false)?;
        if self.values.len() != self.ys.len() {
            return Err(parse_err(self.values.len() + 2, 1, "row count does not match ys"));
        }
        for (i, row) in self.values.iter().enumerate() {
            if row.len() != self.xs.len() {
                return Err(parse_err(i + 2, row.len() + 2, "row length does not match xs"));
            }
            if let Some(j) = row.iter().position(|v| !v.is_finite()) {
                return Err(parse_err(i + 2, j + 2, "value is not finite"));
            }
        }
        Ok(())
    }

    /// Parse the CSV text. Positions in errors are 1-based line and column.
    pub fn parse(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .from_reader(text.as_bytes());
        let mut records = Vec::new();
        for rec in reader.records() {
            let rec = rec.map_err(|e| {
                let line = e.position().map_or(0, |p| p.line() as usize);
                parse_err(line, 0, e.to_string())
            })?;
            let line = rec.position().map_or(records.len() + 1, |p| p.line() as usize);
            records.push((line, rec));
        }
        let Some((line0, header)) = records.first() else {
            return Err(parse_err(1, 1, "empty grid file"));
        };
        if !header.get(0).is_some_and(|c| c.trim().is_empty()) {
            return Err(parse_err(*line0, 1, "corner cell must be empty"));
        }
        let xs = header
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, c)| number(c, *line0, j + 1))
            .collect::<Result<Vec<_>>>()?;
        check_axis(&xs, *line0, 2, true)?;
        let mut ys = Vec::new();
        let mut values = Vec::new();
        for (line, rec) in &records[1..] {
            if rec.len() != header.len() {
                return Err(parse_err(
                    *line,
                    rec.len().min(header.len()) + 1,
                    format!("ragged row: {} cells, expected {}", rec.len(), header.len()),
                ));
            }
            let y = number(&rec[0], *line, 1)?;
            if let Some(&prev) = ys.last() {
                if y <= prev {
                    return Err(parse_err(*line, 1, "axis is not strictly increasing"));
                }
            }
            ys.push(y);
            let row = rec
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, c)| number(c, *line, j + 1))
                .collect::<Result<Vec<_>>>()?;
            values.push(row);
        }
        if ys.len() < 2 {
            return Err(parse_err(line0 + ys.len() + 1, 1, "an axis needs at least two nodes"));
        }
        Ok(GridFile { xs, ys, values })
    }

    /// CSV text; `Display` of `f64` round-trips, so a reload is bit-exact.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for x in &self.xs {
            let _ = write!(out, ",{x}");
        }
        out.push('\n');
        for (y, row) in self.ys.iter().zip(&self.values) {
            let _ = write!(out, "{y}");
            for v in row {
                let _ = write!(out, ",{v}");
            }
            out.push('\n');
        }
        out
    }

    pub fn hull(&self) -> Rect {
        Rect::span(self.xs[0], self.xs[self.xs.len() - 1], self.ys[0], self.ys[self.ys.len() - 1])
    }

    /// Bilinear interpolation; NaN outside the hull.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let (Some((j, tx)), Some((i, ty))) = (locate(&self.xs, x), locate(&self.ys, y)) else {
            return f64::NAN;
        };
        let v = &self.values;
        let r0 = lerp(v[i][j], v[i][j + 1], tx);
        let r1 = lerp(v[i + 1][j], v[i + 1][j + 1], tx);
        lerp(r0, r1, ty)
    }

    /// Surface named `grid:PATH@sha256:HEX` with the hull as its domain.
    pub fn into_surface(self, label: &str, digest: &str) -> Surface {
        let hull = self.hull();
        let g = Arc::new(self);
        Surface::new(format!("grid:{label}@sha256:{digest}"), move |x, y| g.eval(x, y)).with_domain(hull)
    }
}

/// Returns the endpoints untouched so node queries are bit-exact.
fn lerp(a: f64, b: f64, t: f64) -> f64 {
    if t == 0.0 {
        a
    } else if t == 1.0 {
        b
    } else {
        (1.0 - t) * a + t * b
    }
}

/// Cell index and fractional offset; the last node maps to offset 1 of the last cell.
fn locate(axis: &[f64], x: f64) -> Option<(usize, f64)> {
    let n = axis.len();
    if !(x >= axis[0] && x <= axis[n - 1]) {
        return None;
    }
    let k = axis.partition_point(|&a| a <= x).saturating_sub(1);
    if k >= n - 1 {
        return Some((n - 2, 1.0));
    }
    Some((k, (x - axis[k]) / (axis[k + 1] - axis[k])))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// Parse the file at `path` and wrap it as a surface whose name records the path and hash.
pub fn load_grid(path: impl AsRef<Path>) -> Result<Surface> {
    let path = path.as_ref();
    let bytes = std::fs::read(path)?;
    let text = std::str::from_utf8(&bytes).map_err(|e| Error::Data(format!("{}: {e}", path.display())))?;
    let grid = GridFile::parse(text)?;
    Ok(grid.into_surface(&path.display().to_string(), &sha256_hex(&bytes)))
}

pub fn write_grid(path: impl AsRef<Path>, grid: &GridFile) -> Result<()> {
    std::fs::write(path, grid.to_csv())?;
    Ok(())
}
