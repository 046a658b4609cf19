use std::io::{BufRead, Write};

use num_complex::Complex64;

use super::{ComplexField, FieldError, Grid, GridFunction, RealField};

#[derive(Debug, Clone, PartialEq)]
pub enum SnapshotField {
    Real(RealField),
    Complex(ComplexField),
}

impl SnapshotField {
    pub fn grid(&self) -> &Grid {
        match self {
            SnapshotField::Real(f) => f.grid(),
            SnapshotField::Complex(f) => f.grid(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub field: SnapshotField,
}

/// Header `# L=<float> N=<int> kind=<real|complex> t=<float>`, then one row
/// per sample: `x value` or `x re im`.
pub fn write_snapshot<W: Write>(mut out: W, snapshot: &Snapshot) -> Result<(), FieldError> {
    let grid = snapshot.field.grid();
    let kind = match snapshot.field {
        SnapshotField::Real(_) => "real",
        SnapshotField::Complex(_) => "complex",
    };
    writeln!(out, "# L={} N={} kind={} t={}", grid.length(), grid.n(), kind, snapshot.t)?;
    match &snapshot.field {
        SnapshotField::Real(f) => {
            for (j, v) in f.samples().iter().enumerate() {
                writeln!(out, "{:.16e} {:.16e}", grid.x(j), v)?;
            }
        }
        SnapshotField::Complex(f) => {
            for (j, v) in f.samples().iter().enumerate() {
                writeln!(out, "{:.16e} {:.16e} {:.16e}", grid.x(j), v.re, v.im)?;
            }
        }
    }
    Ok(())
}

pub fn read_snapshot<R: BufRead>(input: R) -> Result<Snapshot, FieldError> {
    let bad = |msg: String| FieldError::Snapshot(msg);
    let mut lines = input.lines();
    let header = lines.next().ok_or_else(|| bad("empty input".into()))??;
    let body = header
        .strip_prefix('#')
        .ok_or_else(|| bad(format!("header must start with '#': {header:?}")))?;
    let (mut length, mut n, mut kind, mut t) = (None, None, None, None);
    for token in body.split_whitespace() {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| bad(format!("malformed header token {token:?}")))?;
        match key {
            "L" => length = Some(value.parse::<f64>().map_err(|e| bad(format!("L: {e}")))?),
            "N" => n = Some(value.parse::<usize>().map_err(|e| bad(format!("N: {e}")))?),
            "kind" => kind = Some(value.to_string()),
            "t" => t = Some(value.parse::<f64>().map_err(|e| bad(format!("t: {e}")))?),
            other => return Err(bad(format!("unknown header key {other:?}"))),
        }
    }
    let missing = |k: &str| bad(format!("header lacks {k}"));
    let grid = Grid::new(length.ok_or_else(|| missing("L"))?, n.ok_or_else(|| missing("N"))?)?;
    let kind = kind.ok_or_else(|| missing("kind"))?;
    let t = t.ok_or_else(|| missing("t"))?;
    let width = match kind.as_str() {
        "real" => 2,
        "complex" => 3,
        other => return Err(bad(format!("unknown kind {other:?}"))),
    };

    let mut rows = Vec::with_capacity(grid.n());
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let values: Vec<f64> = line
            .split_whitespace()
            .map(|v| v.parse::<f64>().map_err(|e| bad(format!("row {}: {e}", rows.len()))))
            .collect::<Result<_, _>>()?;
        if values.len() != width {
            return Err(bad(format!("row {} has {} columns, expected {width}", rows.len(), values.len())));
        }
        let j = rows.len();
        if j < grid.n() && (values[0] - grid.x(j)).abs() > 1e-9 * grid.length() {
            return Err(bad(format!("row {j}: x = {} does not match grid x = {}", values[0], grid.x(j))));
        }
        rows.push(values);
    }
    if rows.len() != grid.n() {
        return Err(bad(format!("expected {} rows, found {}", grid.n(), rows.len())));
    }
    let field = if width == 2 {
        SnapshotField::Real(RealField::with_values(&grid, rows.iter().map(|r| r[1]).collect()))
    } else {
        SnapshotField::Complex(ComplexField::with_values(
            &grid,
            rows.iter().map(|r| Complex64::new(r[1], r[2])).collect(),
        ))
    };
    Ok(Snapshot { t, field })
}
