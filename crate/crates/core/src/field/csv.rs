//! Plain-text grid format shared by every artifact.
//!
//! ```text
//! # grid n1=3 n2=4 min1=0 max1=1 min2=-1 max2=1
//! # columns w,v1,v2
//! i,j,z1,z2,w,v1,v2
//! ```
//!
//! The `# columns` line is optional. Rows are ordered with `i` outer and `j`
//! inner. Mesh indices may start at any offset so that extracts of a larger
//! mesh keep their original labels. Floats are written in shortest
//! round-trip form, so write/read is bitwise lossless.

use std::fmt::Write as _;
use std::path::Path;

use super::{FieldError, Grid2D, ScalarField2D};

#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub grid: Grid2D,
    /// Mesh label of node `(0, 0)`.
    pub offset: (usize, usize),
    pub names: Option<Vec<String>>,
    pub columns: Vec<Vec<f64>>,
}

pub(crate) fn fmt_f64(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

impl CsvTable {
    pub fn from_fields(names: &[&str], fields: &[&ScalarField2D]) -> Result<Self, FieldError> {
        let grid = *fields
            .first()
            .ok_or_else(|| FieldError::InvalidGrid("no fields".into()))?
            .grid();
        for f in fields {
            grid.ensure_same(f.grid())?;
        }
        Ok(Self {
            grid,
            offset: (0, 0),
            names: Some(names.iter().map(|s| s.to_string()).collect()),
            columns: fields.iter().map(|f| f.values().to_vec()).collect(),
        })
    }

    pub fn with_offset(mut self, offset: (usize, usize)) -> Self {
        self.offset = offset;
        self
    }

    pub fn column(&self, name: &str) -> Option<ScalarField2D> {
        let k = self.names.as_ref()?.iter().position(|n| n == name)?;
        ScalarField2D::new(self.grid, self.columns[k].clone()).ok()
    }

    pub fn field(&self, k: usize) -> Result<ScalarField2D, FieldError> {
        ScalarField2D::new(self.grid, self.columns[k].clone())
    }

    pub fn to_csv_string(&self) -> String {
        let g = &self.grid;
        let mut s = format!(
            "# grid n1={} n2={} min1={} max1={} min2={} max2={}\n",
            g.n1(),
            g.n2(),
            fmt_f64(g.min1()),
            fmt_f64(g.max1()),
            fmt_f64(g.min2()),
            fmt_f64(g.max2())
        );
        if let Some(names) = &self.names {
            let _ = writeln!(s, "# columns {}", names.join(","));
        }
        for (i, j, z) in g.nodes() {
            let k = g.idx(i, j);
            let _ = write!(
                s,
                "{},{},{},{}",
                i + self.offset.0,
                j + self.offset.1,
                fmt_f64(z[0]),
                fmt_f64(z[1])
            );
            for c in &self.columns {
                let _ = write!(s, ",{}", fmt_f64(c[k]));
            }
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self, FieldError> {
        let err = |line: usize, msg: String| FieldError::Csv { line, msg };
        let mut lines = text.lines().enumerate().map(|(k, l)| (k + 1, l.trim()));
        let (ln, header) = lines
            .next()
            .ok_or_else(|| err(1, "empty file".into()))?;
        let grid = parse_header(header).map_err(|m| err(ln, m))?;
        let mut names: Option<Vec<String>> = None;
        let mut columns: Vec<Vec<f64>> = Vec::new();
        let mut offset = (0, 0);
        let mut row = 0usize;
        let tol1 = 1e-9 * (grid.max1() - grid.min1()).abs().max(grid.max1().abs());
        let tol2 = 1e-9 * (grid.max2() - grid.min2()).abs().max(grid.max2().abs());
        for (ln, line) in lines {
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let rest = rest.trim();
                if let Some(c) = rest.strip_prefix("columns") {
                    if row > 0 {
                        return Err(err(ln, "column names after data rows".into()));
                    }
                    names = Some(c.trim().split(',').map(|s| s.trim().to_string()).collect());
                }
                continue;
            }
            let cells: Vec<&str> = line.split(',').map(str::trim).collect();
            if cells.len() < 5 {
                return Err(err(ln, format!("expected at least 5 cells, got {}", cells.len())));
            }
            let nval = cells.len() - 4;
            if row == 0 {
                columns = vec![Vec::with_capacity(grid.len()); nval];
            } else if nval != columns.len() {
                return Err(err(
                    ln,
                    format!("ragged row: {} values, expected {}", nval, columns.len()),
                ));
            }
            if row >= grid.len() {
                return Err(err(ln, format!("more than {} rows", grid.len())));
            }
            let int = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| err(ln, format!("bad mesh index '{s}'")))
            };
            let flt = |s: &str| {
                let v = s
                    .parse::<f64>()
                    .map_err(|_| err(ln, format!("bad number '{s}'")))?;
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(err(ln, format!("non-finite value '{s}'")))
                }
            };
            let (i, j) = (int(cells[0])?, int(cells[1])?);
            if row == 0 {
                offset = (i, j);
            }
            let (li, lj) = grid.ij(row);
            if i != offset.0 + li || j != offset.1 + lj {
                return Err(err(
                    ln,
                    format!(
                        "mesh index ({i}, {j}) out of order, expected ({}, {})",
                        offset.0 + li,
                        offset.1 + lj
                    ),
                ));
            }
            let (z1, z2) = (flt(cells[2])?, flt(cells[3])?);
            if (z1 - grid.z1(li)).abs() > tol1 || (z2 - grid.z2(lj)).abs() > tol2 {
                return Err(err(
                    ln,
                    format!(
                        "coordinates ({z1}, {z2}) are not the monotone mesh position ({}, {})",
                        grid.z1(li),
                        grid.z2(lj)
                    ),
                ));
            }
            for (c, cell) in columns.iter_mut().zip(&cells[4..]) {
                c.push(flt(cell)?);
            }
            row += 1;
        }
        if row != grid.len() {
            return Err(err(
                text.lines().count(),
                format!("expected {} rows, got {}", grid.len(), row),
            ));
        }
        if let Some(n) = &names {
            if n.len() != columns.len() {
                return Err(err(
                    2,
                    format!("{} column names for {} value columns", n.len(), columns.len()),
                ));
            }
        }
        Ok(Self {
            grid,
            offset,
            names,
            columns,
        })
    }
}

fn parse_header(line: &str) -> Result<Grid2D, String> {
    let body = line
        .strip_prefix('#')
        .map(str::trim)
        .and_then(|s| s.strip_prefix("grid"))
        .ok_or_else(|| "first line must be '# grid ...'".to_string())?;
    let mut get = std::collections::BTreeMap::new();
    for tok in body.split_whitespace() {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| format!("malformed header token '{tok}'"))?;
        get.insert(k, v);
    }
    let f = |k: &str| -> Result<f64, String> {
        get.get(k)
            .ok_or_else(|| format!("header missing {k}"))?
            .parse::<f64>()
            .map_err(|_| format!("header {k} is not a number"))
    };
    let n = |k: &str| -> Result<usize, String> {
        get.get(k)
            .ok_or_else(|| format!("header missing {k}"))?
            .parse::<usize>()
            .map_err(|_| format!("header {k} is not a node count"))
    };
    Grid2D::new((f("min1")?, f("max1")?), (f("min2")?, f("max2")?), n("n1")?, n("n2")?)
        .map_err(|e| e.to_string())
}

pub fn write_csv(path: &Path, table: &CsvTable) -> Result<(), FieldError> {
    std::fs::write(path, table.to_csv_string())?;
    Ok(())
}

pub fn read_csv(path: &Path) -> Result<CsvTable, FieldError> {
    CsvTable::parse(&std::fs::read_to_string(path)?)
}
