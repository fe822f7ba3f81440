//! Loading gridded profiles from the shared CSV format.

use std::collections::BTreeMap;
use std::path::Path;

use super::ProfileError;
use crate::field::{read_csv, CsvTable, Grid2D, ScalarField2D};

/// Named fields on one grid, keeping the file's mesh labels.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileTable {
    pub grid: Grid2D,
    /// Mesh label of local node `(0, 0)`.
    pub offset: (usize, usize),
    pub fields: BTreeMap<String, ScalarField2D>,
}

impl ProfileTable {
    pub fn from_table(table: &CsvTable, columns: &[&str]) -> Result<Self, ProfileError> {
        let names: Vec<String> = match &table.names {
            Some(n) => n.clone(),
            None => (0..table.columns.len()).map(|k| format!("c{k}")).collect(),
        };
        let mut fields = BTreeMap::new();
        for (k, n) in names.iter().enumerate() {
            if columns.is_empty() || columns.contains(&n.as_str()) {
                fields.insert(n.clone(), table.field(k)?);
            }
        }
        for c in columns {
            if !fields.contains_key(*c) {
                return Err(ProfileError::Manifest(format!("missing column '{c}'")));
            }
        }
        Ok(Self {
            grid: table.grid,
            offset: table.offset,
            fields,
        })
    }

    pub fn get(&self, name: &str) -> Option<&ScalarField2D> {
        self.fields.get(name)
    }

    pub fn require(&self, name: &str) -> Result<&ScalarField2D, ProfileError> {
        self.get(name)
            .ok_or_else(|| ProfileError::Manifest(format!("missing column '{name}'")))
    }

    /// Local node of a mesh label.
    pub fn local(&self, mesh: (usize, usize)) -> Option<(usize, usize)> {
        let i = mesh.0.checked_sub(self.offset.0)?;
        let j = mesh.1.checked_sub(self.offset.1)?;
        (i < self.grid.n1() && j < self.grid.n2()).then_some((i, j))
    }

    /// Mesh label of a local node.
    pub fn label(&self, i: usize, j: usize) -> (usize, usize) {
        (i + self.offset.0, j + self.offset.1)
    }

    pub fn to_table(&self) -> Result<CsvTable, ProfileError> {
        let names: Vec<&str> = self.fields.keys().map(String::as_str).collect();
        let fields: Vec<&ScalarField2D> = self.fields.values().collect();
        Ok(CsvTable::from_fields(&names, &fields)?.with_offset(self.offset))
    }
}

/// Reads `path`; `columns` selects and requires columns, empty keeps all.
/// Parse errors carry the offending line number.
pub fn load_profile_csv(path: &Path, columns: &[&str]) -> Result<ProfileTable, ProfileError> {
    ProfileTable::from_table(&read_csv(path)?, columns)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{write_csv, FieldError};

    fn table() -> ProfileTable {
        let g = Grid2D::new((0.0, 0.2), (1.0, 1.3), 3, 4).unwrap();
        let w = ScalarField2D::from_fn(g, |a, b| (a + 1e-3 * b).sin() * 1e-17).unwrap();
        let v = ScalarField2D::from_fn(g, |a, b| a / 3.0 - b).unwrap();
        let t = CsvTable::from_fields(&["w", "v1"], &[&w, &v]).unwrap().with_offset((19, 710));
        ProfileTable::from_table(&t, &[]).unwrap()
    }

    #[test]
    fn round_trip_is_bitwise() {
        let dir = std::env::temp_dir().join(format!("axiblow-ingest-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let p = dir.join("t.csv");
        let t = table();
        write_csv(&p, &t.to_table().unwrap()).unwrap();
        let back = load_profile_csv(&p, &["w"]).unwrap();
        assert_eq!(back.get("w"), t.get("w"));
        assert!(back.get("v1").is_none());
        assert_eq!(back.local((20, 711)), Some((1, 1)));
        assert_eq!(back.label(1, 1), (20, 711));
        assert_eq!(back.local((18, 711)), None);
        assert!(load_profile_csv(&p, &["nope"]).is_err());
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn nan_is_rejected_with_line() {
        let s = table().to_table().unwrap().to_csv_string();
        let lines: Vec<String> = s.lines().map(String::from).collect();
        let mut out = Vec::new();
        for (k, l) in lines.iter().enumerate() {
            if l.starts_with("20,711,") {
                let cells: Vec<&str> = l.split(',').collect();
                out.push(format!("{},{},{},{},NaN,{}", cells[0], cells[1], cells[2], cells[3], cells[5]));
                assert_eq!(k + 1, 8);
            } else {
                out.push(l.clone());
            }
        }
        let e = CsvTable::parse(&out.join("\n")).unwrap_err();
        assert!(matches!(e, FieldError::Csv { line: 8, .. }), "{e}");
    }
}
