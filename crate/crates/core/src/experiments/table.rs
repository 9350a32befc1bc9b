use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Text(String),
}

impl Value {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Num(x) => Some(*x),
            Value::Text(_) => None,
        }
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Num(x)
    }
}

impl From<usize> for Value {
    fn from(x: usize) -> Self {
        Value::Num(x as f64)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Text(s.to_string())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Text(s)
    }
}

/// Shortest decimal string that parses back to the same `f64`.
pub fn format_float(x: f64) -> String {
    format!("{x:?}")
}

/// A rectangular table of named columns.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    columns: Vec<String>,
    rows: Vec<Vec<Value>>,
}

impl ResultTable {
    pub fn new<S: AsRef<str>>(columns: &[S]) -> Result<Self> {
        let columns: Vec<String> = columns.iter().map(|c| c.as_ref().to_string()).collect();
        for (i, c) in columns.iter().enumerate() {
            if columns[..i].contains(c) {
                return Err(Error::InvalidParameter(format!("duplicate column {c}")));
            }
        }
        Ok(Self {
            columns,
            rows: Vec::new(),
        })
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Value>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn push(&mut self, row: Vec<Value>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::DimensionMismatch {
                expected: self.columns.len(),
                found: row.len(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric view of a column; text cells read as NaN.
    pub fn column_f64(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.column_index(name)?;
        Some(
            self.rows
                .iter()
                .map(|r| r[idx].as_f64().unwrap_or(f64::NAN))
                .collect(),
        )
    }

    pub fn get(&self, row: usize, name: &str) -> Option<&Value> {
        let idx = self.column_index(name)?;
        self.rows.get(row).map(|r| &r[idx])
    }

    pub fn write_csv_to<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| match v {
                Value::Num(x) => format_float(*x),
                Value::Text(s) => s.clone(),
            }))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv_to(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    /// Parse a CSV produced by [`write_csv`]; cells that parse as `f64`
    /// become numbers.
    pub fn read_csv_from<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new().from_reader(input);
        let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
        let mut table = Self::new(&header)?;
        for rec in r.records() {
            let rec = rec?;
            table.push(
                rec.iter()
                    .map(|cell| match cell.parse::<f64>() {
                        Ok(x) => Value::Num(x),
                        Err(_) => Value::Text(cell.to_string()),
                    })
                    .collect(),
            )?;
        }
        Ok(table)
    }
}

pub fn write_csv(table: &ResultTable, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path)?;
    table.write_csv_to(std::io::BufWriter::new(file))
}

pub fn read_csv(path: &Path) -> Result<ResultTable> {
    ResultTable::read_csv_from(std::fs::File::open(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn empty_table_is_header_only() {
        let t = ResultTable::new(&["a", "b"]).unwrap();
        assert_eq!(t.to_csv_string().unwrap(), "a,b\n");
    }

    #[test]
    fn rejects_duplicate_columns_and_ragged_rows() {
        assert!(ResultTable::new(&["a", "a"]).is_err());
        let mut t = ResultTable::new(&["a", "b"]).unwrap();
        assert!(t.push(vec![1.0.into()]).is_err());
    }

    #[test]
    fn mixed_cells() {
        let mut t = ResultTable::new(&["theta", "regime"]).unwrap();
        t.push(vec![0.001.into(), "high".into()]).unwrap();
        t.push(vec![1e300.into(), "low".into()]).unwrap();
        let s = t.to_csv_string().unwrap();
        assert_eq!(s, "theta,regime\n0.001,high\n1e300,low\n");
        assert_eq!(ResultTable::read_csv_from(s.as_bytes()).unwrap(), t);
    }

    proptest! {
        #[test]
        fn csv_round_trip(values in proptest::collection::vec(
            prop_oneof![any::<f64>().prop_filter("finite", |x| x.is_finite()), -1e6..1e6f64], 0..40)
        ) {
            let mut t = ResultTable::new(&["x", "y"]).unwrap();
            for v in &values {
                t.push(vec![Value::Num(*v), Value::Num(-v)]).unwrap();
            }
            let back = ResultTable::read_csv_from(t.to_csv_string().unwrap().as_bytes()).unwrap();
            prop_assert_eq!(back, t);
        }
    }
}
