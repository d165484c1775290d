use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Real(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    pub fn as_real(&self) -> Option<f64> {
        match self {
            Cell::Real(x) => Some(*x),
            Cell::Int(i) => Some(*i as f64),
            Cell::Text(_) => None,
        }
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            Cell::Text(s) => Some(s),
            _ => None,
        }
    }

    fn render(&self) -> String {
        match self {
            Cell::Real(x) => format_real(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Real(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        Cell::Real(x.unwrap_or(f64::NAN))
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

/// C-style `%.16e`: 17 significant digits, signed two-digit exponent.
pub fn format_real(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let s = format!("{x:.16e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

/// Named columns with one row per run; written as CSV with a `#` header.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub file_name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(file_name: impl Into<String>, columns: &[&str]) -> Self {
        Self {
            file_name: file_name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn with_columns(file_name: impl Into<String>, columns: Vec<String>) -> Self {
        Self {
            file_name: file_name.into(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width must match the header"
        );
        self.rows.push(row);
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let i = self.column_index(name)?;
        Some(self.rows.iter().map(|r| &r[i]).collect())
    }

    pub fn write_to(&self, out: &mut impl Write, header: &[String]) -> io::Result<()> {
        for line in header {
            writeln!(out, "# {line}")?;
        }
        writeln!(out, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }

    pub fn write(&self, dir: &Path, header: &[String]) -> io::Result<PathBuf> {
        fs::create_dir_all(dir)?;
        let path = dir.join(&self.file_name);
        let mut buf = Vec::new();
        self.write_to(&mut buf, header)?;
        fs::write(&path, buf)?;
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c_style_exponents() {
        assert_eq!(format_real(1.0), "1.0000000000000000e+00");
        assert_eq!(format_real(-5.18e-5), "-5.1799999999999999e-05");
        assert_eq!(format_real(1.5e300), "1.5000000000000001e+300");
        assert_eq!(format_real(0.0), "0.0000000000000000e+00");
        assert_eq!(format_real(f64::NAN), "nan");
        let x = 0.1 + 0.2;
        assert_eq!(format_real(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn writes_header_and_rows() {
        let mut t = Table::new("t.csv", &["r", "method", "err"]);
        t.push(vec![10usize.into(), "ddq".into(), 0.5.into()]);
        t.push(vec![20usize.into(), "standard".into(), None.into()]);
        let mut buf = Vec::new();
        t.write_to(&mut buf, &["n = 1".into()]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "# n = 1\nr,method,err\n10,ddq,5.0000000000000000e-01\n20,standard,nan\n"
        );
        assert_eq!(t.column("err").unwrap()[0].as_real(), Some(0.5));
    }

    #[test]
    #[should_panic]
    fn ragged_row_panics() {
        Table::new("t.csv", &["a", "b"]).push(vec![1usize.into()]);
    }
}
