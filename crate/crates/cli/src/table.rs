//! Row-oriented output in CSV, JSON and whitespace plot-data form.

use std::fmt::Write as _;

use barrierclock::format::sig17;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Missing,
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        if x.is_finite() {
            Cell::Num(x)
        } else {
            Cell::Missing
        }
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Missing, Cell::from)
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Comma-separated, LF line endings, 17 significant digits, missing
    /// values as empty cells.
    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Num(x) => sig17(*x),
                    Cell::Missing => String::new(),
                    Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
                    Cell::Text(s) => s.clone(),
                })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// Array of objects keyed by the header; missing values are `null`.
    pub fn to_json(&self) -> String {
        let mut out = String::from("[\n");
        for (i, row) in self.rows.iter().enumerate() {
            out.push_str("  {");
            for (j, (name, cell)) in self.header.iter().zip(row).enumerate() {
                if j > 0 {
                    out.push_str(", ");
                }
                let value = match cell {
                    Cell::Num(x) => sig17(*x),
                    Cell::Missing => "null".to_string(),
                    Cell::Text(s) if s.is_empty() => "null".to_string(),
                    Cell::Text(s) => serde_json::to_string(s).expect("string serializes"),
                };
                let _ = write!(out, "{}: {}", serde_json::to_string(name).expect("string serializes"), value);
            }
            out.push('}');
            if i + 1 < self.rows.len() {
                out.push(',');
            }
            out.push('\n');
        }
        out.push_str("]\n");
        out
    }

    /// gnuplot-style: `#` header, whitespace separated, `nan` for missing,
    /// text columns dropped.
    pub fn to_plot_data(&self) -> String {
        let keep: Vec<usize> = (0..self.header.len())
            .filter(|&j| !self.rows.iter().any(|r| matches!(r[j], Cell::Text(_))))
            .collect();
        let mut out = String::from("#");
        for &j in &keep {
            out.push(' ');
            out.push_str(&self.header[j]);
        }
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = keep
                .iter()
                .map(|&j| match &row[j] {
                    Cell::Num(x) => sig17(*x),
                    _ => "nan".to_string(),
                })
                .collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_all_forms() {
        let mut t = Table::new(&["x", "y", "reason"]);
        t.push(vec![Cell::from(1.0), Cell::Missing, Cell::Text("tau_R:reflection_vanishes".into())]);
        t.push(vec![Cell::from(0.5), Cell::from(f64::NAN), Cell::Text(String::new())]);
        assert_eq!(
            t.to_csv(),
            "x,y,reason\n1.0000000000000000e0,,tau_R:reflection_vanishes\n5.0000000000000000e-1,,\n"
        );
        let json = t.to_json();
        assert!(json.contains("\"y\": null"));
        assert!(json.contains("\"reason\": null"));
        assert_eq!(t.to_plot_data(), "# x y\n1.0000000000000000e0 nan\n5.0000000000000000e-1 nan\n");
    }
}
