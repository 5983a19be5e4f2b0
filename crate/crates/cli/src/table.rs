//! Tabular output with lossless float formatting.

use std::io::{self, Write};

use serde_json::{Map, Value as Json};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Bool(bool),
    /// Not applicable for this row.
    Empty,
}

impl Cell {
    pub fn opt(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Num)
    }

    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    /// 17 significant digits: round-trips every `f64`.
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => format!("{x:.16e}"),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Json {
        match self {
            Cell::Num(x) => serde_json::Number::from_f64(*x).map_or(Json::Null, Json::Number),
            Cell::Text(s) => Json::String(s.clone()),
            Cell::Bool(b) => Json::Bool(*b),
            Cell::Empty => Json::Null,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, out: W) -> io::Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv))?;
        }
        w.flush()
    }

    /// `{"command", "parameters", "rows": [{column: value}]}`; non-finite
    /// and inapplicable values become `null`.
    pub fn write_json<W: Write>(&self, mut out: W, command: &str, parameters: &[(String, String)]) -> io::Result<()> {
        let mut params = Map::new();
        for (k, v) in parameters {
            params.insert(k.clone(), Json::String(v.clone()));
        }
        let rows: Vec<Json> = self
            .rows
            .iter()
            .map(|row| {
                let mut m = Map::new();
                for (c, cell) in self.columns.iter().zip(row) {
                    m.insert((*c).to_string(), cell.json());
                }
                Json::Object(m)
            })
            .collect();
        let mut doc = Map::new();
        doc.insert("command".into(), Json::String(command.into()));
        doc.insert("parameters".into(), Json::Object(params));
        doc.insert("rows".into(), Json::Array(rows));
        serde_json::to_writer_pretty(&mut out, &Json::Object(doc))?;
        out.write_all(b"\n")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_floats_round_trip() {
        let mut t = Table::new(&["x", "status"]);
        let xs = [0.1, 1.0 / 3.0, 2.0f64.sqrt() * 1e-300, 28901.0, f64::MIN_POSITIVE];
        for x in xs {
            t.push(vec![Cell::Num(x), Cell::text("failed: a, b")]);
        }
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("x,status"));
        for (line, x) in lines.zip(xs) {
            let (num, rest) = line.split_once(',').unwrap();
            assert_eq!(num.parse::<f64>().unwrap(), x);
            assert_eq!(rest, "\"failed: a, b\"");
        }
    }

    #[test]
    fn json_nulls_for_nan_and_empty() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec![Cell::Num(f64::NAN), Cell::Empty]);
        let mut buf = Vec::new();
        t.write_json(&mut buf, "test", &[]).unwrap();
        let v: Json = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["rows"][0]["a"], Json::Null);
        assert_eq!(v["rows"][0]["b"], Json::Null);
    }
}
