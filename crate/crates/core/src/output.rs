//! Machine-readable row output shared by the CLI subcommands.
//!
//! CSV always carries a header row and uses locale-independent scientific
//! notation with 17 significant digits, so files round-trip bit-exactly.
//! JSON output is an array of row objects; exact integer counts that may
//! exceed 2^53 (multiplicities, complexity counts) are emitted as decimal
//! strings to survive any JSON reader.

use num_bigint::BigUint;
use serde_json::{json, Map, Value};

/// One table cell.
#[derive(Debug, Clone)]
pub enum Cell {
    Str(String),
    F64(f64),
    U64(u64),
    /// exact count, serialized as a decimal string in JSON
    Count(String),
    Bool(bool),
    Empty,
}

impl Cell {
    pub fn count_u128(v: u128) -> Cell {
        Cell::Count(v.to_string())
    }

    pub fn count_big(v: &BigUint) -> Cell {
        Cell::Count(v.to_string())
    }

    pub fn opt_count(v: Option<u128>) -> Cell {
        v.map_or(Cell::Empty, Cell::count_u128)
    }

    pub fn opt_f64(v: Option<f64>) -> Cell {
        v.map_or(Cell::Empty, Cell::F64)
    }
}

/// The fixed float format: 17 significant digits, scientific.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Table {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Str(s) => s.clone(),
                    Cell::F64(x) => format_f64(*x),
                    Cell::U64(v) => v.to_string(),
                    Cell::Count(s) => s.clone(),
                    Cell::Bool(b) => b.to_string(),
                    Cell::Empty => String::new(),
                })
                .collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (name, cell) in self.columns.iter().zip(row) {
                    let v = match cell {
                        Cell::Str(s) => json!(s),
                        Cell::F64(x) => json!(x),
                        Cell::U64(v) => json!(v),
                        Cell::Count(s) => json!(s),
                        Cell::Bool(b) => json!(b),
                        Cell::Empty => Value::Null,
                    };
                    obj.insert((*name).to_string(), v);
                }
                Value::Object(obj)
            })
            .collect();
        Value::Array(rows)
    }
}
