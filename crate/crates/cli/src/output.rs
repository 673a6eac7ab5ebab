use std::fmt::Write as _;

use serde_json::{Map, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    /// Integer too large for a machine word; a string in JSON.
    Big(String),
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// `key=value` lines after the rows in CSV, top-level keys in JSON.
    pub summary: Vec<(&'static str, f64)>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            ..Self::default()
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(csv_cell).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        for (k, v) in &self.summary {
            let _ = writeln!(s, "{k}={}", fmt_g17(*v));
        }
        s
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .header
                    .iter()
                    .zip(row)
                    .map(|(k, c)| (k.to_string(), json_cell(c)))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let value = if self.summary.is_empty() {
            Value::Array(rows)
        } else {
            let mut top = Map::new();
            for (k, v) in &self.summary {
                top.insert(k.to_string(), json_float(*v));
            }
            top.insert("rows".into(), Value::Array(rows));
            Value::Object(top)
        };
        let mut s = serde_json::to_string_pretty(&value).expect("plain values serialize");
        s.push('\n');
        s
    }
}

fn csv_cell(c: &Cell) -> String {
    match c {
        Cell::Int(i) => i.to_string(),
        Cell::Float(v) => fmt_g17(*v),
        Cell::Big(s) => s.clone(),
    }
}

pub fn json_float(v: f64) -> Value {
    serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
}

fn json_cell(c: &Cell) -> Value {
    match c {
        Cell::Int(i) => Value::from(*i),
        Cell::Float(v) => json_float(*v),
        Cell::Big(s) => match s.parse::<i64>() {
            Ok(i) => Value::from(i),
            Err(_) => Value::String(s.clone()),
        },
    }
}

/// `printf("%.17g")`: 17 significant digits, trailing zeros dropped, fixed
/// notation for decimal exponents in `[−4, 17)`.
pub fn fmt_g17(v: f64) -> String {
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !v.is_finite() {
        return if v.is_nan() { "nan".into() } else if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{v:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        let m = trim_zeros(mantissa.to_string());
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}
