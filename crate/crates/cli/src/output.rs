//! Payload formatting. Reals are printed with exactly six decimals.

use std::str::FromStr;

use interline::Allocation;
use serde_json::{Map, Number, Value};

/// Keys whose values keep their full representation.
const VERBATIM_KEYS: [&str; 2] = ["tolerance", "tol"];

fn six_decimals(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".to_owned()
    } else {
        s
    }
}

pub fn fixed(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    Value::Number(Number::from_str(&six_decimals(x)).expect("decimal literal parses"))
}

fn is_real(n: &Number) -> bool {
    let text = n.to_string();
    text.contains(['.', 'e', 'E'])
}

/// Rewrites every real number in `value` to six decimals. Integers stay.
pub fn normalize(value: Value) -> Value {
    match value {
        Value::Number(n) if is_real(&n) => fixed(n.as_f64().unwrap_or(f64::NAN)),
        Value::Array(items) => Value::Array(items.into_iter().map(normalize).collect()),
        Value::Object(map) => Value::Object(
            map.into_iter()
                .map(|(k, v)| {
                    let v = if VERBATIM_KEYS.contains(&k.as_str()) { v } else { normalize(v) };
                    (k, v)
                })
                .collect(),
        ),
        other => other,
    }
}

/// `{"1": 0.000000, "2": 14.663594, ...}` in ascending airline order.
pub fn allocation(a: &Allocation<f64>) -> Value {
    let mut map = Map::new();
    for (airline, amount) in a.iter() {
        map.insert(airline.0.to_string(), fixed(*amount));
    }
    Value::Object(map)
}

pub fn render_json(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(&normalize(value.clone())).expect("payload serializes");
    s.push('\n');
    s
}

/// Left-aligned first column, right-aligned rest.
pub fn render_table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in rows {
        for (k, cell) in row.iter().enumerate() {
            widths[k] = widths[k].max(cell.len());
        }
    }
    let line = |cells: Vec<&str>| -> String {
        let mut out = String::new();
        for (k, cell) in cells.into_iter().enumerate() {
            if k == 0 {
                out.push_str(&format!("{cell:<w$}", w = widths[0]));
            } else {
                out.push_str(&format!("  {cell:>w$}", w = widths[k]));
            }
        }
        out.trim_end().to_owned() + "\n"
    };
    let mut out = line(headers.to_vec());
    out.push_str(&line(widths.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>().iter().map(String::as_str).collect()));
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    out
}

pub fn amount(x: f64) -> String {
    six_decimals(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn reals_get_six_decimals_and_integers_stay() {
        let v = normalize(json!({"a": 1.5, "b": 3, "c": [0.1234567, -0.0000001], "tolerance": 1e-9}));
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            r#"{"a":1.500000,"b":3,"c":[0.123457,0.000000],"tolerance":1e-9}"#
        );
    }

    #[test]
    fn table_columns_align() {
        let t = render_table(&["airline", "amount"], &[vec!["1".into(), "0.5".into()], vec!["22".into(), "10.25".into()]]);
        assert_eq!(t, "airline  amount\n-------  ------\n1           0.5\n22        10.25\n");
    }
}
