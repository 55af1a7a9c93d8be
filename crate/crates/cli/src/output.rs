//! Result documents: deterministic JSON with 17 significant digits, CSV
//! tables, and plain text with optional color.

use std::io::IsTerminal;

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA: u64 = 1;

/// Wraps a payload as `{"schema": 1, "command": ..., <payload fields>}`.
pub fn document<T: Serialize>(command: &str, payload: &T) -> Value {
    let mut map = serde_json::Map::new();
    map.insert("schema".into(), Value::from(SCHEMA));
    map.insert("command".into(), Value::from(command));
    match serde_json::to_value(payload).expect("payload serializes") {
        Value::Object(fields) => map.extend(fields),
        other => {
            map.insert("result".into(), other);
        }
    }
    Value::Object(map)
}

/// Pretty JSON with every float printed as `d.dddddddddddddddde±x`.
pub fn to_json(value: &Value) -> String {
    let mut out = String::new();
    write_value(value, 0, &mut out);
    out.push('\n');
    out
}

fn indent(level: usize, out: &mut String) {
    out.extend(std::iter::repeat_n("  ", level));
}

fn write_value(value: &Value, level: usize, out: &mut String) {
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_i64() || n.is_u64() {
                out.push_str(&n.to_string());
            } else {
                out.push_str(&float(n.as_f64().expect("float")));
            }
        }
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("string serializes")),
        Value::Array(items) if items.iter().all(|v| !v.is_object() && !v.is_array()) => {
            // scalar arrays stay on one line
            out.push('[');
            for (i, v) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_value(v, level, out);
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, v) in items.iter().enumerate() {
                indent(level + 1, out);
                write_value(v, level + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            indent(level, out);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push_str("{\n");
            for (i, (k, v)) in map.iter().enumerate() {
                indent(level + 1, out);
                out.push_str(&serde_json::to_string(k).expect("key serializes"));
                out.push_str(": ");
                write_value(v, level + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            indent(level, out);
            out.push('}');
        }
    }
}

/// 17 significant digits; JSON has no spelling for non-finite values.
pub fn float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".into()
    }
}

/// A CSV table from a header and rows of preformatted cells.
pub fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Colors pass/fail markers only on a terminal and only without `NO_COLOR`.
pub struct Style {
    color: bool,
}

impl Style {
    pub fn detect() -> Self {
        let no_color = std::env::var_os("NO_COLOR").is_some_and(|v| !v.is_empty());
        Style { color: !no_color && std::io::stdout().is_terminal() }
    }

    pub fn verdict(&self, passed: bool) -> String {
        let word = if passed { "PASS" } else { "FAIL" };
        if self.color {
            format!("\x1b[{}m{word}\x1b[0m", if passed { 32 } else { 31 })
        } else {
            word.into()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_carry_seventeen_digits() {
        assert_eq!(float(0.5), "5.0000000000000000e-1");
        assert_eq!(float(f64::NAN), "null");
        let text = to_json(&json!({"b": [1, 2.5], "a": {"x": -3}}));
        assert_eq!(text, "{\n  \"b\": [1, 2.5000000000000000e0],\n  \"a\": {\n    \"x\": -3\n  }\n}\n");
        let parsed: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed["b"][1], 2.5);
    }

    #[test]
    fn documents_lead_with_the_schema() {
        let doc = document("demo", &json!({"value": 1}));
        let keys: Vec<&String> = doc.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["schema", "command", "value"]);
    }
}
