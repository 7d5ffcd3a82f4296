//! Report rendering. The text form walks the same JSON value, so both formats
//! carry identical numbers.

use serde_json::Value;

use crate::Format;

pub fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(v).expect("JSON values serialize") + "\n",
        Format::Text => {
            let mut out = String::new();
            text(v, 0, &mut out);
            out
        }
    }
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Object(_) => false,
        Value::Array(items) => items.iter().all(is_flat),
        _ => true,
    }
}

fn inline(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => format!("[{}]", items.iter().map(inline).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}

fn text(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                if is_flat(val) {
                    out.push_str(&format!("{pad}{k}: {}\n", inline(val)));
                } else {
                    out.push_str(&format!("{pad}{k}:\n"));
                    text(val, depth + 1, out);
                }
            }
        }
        Value::Array(items) if !is_flat(v) => {
            for (i, item) in items.iter().enumerate() {
                out.push_str(&format!("{pad}[{i}]\n"));
                text(item, depth + 1, out);
            }
        }
        other => out.push_str(&format!("{pad}{}\n", inline(other))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn text_lists_every_field() {
        let v = json!({"delta": 1, "pi1": [[1, 0], [0, 1]], "checks": {"star": true}});
        assert_eq!(render(&v, Format::Text), "delta: 1\npi1: [[1, 0], [0, 1]]\nchecks:\n  star: true\n");
    }

    #[test]
    fn json_is_pretty_with_newline() {
        let v = json!({"a": [1]});
        assert!(render(&v, Format::Json).ends_with("}\n"));
    }
}
