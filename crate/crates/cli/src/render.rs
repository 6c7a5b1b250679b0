//! Plain-text rendering of JSON results.

use serde_json::Value;

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) if !s.contains('\n') => Some(s.clone()),
        _ => None,
    }
}

fn flat_list(v: &Value) -> Option<String> {
    let items = v.as_array()?;
    let parts: Option<Vec<String>> = items.iter().map(scalar).collect();
    parts.map(|p| format!("[{}]", p.join(", ")))
}

fn write(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                if let Some(s) = scalar(x).or_else(|| flat_list(x)) {
                    out.push_str(&format!("{pad}{k}: {s}\n"));
                } else {
                    out.push_str(&format!("{pad}{k}:\n"));
                    write(x, indent + 1, out);
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                if let Some(s) = scalar(x).or_else(|| flat_list(x)) {
                    out.push_str(&format!("{pad}{s}\n"));
                } else {
                    out.push_str(&format!("{pad}-\n"));
                    write(x, indent + 1, out);
                }
            }
        }
        Value::String(s) => {
            for line in s.lines() {
                out.push_str(&format!("{pad}{line}\n"));
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}

pub fn text(v: &Value) -> String {
    let mut out = String::new();
    match scalar(v) {
        Some(s) => out.push_str(&s),
        None => write(v, 0, &mut out),
    }
    out
}

/// One line per fixture, followed by the diff of any failure.
pub fn fixture_report(v: &Value) -> String {
    let mut out = String::new();
    for fx in v["fixtures"].as_array().into_iter().flatten() {
        let status = if fx["passed"] == Value::Bool(true) { "PASS" } else { "FAIL" };
        out.push_str(&format!("{status} {}\n", fx["name"].as_str().unwrap_or("?")));
        if let Some(diff) = fx["diff"].as_str() {
            out.push_str(diff);
        }
    }
    out.push_str(&format!("{} passed, {} failed\n", v["passed"], v["failed"]));
    out
}
