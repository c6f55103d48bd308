//! Aligned-text rendering of the JSON reports. Every scalar of the JSON
//! appears in the table; nesting becomes indentation.

use serde_json::Value;

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| !x.is_array() && !x.is_object()) => {
            Some(format!("[{}]", a.iter().map(|x| scalar(x).unwrap()).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn flat_row(v: &Value) -> Option<Vec<(String, String)>> {
    let o = v.as_object()?;
    o.iter().map(|(k, x)| scalar(x).map(|s| (k.clone(), s))).collect()
}

fn table(rows: &[Vec<(String, String)>], indent: &str, out: &mut String) {
    let keys: Vec<String> = rows[0].iter().map(|(k, _)| k.clone()).collect();
    let same = rows.iter().all(|r| r.iter().map(|(k, _)| k).eq(keys.iter()));
    if !same {
        for (i, r) in rows.iter().enumerate() {
            out.push_str(&format!("{indent}[{i}]\n"));
            pairs(r, &format!("{indent}  "), out);
        }
        return;
    }
    let mut width: Vec<usize> = keys.iter().map(|k| k.chars().count()).collect();
    for r in rows {
        for (w, (_, v)) in width.iter_mut().zip(r) {
            *w = (*w).max(v.chars().count());
        }
    }
    let line = |cells: Vec<&str>| -> String {
        let padded: Vec<String> =
            cells.iter().zip(&width).map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count()))).collect();
        format!("{indent}{}\n", padded.join("  ").trim_end())
    };
    out.push_str(&line(keys.iter().map(String::as_str).collect()));
    for r in rows {
        out.push_str(&line(r.iter().map(|(_, v)| v.as_str()).collect()));
    }
}

fn pairs(r: &[(String, String)], indent: &str, out: &mut String) {
    let w = r.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    for (k, v) in r {
        out.push_str(&format!("{indent}{k}{}  {v}\n", " ".repeat(w - k.chars().count())));
    }
}

fn walk(v: &Value, indent: &str, out: &mut String) {
    if let Some(s) = scalar(v) {
        out.push_str(&format!("{indent}{s}\n"));
        return;
    }
    match v {
        Value::Object(o) => {
            let simple: Vec<(String, String)> =
                o.iter().filter_map(|(k, x)| scalar(x).map(|s| (k.clone(), s))).collect();
            pairs(&simple, indent, out);
            for (k, x) in o.iter().filter(|(_, x)| scalar(x).is_none()) {
                out.push_str(&format!("{indent}{k}:\n"));
                walk(x, &format!("{indent}  "), out);
            }
        }
        Value::Array(a) => {
            let rows: Option<Vec<_>> = a.iter().map(flat_row).collect();
            match rows {
                Some(rows) if !rows.is_empty() && !rows[0].is_empty() => table(&rows, indent, out),
                _ => {
                    for (i, x) in a.iter().enumerate() {
                        out.push_str(&format!("{indent}[{i}]\n"));
                        walk(x, &format!("{indent}  "), out);
                    }
                }
            }
        }
        _ => unreachable!(),
    }
}

pub fn to_table(v: &Value) -> String {
    let mut out = String::new();
    walk(v, "", &mut out);
    out
}
