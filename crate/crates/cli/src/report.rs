//! Report serialization: hand-rolled JSON and CSV so every float is printed
//! with 17 significant digits (`{:.16e}`), making reports reproducible and
//! diff-able byte for byte.

/// 17-significant-digit rendering; valid as a JSON number.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// JSON value: number or null.
pub fn opt_num(x: Option<f64>) -> String {
    match x {
        Some(v) => num(v),
        None => "null".to_string(),
    }
}

/// CSV cell: number or empty.
pub fn opt_cell(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

pub fn array(items: impl IntoIterator<Item = String>) -> String {
    let mut out = String::from("[");
    for (i, item) in items.into_iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&item);
    }
    out.push(']');
    out
}

pub fn nums(v: &[f64]) -> String {
    array(v.iter().map(|&x| num(x)))
}

/// `{"k":v,...}` in insertion order.
pub fn object(fields: &[(&str, String)]) -> String {
    let mut out = String::from("{");
    for (i, (k, v)) in fields.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&string(k));
        out.push(':');
        out.push_str(v);
    }
    out.push('}');
    out
}
