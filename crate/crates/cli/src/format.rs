//! Number printing and the three output formats.

use serde_json::Value;

const SIGNIFICANT: i32 = 9;

/// `%g`-style rendering with 9 significant digits, ties to even.
pub fn float(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", (SIGNIFICANT - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..SIGNIFICANT).contains(&exp) {
        let decimals = (SIGNIFICANT - 1 - exp) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa.to_string()), exp.abs())
    }
}

fn trim_zeros(mut s: String) -> String {
    if s.contains('.') {
        let keep = s.trim_end_matches('0').trim_end_matches('.').len();
        s.truncate(keep);
    }
    s
}

/// Round every non-integer number in `value` to 9 significant digits.
pub fn round_json(value: &mut Value) {
    match value {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64 number");
            let rounded: f64 = float(x).parse().expect("float output parses");
            if let Some(r) = serde_json::Number::from_f64(rounded) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_json),
        Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

pub fn json(mut value: Value) -> String {
    round_json(&mut value);
    let mut s = serde_json::to_string_pretty(&value).expect("JSON values serialize");
    s.push('\n');
    s
}

/// A titled grid of preformatted cells.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub title: Option<String>,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Self {
        Self {
            title: None,
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn titled(mut self, title: impl Into<String>) -> Self {
        self.title = Some(title.into());
        self
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn render_text(&self) -> String {
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect();
            padded.join("  ").trim_end().to_string() + "\n"
        };
        let mut out = String::new();
        if let Some(t) = &self.title {
            out.push_str(t);
            out.push('\n');
        }
        out.push_str(&line(&self.headers));
        let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
        out.push_str(&line(&rule));
        for row in &self.rows {
            out.push_str(&line(row));
        }
        out
    }

    pub fn render_csv(&self) -> String {
        let mut out = String::new();
        if let Some(t) = &self.title {
            out.push_str(&format!("# {t}\n"));
        }
        out.push_str(&csv_line(&self.headers));
        for row in &self.rows {
            out.push_str(&csv_line(row));
        }
        out
    }
}

fn csv_line(cells: &[String]) -> String {
    let quoted: Vec<String> = cells
        .iter()
        .map(|c| {
            if c.contains([',', '"', '\n']) {
                format!("\"{}\"", c.replace('"', "\"\""))
            } else {
                c.clone()
            }
        })
        .collect();
    quoted.join(",") + "\n"
}

/// Render several tables, separated by blank lines.
pub fn tables(tables: &[Table], csv: bool) -> String {
    tables
        .iter()
        .map(|t| if csv { t.render_csv() } else { t.render_text() })
        .collect::<Vec<_>>()
        .join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(float(22f64.sqrt() / 4.0), "1.17260394");
        assert_eq!(float(0.1), "0.1");
        assert_eq!(float(1.0), "1");
        assert_eq!(float(-0.0), "0");
        assert_eq!(float(0.25), "0.25");
        assert_eq!(float(123456789.4), "123456789");
        assert_eq!(float(1234567894.0), "1.23456789e+09");
        assert_eq!(float(1.5e-7), "1.5e-07");
        assert_eq!(float(0.000012345), "0.000012345");
        assert_eq!(float(9.9999999996), "10");
        assert_eq!(float(f64::NAN), "NaN");
    }

    #[test]
    fn ties_go_to_even() {
        // exactly representable ties at the 9th digit
        assert_eq!(float(0.5 + 2f64.powi(-10)), "0.500976562");
        assert_eq!(float(0.5 + 3.0 * 2f64.powi(-10)), "0.502929688");
    }

    #[test]
    fn json_rounding_leaves_integers() {
        let v = serde_json::json!({"n": 4, "x": 0.1 + 0.2, "list": [1.0 / 3.0]});
        assert_eq!(
            json(v),
            "{\n  \"list\": [\n    0.333333333\n  ],\n  \"n\": 4,\n  \"x\": 0.3\n}\n"
        );
    }

    #[test]
    fn csv_quoting() {
        let mut t = Table::new(["a", "b"]);
        t.push(vec!["x,y".into(), "plain".into()]);
        assert_eq!(t.render_csv(), "a,b\n\"x,y\",plain\n");
    }

    #[test]
    fn text_alignment() {
        let mut t = Table::new(["k", "value"]).titled("demo");
        t.push(vec!["10".into(), "1".into()]);
        assert_eq!(t.render_text(), "demo\nk   value\n--  -----\n10  1\n");
    }
}
