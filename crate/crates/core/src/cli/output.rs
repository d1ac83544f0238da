//! CSV and JSON emission.
//!
//! Numbers are written in the shortest decimal form that parses back to the
//! same `f64`, so files are bit-stable and diffable.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::Serialize;

use super::CliError;

/// Shortest round-trip decimal; scientific notation outside `[1e-4, 1e16)`.
pub fn fmt_num(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let a = v.abs();
    if a == 0.0 || (1e-4..1e16).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// A CSV document: leading comments, header, rows, trailing comments.
#[derive(Debug, Default)]
pub struct Csv {
    head: Vec<String>,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
    tail: Vec<String>,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|h| h.to_string()).collect(),
            ..Self::default()
        }
    }

    pub fn comment(&mut self, line: impl Into<String>) {
        self.head.push(line.into());
    }

    pub fn trailer(&mut self, line: impl Into<String>) {
        self.tail.push(line.into());
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.head {
            let _ = writeln!(out, "# {c}");
        }
        let _ = writeln!(out, "{}", self.header.join(","));
        for r in &self.rows {
            let _ = writeln!(out, "{}", r.join(","));
        }
        for c in &self.tail {
            let _ = writeln!(out, "# {c}");
        }
        out
    }
}

#[derive(Serialize)]
pub struct Envelope<'a, C: Serialize, R: Serialize, F: Serialize> {
    pub config_echo: &'a C,
    pub results: R,
    pub flags: F,
}

pub fn render_json<C: Serialize, R: Serialize, F: Serialize>(config: &C, results: R, flags: F) -> Result<String, CliError> {
    let env = Envelope {
        config_echo: config,
        results,
        flags,
    };
    let mut s = serde_json::to_string_pretty(&env).map_err(|e| CliError::usage(format!("cannot encode JSON: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// Writes to `path`, or to standard output when `None`.
pub fn emit(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::usage(format!("cannot write to stdout: {e}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for v in [0.0, 1.0, -2.5, 0.1, 1e-4, 9.99e-5, 1e16, 123456.789, 1.0 / 3.0, f64::MIN_POSITIVE, 5e-324, f64::MAX] {
            let s = fmt_num(v);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits(), "{s}");
        }
        assert_eq!(fmt_num(1e-2), "0.01");
        assert_eq!(fmt_num(1e20), "1e20");
        assert_eq!(fmt_num(f64::NEG_INFINITY), "-inf");
    }

    #[test]
    fn csv_layout() {
        let mut c = Csv::new(&["a", "b"]);
        c.comment("top");
        c.row(vec!["1".into(), "2".into()]);
        c.trailer("end");
        assert_eq!(c.render(), "# top\na,b\n1,2\n# end\n");
    }
}
