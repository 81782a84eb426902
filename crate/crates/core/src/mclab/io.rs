use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{invalid, Result};

pub const CSV_HEADER: &str = "experiment,seed,n,k,steps,param_name,param_value,trials,estimate,stderr,extra";

/// One output line.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub experiment: String,
    pub seed: u64,
    pub n: usize,
    pub k: usize,
    pub steps: usize,
    pub param_name: String,
    pub param_value: f64,
    pub trials: u64,
    pub estimate: f64,
    pub stderr: f64,
    /// Free-form `key=value` pairs separated by `;`.
    pub extra: String,
}

/// 17 significant digits, scientific notation.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

fn escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn render_csv(rows: &[CsvRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            escape(&r.experiment),
            r.seed,
            r.n,
            r.k,
            r.steps,
            escape(&r.param_name),
            fmt_f64(r.param_value),
            r.trials,
            fmt_f64(r.estimate),
            fmt_f64(r.stderr),
            escape(&r.extra)
        );
    }
    out
}

/// `key=value` settings, later sources overriding earlier ones.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    entries: BTreeMap<String, String>,
}

impl Config {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parses `key=value` lines; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut c = Self::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return invalid(format!("config line {}: expected key=value", i + 1));
            };
            c.set(k.trim(), v.trim());
        }
        Ok(c)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        match std::fs::read_to_string(path) {
            Ok(t) => Self::parse(&t),
            Err(e) => invalid(format!("cannot read config {}: {e}", path.display())),
        }
    }

    pub fn set(&mut self, key: &str, value: &str) {
        self.entries.insert(key.replace('-', "_"), value.to_string());
    }

    pub fn merge(&mut self, other: &Config) {
        for (k, v) in &other.entries {
            self.entries.insert(k.clone(), v.clone());
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v.parse().or_else(|_| invalid(format!("bad value {v:?} for {key}"))),
        }
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64> {
        self.parsed(key, default)
    }

    pub fn u64_or(&self, key: &str, default: u64) -> Result<u64> {
        self.parsed(key, default)
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize> {
        self.parsed(key, default)
    }

    pub fn bool_or(&self, key: &str, default: bool) -> Result<bool> {
        match self.get(key) {
            None => Ok(default),
            Some("1" | "true" | "on" | "yes") => Ok(true),
            Some("0" | "false" | "off" | "no") => Ok(false),
            Some(v) => invalid(format!("bad boolean {v:?} for {key}")),
        }
    }

    pub fn str_or<'a>(&'a self, key: &str, default: &'a str) -> &'a str {
        self.get(key).unwrap_or(default)
    }

    /// Comma-separated reals.
    pub fn list_or(&self, key: &str, default: &[f64]) -> Result<Vec<f64>> {
        match self.get(key) {
            None => Ok(default.to_vec()),
            Some(v) => v
                .split(',')
                .map(|x| x.trim().parse::<f64>().or_else(|_| invalid(format!("bad list entry {x:?} for {key}"))))
                .collect(),
        }
    }
}

pub fn write_csv(path: Option<&Path>, rows: &[CsvRow]) -> Result<()> {
    let text = render_csv(rows);
    match path {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(p) => std::fs::write(p, text).or_else(|e| invalid(format!("cannot write {}: {e}", p.display()))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format() {
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_f64(-2.0), "-2.0000000000000000e0");
        assert_eq!(fmt_f64(f64::NAN), "nan");
        let x = 0.123_456_789_012_345_67;
        assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn csv_layout() {
        let row = CsvRow {
            experiment: "e".into(),
            seed: 7,
            n: 3,
            k: 2,
            steps: 10,
            param_name: "phi".into(),
            param_value: 0.5,
            trials: 100,
            estimate: 0.25,
            stderr: 0.01,
            extra: "a=1;b=2".into(),
        };
        let s = render_csv(&[row]);
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines[1].split(',').count(), 11);
    }

    #[test]
    fn config_parsing() {
        let c = Config::parse("# comment\nseed = 5\nphis=0.1, 0.2\n\nmax-attempts=10 # trailing\n").unwrap();
        assert_eq!(c.u64_or("seed", 0).unwrap(), 5);
        assert_eq!(c.list_or("phis", &[]).unwrap(), vec![0.1, 0.2]);
        assert_eq!(c.u64_or("max_attempts", 0).unwrap(), 10);
        assert!(Config::parse("novalue").is_err());
        assert!(c.f64_or("phis", 0.0).is_err());
        let mut base = c.clone();
        let mut over = Config::new();
        over.set("seed", "9");
        base.merge(&over);
        assert_eq!(base.u64_or("seed", 0).unwrap(), 9);
    }
}
