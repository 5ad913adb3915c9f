//! Convergence tables, order formulas and their CSV form.

use std::fmt;
use std::io::{Read, Write};

use crate::error::{Error, Result};

/// Temporal order `|log(E1 / E2)| / |log(M2 / M1)|` between two step counts.
/// `None` when an error is not positive or the step counts coincide.
pub fn co_rate(e1: f64, e2: f64, m1: f64, m2: f64) -> Option<f64> {
    if !(e1 > 0.0 && e2 > 0.0 && m1 > 0.0 && m2 > 0.0) || m1 == m2 {
        return None;
    }
    Some((e1 / e2).ln().abs() / (m2 / m1).ln().abs())
}

/// Spatial exponent `log E / log N`, reported as `N^{A-O}`.
pub fn ao_rate(e: f64, n: usize) -> Option<f64> {
    if !(e > 0.0) || n < 2 {
        return None;
    }
    Some(e.ln() / (n as f64).ln())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    /// Fixed truncation, sweep of step sizes.
    Time,
    /// Fixed step size, sweep of truncations.
    Space,
}

impl Ladder {
    pub fn tag(self) -> &'static str {
        match self {
            Self::Time => "time",
            Self::Space => "space",
        }
    }

    pub fn from_tag(tag: &str) -> Result<Self> {
        match tag {
            "time" => Ok(Self::Time),
            "space" => Ok(Self::Space),
            other => Err(Error::Config(format!("unknown ladder `{other}`"))),
        }
    }

    fn param_name(self) -> &'static str {
        match self {
            Self::Time => "tau",
            Self::Space => "N",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    /// Step size for time ladders, truncation for space ladders.
    pub param: f64,
    pub error: Option<f64>,
    pub order: Option<f64>,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable {
    pub problem: String,
    pub ladder: Ladder,
    /// The parameter held fixed, e.g. `N=50` or `n=1600`.
    pub fixed: String,
    pub rows: Vec<TableRow>,
}

fn fmt_error(e: f64) -> String {
    format!("{e:.5e}")
}

fn fmt_order(o: f64) -> String {
    format!("{o:.3}")
}

impl ConvergenceTable {
    /// Fill the order column: C-O between adjacent rows for time ladders,
    /// A-O per row for space ladders.
    pub fn with_orders(problem: String, ladder: Ladder, fixed: String, results: Vec<(f64, Result<f64>)>, horizon: f64) -> Self {
        let mut rows: Vec<TableRow> = results
            .into_iter()
            .map(|(param, r)| match r {
                Ok(e) => TableRow { param, error: Some(e), order: None, failure: None },
                Err(err) => TableRow { param, error: None, order: None, failure: Some(err.to_string()) },
            })
            .collect();
        match ladder {
            Ladder::Time => {
                for i in 1..rows.len() {
                    if let (Some(e1), Some(e2)) = (rows[i - 1].error, rows[i].error) {
                        let m1 = (horizon / rows[i - 1].param).round();
                        let m2 = (horizon / rows[i].param).round();
                        rows[i].order = co_rate(e1, e2, m1, m2);
                    }
                }
            }
            Ladder::Space => {
                for row in &mut rows {
                    row.order = row.error.and_then(|e| ao_rate(e, row.param as usize));
                }
            }
        }
        Self { problem, ladder, fixed, rows }
    }

    pub fn last_order(&self) -> Option<f64> {
        self.rows.last().and_then(|r| r.order)
    }

    pub fn errors(&self) -> Vec<Option<f64>> {
        self.rows.iter().map(|r| r.error).collect()
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# problem = {}", self.problem)?;
        writeln!(out, "# ladder = {}", self.ladder.tag())?;
        writeln!(out, "# param = {}", self.ladder.param_name())?;
        writeln!(out, "# fixed = {}", self.fixed)?;
        for row in &self.rows {
            if let Some(msg) = &row.failure {
                writeln!(out, "# failed {} = {}: {}", self.ladder.param_name(), row.param, msg.replace('\n', " "))?;
            }
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["param", "error", "order"])?;
        for row in &self.rows {
            w.write_record([
                row.param.to_string(),
                row.error.map(fmt_error).unwrap_or_default(),
                row.order.map(fmt_order).unwrap_or_default(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
    }

    /// Parse the output of [`ConvergenceTable::write_csv`]. Values come back
    /// at their printed precision.
    pub fn read_csv<R: Read>(mut input: R) -> Result<Self> {
        let mut text = String::new();
        input.read_to_string(&mut text)?;
        let mut problem = String::new();
        let mut ladder = None;
        let mut fixed = String::new();
        let mut failures = Vec::new();
        for line in text.lines().filter_map(|l| l.strip_prefix("# ")) {
            if let Some(rest) = line.strip_prefix("failed ") {
                let (lhs, msg) = rest.split_once(": ").unwrap_or((rest, ""));
                let param = lhs.split_once(" = ").map(|(_, v)| v).unwrap_or(lhs);
                failures.push((param.to_string(), msg.to_string()));
            } else if let Some((k, v)) = line.split_once(" = ") {
                match k {
                    "problem" => problem = v.to_string(),
                    "ladder" => ladder = Some(Ladder::from_tag(v)?),
                    "fixed" => fixed = v.to_string(),
                    _ => {}
                }
            }
        }
        let ladder = ladder.ok_or_else(|| Error::Config("table is missing its ladder line".into()))?;
        let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
        let parse = |s: &str| -> Result<Option<f64>> {
            if s.is_empty() {
                Ok(None)
            } else {
                s.parse().map(Some).map_err(|_| Error::Config(format!("bad number `{s}` in table")))
            }
        };
        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record?;
            if record.len() != 3 {
                return Err(Error::Config(format!("expected 3 columns, got {}", record.len())));
            }
            let param_text = &record[0];
            let param = parse(param_text)?.ok_or_else(|| Error::Config("empty parameter".into()))?;
            let failure = failures.iter().find(|(p, _)| p == param_text).map(|(_, m)| m.clone());
            rows.push(TableRow { param, error: parse(&record[1])?, order: parse(&record[2])?, failure });
        }
        Ok(Self { problem, ladder, fixed, rows })
    }

    /// The table with errors and orders rounded to their printed precision.
    pub fn rounded(&self) -> Self {
        let mut out = self.clone();
        for row in &mut out.rows {
            row.error = row.error.map(|e| fmt_error(e).parse().expect("formatted float"));
            row.order = row.order.map(|o| fmt_order(o).parse().expect("formatted float"));
            row.failure = row.failure.as_ref().map(|m| m.replace('\n', " "));
        }
        out
    }
}

impl fmt::Display for ConvergenceTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let order_name = match self.ladder {
            Ladder::Time => "C-O",
            Ladder::Space => "A-O",
        };
        writeln!(f, "{} {} ladder, {}", self.problem, self.ladder.tag(), self.fixed)?;
        writeln!(f, "{:>10}  {:>12}  {:>8}", self.ladder.param_name(), "E", order_name)?;
        for row in &self.rows {
            let e = row.error.map(fmt_error).unwrap_or_else(|| "failed".into());
            let o = row.order.map(fmt_order).unwrap_or_else(|| "--".into());
            writeln!(f, "{:>10}  {:>12}  {:>8}", row.param, e, o)?;
        }
        Ok(())
    }
}
