//! CSV tables for experiment output.
//!
//! Reals are written as `{:.16e}`, which round-trips every `f64`; two runs
//! that agree bitwise produce identical bytes.

use serde::Serialize;

use super::{BirkhoffTable, ContinuityScan, FrequencyScan, LdtResult, TrigProduct};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

pub fn real(x: f64) -> String {
    format!("{x:.16e}")
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Writes the table, preceded by `# comment` lines if any.
    pub fn write<W: std::io::Write>(&self, mut w: W, comments: &[String]) -> std::io::Result<()> {
        for c in comments {
            writeln!(w, "# {c}")?;
        }
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.header)?;
        for r in &self.rows {
            out.write_record(r)?;
        }
        out.flush()
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write(&mut buf, &[]).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }
}

impl From<&LdtResult> for Table {
    fn from(r: &LdtResult) -> Self {
        let mut t = Table::new(["q", "kappa", "n", "l_n", "empirical_measure", "below_resolution", "max_deviation", "fitted_c"]);
        for d in &r.reports {
            t.push(vec![
                d.q.to_string(),
                real(d.kappa),
                d.n.to_string(),
                real(d.l_n),
                real(d.empirical_measure),
                d.below_resolution.to_string(),
                real(d.max_deviation),
                real(d.fitted_c),
            ]);
        }
        t
    }
}

impl From<&BirkhoffTable> for Table {
    fn from(b: &BirkhoffTable) -> Self {
        let mut t = Table::new(["n", "sup_error", "zero_term", "rate_term", "ratio"]);
        for r in &b.rows {
            t.push(vec![r.n.to_string(), real(r.sup_error), real(r.zero_term), real(r.rate_term), real(r.ratio)]);
        }
        t
    }
}

impl From<&ContinuityScan> for Table {
    fn from(s: &ContinuityScan) -> Self {
        let mut t = Table::new(["parameter", "l", "l_prime", "stderr", "jump"]);
        for (i, (p, v)) in s.parameter_path.iter().zip(&s.le_values).enumerate() {
            let jump = s.candidates.iter().any(|c| c.index == i && c.persistent);
            t.push(vec![real(*p), real(v.l), real(v.l_prime), real(v.stderr), jump.to_string()]);
        }
        t
    }
}

impl From<&FrequencyScan> for Table {
    fn from(s: &FrequencyScan) -> Self {
        let mut t = Table::new(["p", "q", "gap", "gap_prime", "label"]);
        for g in &s.gaps {
            t.push(vec![g.p.to_string(), g.q.to_string(), real(g.gap), real(g.gap_prime), s.label.to_string()]);
        }
        t
    }
}

/// Rows of `(x, x0, product)`.
pub fn trig_table(rows: &[(f64, f64, TrigProduct)]) -> Table {
    let mut t = Table::new(["q", "x", "x0", "k0", "sum", "bound"]);
    for (x, x0, p) in rows {
        t.push(vec![p.q.to_string(), real(*x), real(*x0), p.k0.to_string(), real(p.sum), real(p.bound)]);
    }
    t
}
