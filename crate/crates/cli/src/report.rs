use std::io::Write;

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub id: String,
    pub module: &'static str,
    pub verdict: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Check {
    pub fn new(module: &'static str, id: impl Into<String>, passed: bool, witness: impl FnOnce() -> String) -> Self {
        Check {
            id: id.into(),
            module,
            verdict: if passed { Outcome::Pass } else { Outcome::Fail },
            witness: (!passed).then(witness),
        }
    }

    pub fn inconclusive(module: &'static str, id: impl Into<String>, why: String) -> Self {
        Check { id: id.into(), module, verdict: Outcome::Inconclusive, witness: Some(why) }
    }
}

/// Rows for CSV and table output.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub status: Outcome,
    pub checks: Vec<Check>,
    pub data: Value,
    #[serde(skip)]
    pub table: Option<Table>,
    /// Pretty form shown by the table renderer above the rows.
    #[serde(skip)]
    pub summary: Option<String>,
}

impl Report {
    pub fn new(command: impl Into<String>, data: Value, checks: Vec<Check>) -> Self {
        let status = if checks.iter().any(|c| c.verdict == Outcome::Fail) {
            Outcome::Fail
        } else if checks.iter().any(|c| c.verdict == Outcome::Inconclusive) {
            Outcome::Inconclusive
        } else {
            Outcome::Pass
        };
        Report { command: command.into(), status, checks, data, table: None, summary: None }
    }

    pub fn with_table(mut self, t: Table) -> Self {
        self.table = Some(t);
        self
    }

    pub fn with_summary(mut self, s: String) -> Self {
        self.summary = Some(s);
        self
    }

    pub fn exit_code(&self) -> i32 {
        match self.status {
            Outcome::Pass => 0,
            Outcome::Fail => 3,
            Outcome::Inconclusive => 5,
        }
    }

    fn check_table(&self) -> Table {
        let mut t = Table::new(&["id", "module", "verdict", "witness"]);
        for c in &self.checks {
            let v = serde_json::to_value(c.verdict).unwrap();
            t.push(vec![
                c.id.clone(),
                c.module.to_string(),
                v.as_str().unwrap_or_default().to_string(),
                c.witness.clone().unwrap_or_default(),
            ]);
        }
        t
    }

    pub fn render(&self, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, self)?;
                writeln!(out)
            }
            Format::Csv => {
                let table = self.table.clone().unwrap_or_else(|| self.check_table());
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&table.header)?;
                for r in &table.rows {
                    w.write_record(r)?;
                }
                w.flush()
            }
            Format::Table => {
                if let Some(s) = &self.summary {
                    writeln!(out, "{s}")?;
                }
                if let Some(t) = &self.table {
                    write_fixed(out, t)?;
                }
                if !self.checks.is_empty() {
                    write_fixed(out, &self.check_table())?;
                }
                let v = serde_json::to_value(self.status).unwrap();
                writeln!(out, "status: {}", v.as_str().unwrap_or_default())
            }
        }
    }
}

fn write_fixed(out: &mut dyn Write, t: &Table) -> std::io::Result<()> {
    let mut widths: Vec<usize> = t.header.iter().map(|h| h.len()).collect();
    for r in &t.rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: &[String]| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    writeln!(out, "{}", line(&t.header))?;
    writeln!(out, "{}", widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("  "))?;
    for r in &t.rows {
        writeln!(out, "{}", line(r))?;
    }
    Ok(())
}
