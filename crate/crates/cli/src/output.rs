//! Command results: a JSON value, an optional table for `--csv`, and the
//! exit status.

use serde_json::Value;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            _ => 1,
        }
    }
}

pub fn input(msg: impl std::fmt::Display) -> CliError {
    CliError::Input(msg.to_string())
}

pub fn failed(msg: impl std::fmt::Display) -> CliError {
    CliError::Failed(msg.to_string())
}

pub const EXIT_MISMATCH: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Table {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for line in std::iter::once(&self.header).chain(&self.rows) {
            let cells: Vec<String> = line.iter().map(|c| csv_cell(c)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

fn csv_cell(c: &str) -> String {
    if c.contains([',', '"', '\n']) {
        format!("\"{}\"", c.replace('"', "\"\""))
    } else {
        c.to_string()
    }
}

#[derive(Clone, Debug)]
pub struct Output {
    pub json: Value,
    pub table: Option<Table>,
    pub status: i32,
}

impl Output {
    pub fn json(json: Value) -> Output {
        Output { json, table: None, status: 0 }
    }

    pub fn with_table(mut self, t: Table) -> Output {
        self.table = Some(t);
        self
    }

    pub fn with_status(mut self, s: i32) -> Output {
        self.status = s;
        self
    }

    /// Commands without their own table print `key,value` rows of the
    /// top-level fields; nested values are written as JSON.
    pub fn render(&self, csv: bool) -> String {
        if !csv {
            return serde_json::to_string_pretty(&self.json).unwrap() + "\n";
        }
        if let Some(t) = &self.table {
            return t.to_csv();
        }
        let mut t = Table::new(&["key", "value"]);
        if let Value::Object(m) = &self.json {
            for (k, v) in m {
                let s = match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                t.rows.push(vec![k.clone(), s]);
            }
        }
        t.to_csv()
    }
}
