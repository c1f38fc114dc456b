//! Tabular output rendered as TSV or JSON.

use serde_json::{json, Map, Value};

#[derive(Debug, Clone)]
pub enum Cell {
    Text(String),
    /// A number and the decimals shown in TSV; JSON keeps full precision.
    Num(f64, usize),
    /// A number shown in scientific notation in TSV.
    Sci(f64),
    Flag(bool),
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    fn tsv(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Num(v, p) => format!("{v:.p$}"),
            Cell::Sci(v) => format!("{v:.3e}"),
            Cell::Flag(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            // NaN and infinities have no JSON form.
            Cell::Num(v, _) | Cell::Sci(v) if !v.is_finite() => Value::String(v.to_string()),
            Cell::Num(v, _) | Cell::Sci(v) => json!(v),
            Cell::Flag(b) => Value::Bool(*b),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Everything one command prints.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    /// Seed and flags, echoed for reproducibility.
    pub params: Vec<(String, String)>,
    pub tables: Vec<Table>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(command: &str, params: Vec<(String, String)>) -> Self {
        Self {
            command: command.to_string(),
            params,
            tables: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn tsv(&self) -> String {
        let mut out = format!("# conspace {}", self.command);
        for (k, v) in &self.params {
            out.push_str(&format!(" {k}={v}"));
        }
        out.push('\n');
        for t in &self.tables {
            out.push_str(&format!("[{}]\n", t.name));
            out.push_str(&t.columns.join("\t"));
            out.push('\n');
            for row in &t.rows {
                let cells: Vec<String> = row.iter().map(Cell::tsv).collect();
                out.push_str(&cells.join("\t"));
                out.push('\n');
            }
        }
        for n in &self.notes {
            out.push_str(&format!("# {n}\n"));
        }
        out
    }

    pub fn json(&self) -> String {
        let params: Map<String, Value> = self
            .params
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect();
        let tables: Map<String, Value> = self
            .tables
            .iter()
            .map(|t| {
                let rows: Vec<Value> = t
                    .rows
                    .iter()
                    .map(|r| {
                        let obj: Map<String, Value> = t
                            .columns
                            .iter()
                            .cloned()
                            .zip(r.iter().map(Cell::json))
                            .collect();
                        Value::Object(obj)
                    })
                    .collect();
                (t.name.clone(), Value::Array(rows))
            })
            .collect();
        let doc = json!({
            "command": self.command,
            "params": params,
            "tables": tables,
            "notes": self.notes,
        });
        serde_json::to_string_pretty(&doc).expect("reports always serialize")
    }
}
