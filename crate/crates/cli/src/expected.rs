//! Expected-value files for `table --expected`.
//!
//! Tab-separated text in sections:
//!
//! ```text
//! [upper]
//! #tol 0.005
//! S1	S2	M1	M2	Sub12	Sub21	SimJ
//! GrannySmith	Apple	0.0042+-0.00005	0.1048+-0.00005	1.0000+-0.000001	0.1171	0.2570
//! [betweenness]
//! #tol 0.02
//! S1	S2	S3	Bsoft	Bint
//! Lemon	Apple	Orange	0.0000+-0.000001	0.8623
//! ```
//!
//! A cell is `value` or `value+-tolerance`; bare values take the most recent
//! `#tol` of their section. A `-` cell is not compared. Other `#` lines and
//! blank lines are ignored.

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Context, Result};

pub const UPPER_COLUMNS: [&str; 6] = ["M1", "M2", "Sub12", "Sub21", "SimJ", "SimJ21"];
pub const BETWEEN_COLUMNS: [&str; 2] = ["Bsoft", "Bint"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub value: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub line: usize,
    pub names: Vec<String>,
    pub cells: BTreeMap<String, Cell>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Expected {
    pub upper: Vec<Row>,
    pub betweenness: Vec<Row>,
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    Upper,
    Betweenness,
}

impl Section {
    fn keys(self) -> usize {
        match self {
            Section::Upper => 2,
            Section::Betweenness => 3,
        }
    }

    fn columns(self) -> &'static [&'static str] {
        match self {
            Section::Upper => &UPPER_COLUMNS,
            Section::Betweenness => &BETWEEN_COLUMNS,
        }
    }
}

pub fn parse(text: &str) -> Result<Expected> {
    let mut out = Expected::default();
    let mut section = None;
    let mut header: Option<Vec<String>> = None;
    let mut tol = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("#tol") {
            let t: f64 = rest
                .trim()
                .parse()
                .with_context(|| format!("line {line_no}: bad #tol value"))?;
            tol = Some(t);
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        match line {
            "[upper]" => {
                section = Some(Section::Upper);
                header = None;
                tol = None;
                continue;
            }
            "[betweenness]" => {
                section = Some(Section::Betweenness);
                header = None;
                tol = None;
                continue;
            }
            _ if line.starts_with('[') => bail!("line {line_no}: unknown section {line}"),
            _ => {}
        }
        let sec = section.ok_or_else(|| anyhow!("line {line_no}: data before any section"))?;
        let fields: Vec<&str> = raw.split('\t').map(str::trim).collect();
        let Some(head) = &header else {
            for col in &fields[sec.keys().min(fields.len())..] {
                if !sec.columns().contains(col) {
                    bail!("line {line_no}: unknown column `{col}`");
                }
            }
            header = Some(fields.iter().map(|f| f.to_string()).collect());
            continue;
        };
        if fields.len() != head.len() {
            bail!(
                "line {line_no}: {} fields, header has {}",
                fields.len(),
                head.len()
            );
        }
        let mut cells = BTreeMap::new();
        for (col, field) in head.iter().zip(&fields).skip(sec.keys()) {
            if *field == "-" {
                continue;
            }
            let cell =
                parse_cell(field, tol).with_context(|| format!("line {line_no}: column {col}"))?;
            cells.insert(col.clone(), cell);
        }
        let row = Row {
            line: line_no,
            names: fields[..sec.keys()].iter().map(|f| f.to_string()).collect(),
            cells,
        };
        match sec {
            Section::Upper => out.upper.push(row),
            Section::Betweenness => out.betweenness.push(row),
        }
    }
    Ok(out)
}

fn parse_cell(field: &str, default_tol: Option<f64>) -> Result<Cell> {
    let (value, tolerance) = match field.split_once("+-") {
        Some((v, t)) => (v, Some(t.parse::<f64>().context("bad tolerance")?)),
        None => (field, default_tol),
    };
    let value: f64 = value
        .parse()
        .with_context(|| format!("bad value `{value}`"))?;
    let tolerance = tolerance.ok_or_else(|| anyhow!("no tolerance given and no #tol in effect"))?;
    if !(tolerance >= 0.0 && tolerance.is_finite()) {
        bail!("tolerance must be a finite non-negative number");
    }
    Ok(Cell { value, tolerance })
}
