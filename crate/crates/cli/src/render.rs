//! Tables and their text, CSV and JSON renderings.

use num_complex::Complex64;
use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Number(f64),
    Complex(Complex64),
    /// A gross probability and the net probability it becomes.
    Transition {
        gross: f64,
        net: f64,
    },
    Text(String),
    Empty,
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Number(x) => serializer.serialize_f64(*x),
            Cell::Complex(z) => {
                let mut seq = serializer.serialize_seq(Some(2))?;
                seq.serialize_element(&z.re)?;
                seq.serialize_element(&z.im)?;
                seq.end()
            }
            Cell::Transition { gross, net } => {
                let mut map = serializer.serialize_map(Some(2))?;
                map.serialize_entry("gross", gross)?;
                map.serialize_entry("net", net)?;
                map.end()
            }
            Cell::Text(s) => serializer.serialize_str(s),
            Cell::Empty => serializer.serialize_none(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub label: String,
    pub cells: Vec<Cell>,
}

/// A labelled grid. Every row has exactly one cell per column.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RenderedTable {
    pub caption: String,
    pub row_header: String,
    pub columns: Vec<String>,
    pub rows: Vec<Row>,
}

impl RenderedTable {
    pub fn new<S: Into<String>>(
        caption: impl Into<String>,
        row_header: impl Into<String>,
        columns: impl IntoIterator<Item = S>,
    ) -> Self {
        Self {
            caption: caption.into(),
            row_header: row_header.into(),
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    /// Appends a row; panics if the cell count differs from the column count.
    pub fn push(&mut self, label: impl Into<String>, cells: Vec<Cell>) {
        assert_eq!(
            cells.len(),
            self.columns.len(),
            "row width must match the column count"
        );
        self.rows.push(Row {
            label: label.into(),
            cells,
        });
    }

    pub fn cell_count(&self) -> usize {
        self.rows.iter().map(|r| r.cells.len()).sum()
    }

    /// The cell at (`row`, `column`) addressed by labels.
    pub fn get(&self, row: &str, column: &str) -> Option<&Cell> {
        let j = self.columns.iter().position(|c| c == column)?;
        self.rows
            .iter()
            .find(|r| r.label == row)
            .map(|r| &r.cells[j])
    }
}

/// The output of one command: a title, tables, and free-form notes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub scenario: String,
    pub tables: Vec<RenderedTable>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

/// Decimal with at most `precision` fractional digits, trailing zeros
/// trimmed, and no negative zero.
pub fn decimal(x: f64, precision: usize) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let s = format!("{x:.precision$}");
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

fn complex_text(z: Complex64, precision: usize) -> String {
    let re = decimal(z.re, precision);
    let im = decimal(z.im, precision);
    if im == "0" {
        re
    } else if let Some(magnitude) = im.strip_prefix('-') {
        format!("{re}-{magnitude}i")
    } else {
        format!("{re}+{im}i")
    }
}

fn cell_text(cell: &Cell, precision: usize) -> String {
    match cell {
        Cell::Number(x) => decimal(*x, precision),
        Cell::Complex(z) => complex_text(*z, precision),
        Cell::Transition { gross, net } => {
            format!(
                "{} → {}",
                decimal(*gross, precision),
                decimal(*net, precision)
            )
        }
        Cell::Text(s) => s.clone(),
        Cell::Empty => String::new(),
    }
}

fn width(s: &str) -> usize {
    s.chars().count()
}

fn pad(s: &str, w: usize, left: bool) -> String {
    let fill = " ".repeat(w.saturating_sub(width(s)));
    if left {
        format!("{s}{fill}")
    } else {
        format!("{fill}{s}")
    }
}

fn table_text(table: &RenderedTable, precision: usize, out: &mut String) {
    let body: Vec<Vec<String>> = table
        .rows
        .iter()
        .map(|r| r.cells.iter().map(|c| cell_text(c, precision)).collect())
        .collect();
    // text columns align left, numeric ones right
    let left: Vec<bool> = (0..table.columns.len())
        .map(|j| {
            !table.rows.is_empty()
                && table
                    .rows
                    .iter()
                    .all(|r| matches!(r.cells[j], Cell::Text(_) | Cell::Empty))
        })
        .collect();
    let first = table
        .rows
        .iter()
        .map(|r| width(&r.label))
        .chain([width(&table.row_header)])
        .max()
        .unwrap_or(0);
    let widths: Vec<usize> = table
        .columns
        .iter()
        .enumerate()
        .map(|(j, h)| {
            body.iter()
                .map(|r| width(&r[j]))
                .chain([width(h)])
                .max()
                .unwrap_or(0)
        })
        .collect();
    out.push_str(&table.caption);
    out.push('\n');
    let mut header = pad(&table.row_header, first, true);
    for ((h, w), l) in table.columns.iter().zip(&widths).zip(&left) {
        header.push_str("  ");
        header.push_str(&pad(h, *w, *l));
    }
    out.push_str(header.trim_end());
    out.push('\n');
    for (row, cells) in table.rows.iter().zip(&body) {
        let mut line = pad(&row.label, first, true);
        for ((c, w), l) in cells.iter().zip(&widths).zip(&left) {
            line.push_str("  ");
            line.push_str(&pad(c, *w, *l));
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
}

pub fn to_text(report: &Report, precision: usize) -> String {
    let mut out = format!("{}: {}\n", report.command, report.scenario);
    for table in &report.tables {
        out.push('\n');
        table_text(table, precision, &mut out);
    }
    if !report.notes.is_empty() {
        out.push('\n');
        for note in &report.notes {
            out.push_str("note: ");
            out.push_str(note);
            out.push('\n');
        }
    }
    out
}

/// Long-form CSV: one record per numeric value, at round-trip precision.
/// Complex cells yield `.re` and `.im` records, transitions `.gross` and
/// `.net` records.
pub fn to_csv(report: &Report) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut write = |fields: [&str; 4]| w.write_record(fields).expect("writing to memory");
    write(["table", "row", "column", "value"]);
    for table in &report.tables {
        for row in &table.rows {
            for (column, cell) in table.columns.iter().zip(&row.cells) {
                let base = [table.caption.as_str(), row.label.as_str()];
                match cell {
                    Cell::Number(x) => write([base[0], base[1], column, &x.to_string()]),
                    Cell::Complex(z) => {
                        write([base[0], base[1], &format!("{column}.re"), &z.re.to_string()]);
                        write([base[0], base[1], &format!("{column}.im"), &z.im.to_string()]);
                    }
                    Cell::Transition { gross, net } => {
                        write([
                            base[0],
                            base[1],
                            &format!("{column}.gross"),
                            &gross.to_string(),
                        ]);
                        write([base[0], base[1], &format!("{column}.net"), &net.to_string()]);
                    }
                    Cell::Text(s) => write([base[0], base[1], column, s]),
                    Cell::Empty => {}
                }
            }
        }
    }
    for note in &report.notes {
        write(["note", "", "", note]);
    }
    String::from_utf8(w.into_inner().expect("flushing to memory")).expect("csv output is utf-8")
}

pub fn to_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s
}

pub fn render(report: &Report, format: Format, precision: usize) -> String {
    match format {
        Format::Text => to_text(report, precision),
        Format::Csv => to_csv(report),
        Format::Json => to_json(report),
    }
}
