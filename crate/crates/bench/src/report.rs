//! CSV and Markdown renderings of benchmark records.

use std::fmt::Write as _;

use spatial_trees::{Family, SplitStrategy};

use crate::error::BenchError;
use crate::scenario::BenchRecord;

pub const CSV_HEADER: [&str; 13] = [
    "family",
    "strategy",
    "depth",
    "capacity",
    "degree",
    "n",
    "radius",
    "runs",
    "seed",
    "insert_ms",
    "search_ms",
    "total_ms",
    "pair_count",
];

/// Marker written in the timing columns of cells that were not run.
pub const NOT_RUN: &str = "not-run";

/// Columns under which timing may vary between otherwise identical runs.
pub const TIMING_COLUMNS: [&str; 3] = ["insert_ms", "search_ms", "total_ms"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Markdown,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "markdown" | "md" => Ok(Format::Markdown),
            other => Err(format!("unknown format `{other}`")),
        }
    }
}

/// The fields of one CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub family: Family,
    pub strategy: Option<SplitStrategy>,
    pub depth: Option<u32>,
    pub capacity: Option<usize>,
    pub degree: Option<usize>,
    pub n: usize,
    pub radius: f64,
    pub runs: usize,
    pub seed: u64,
    /// `(insert_ms, search_ms, total_ms, pair_count)`, `None` when not run.
    pub result: Option<(f64, f64, f64, usize)>,
}

impl From<&BenchRecord> for CsvRow {
    fn from(rec: &BenchRecord) -> Self {
        let t = &rec.spec.tree;
        let decomposition = t.family.is_decomposition();
        CsvRow {
            family: t.family,
            strategy: (t.family == Family::KdTree).then_some(t.split),
            depth: decomposition.then_some(t.max_depth),
            capacity: decomposition.then_some(t.node_capacity),
            degree: (t.family == Family::RTree).then_some(t.degree),
            n: rec.spec.n,
            radius: rec.spec.radius,
            runs: rec.spec.runs,
            seed: rec.spec.seed,
            result: rec
                .measurement
                .as_ref()
                .map(|m| (m.insert_ms, m.search_ms, m.total_ms(), m.pair_count)),
        }
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl CsvRow {
    pub fn fields(&self) -> Vec<String> {
        let mut out = vec![
            self.family.to_string(),
            opt(self.strategy),
            opt(self.depth),
            opt(self.capacity),
            opt(self.degree),
            self.n.to_string(),
            self.radius.to_string(),
            self.runs.to_string(),
            self.seed.to_string(),
        ];
        match self.result {
            Some((ins, search, total, pairs)) => out.extend([
                ins.to_string(),
                search.to_string(),
                total.to_string(),
                pairs.to_string(),
            ]),
            None => out.extend(std::iter::repeat_n(NOT_RUN.to_string(), 4)),
        }
        out
    }
}

pub fn csv_writer<W: std::io::Write>(out: W) -> Result<csv::Writer<W>, BenchError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    Ok(w)
}

pub fn write_csv_row<W: std::io::Write>(
    w: &mut csv::Writer<W>,
    rec: &BenchRecord,
) -> Result<(), BenchError> {
    w.write_record(CsvRow::from(rec).fields())?;
    w.flush()?;
    Ok(())
}

pub fn to_csv(records: &[BenchRecord]) -> Result<String, BenchError> {
    if records.is_empty() {
        return Err(BenchError::EmptyInput);
    }
    let mut w = csv_writer(Vec::new())?;
    for rec in records {
        write_csv_row(&mut w, rec)?;
    }
    let bytes = w.into_inner().map_err(|e| BenchError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn parse_field<T: std::str::FromStr>(s: &str, column: &str) -> Result<T, BenchError> {
    s.trim()
        .parse()
        .map_err(|_| BenchError::InvalidGrid(format!("bad value `{s}` in column {column}")))
}

fn parse_opt<T: std::str::FromStr>(s: &str, column: &str) -> Result<Option<T>, BenchError> {
    if s.trim().is_empty() {
        Ok(None)
    } else {
        parse_field(s, column).map(Some)
    }
}

/// Parses CSV produced by [`to_csv`].
pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>, BenchError> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader.headers()?.clone();
    if header.iter().collect::<Vec<_>>() != CSV_HEADER {
        return Err(BenchError::InvalidGrid("unexpected report header".into()));
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let r = record?;
        let f = |i: usize| r.get(i).unwrap_or("");
        let family = f(0).parse::<Family>().map_err(BenchError::InvalidGrid)?;
        let strategy = if f(1).is_empty() {
            None
        } else {
            Some(
                f(1).parse::<SplitStrategy>()
                    .map_err(BenchError::InvalidGrid)?,
            )
        };
        let result = if f(9) == NOT_RUN {
            None
        } else {
            Some((
                parse_field(f(9), "insert_ms")?,
                parse_field(f(10), "search_ms")?,
                parse_field(f(11), "total_ms")?,
                parse_field(f(12), "pair_count")?,
            ))
        };
        rows.push(CsvRow {
            family,
            strategy,
            depth: parse_opt(f(2), "depth")?,
            capacity: parse_opt(f(3), "capacity")?,
            degree: parse_opt(f(4), "degree")?,
            n: parse_field(f(5), "n")?,
            radius: parse_field(f(6), "radius")?,
            runs: parse_field(f(7), "runs")?,
            seed: parse_field(f(8), "seed")?,
            result,
        });
    }
    Ok(rows)
}

/// Insertion table, one search table per radius, and a total table for the
/// largest `n` with one column per radius.
pub fn to_markdown(records: &[BenchRecord]) -> Result<String, BenchError> {
    if records.is_empty() {
        return Err(BenchError::EmptyInput);
    }
    let mut labels: Vec<String> = Vec::new();
    let mut sizes: Vec<usize> = Vec::new();
    let mut radii: Vec<f64> = Vec::new();
    for rec in records {
        let label = rec.spec.label();
        if !labels.contains(&label) {
            labels.push(label);
        }
        if !sizes.contains(&rec.spec.n) {
            sizes.push(rec.spec.n);
        }
        if !radii.contains(&rec.spec.radius) {
            radii.push(rec.spec.radius);
        }
    }
    sizes.sort_unstable();

    let find = |label: &str, n: usize, radius: Option<f64>| {
        records.iter().find_map(|rec| {
            let hit = rec.spec.n == n
                && radius.is_none_or(|r| rec.spec.radius == r)
                && rec.spec.label() == label;
            if hit {
                rec.measurement.as_ref()
            } else {
                None
            }
        })
    };
    let cell = |v: Option<f64>| v.map(|x| format!("{x:.2}")).unwrap_or_default();

    let mut out = String::new();
    let table =
        |out: &mut String, title: &str, columns: &[String], rows: Vec<(String, Vec<String>)>| {
            let _ = writeln!(out, "### {title}\n");
            let _ = writeln!(out, "| Tree(depth, capacity) | {} |", columns.join(" | "));
            let _ = writeln!(out, "|---|{}", "---:|".repeat(columns.len()));
            for (label, cells) in rows {
                let _ = writeln!(out, "| {label} | {} |", cells.join(" | "));
            }
            out.push('\n');
        };
    let size_cols: Vec<String> = sizes.iter().map(|n| n.to_string()).collect();

    let rows = labels
        .iter()
        .map(|l| {
            let cells = sizes
                .iter()
                .map(|&n| cell(find(l, n, None).map(|m| m.insert_ms)))
                .collect();
            (l.clone(), cells)
        })
        .collect();
    table(&mut out, "Insertion time, ms", &size_cols, rows);

    for &r in &radii {
        let rows = labels
            .iter()
            .map(|l| {
                let cells = sizes
                    .iter()
                    .map(|&n| cell(find(l, n, Some(r)).map(|m| m.search_ms)))
                    .collect();
                (l.clone(), cells)
            })
            .collect();
        table(
            &mut out,
            &format!("Searching time within distance {r}, ms"),
            &size_cols,
            rows,
        );
    }

    let largest = *sizes.last().expect("non-empty");
    let radius_cols: Vec<String> = radii.iter().map(|r| format!("Distance {r}")).collect();
    let rows = labels
        .iter()
        .map(|l| {
            let cells = radii
                .iter()
                .map(|&r| cell(find(l, largest, Some(r)).map(|m| m.total_ms())))
                .collect();
            (l.clone(), cells)
        })
        .collect();
    table(
        &mut out,
        &format!("Total insertion + searching time for {largest} objects, ms"),
        &radius_cols,
        rows,
    );
    Ok(out)
}

pub fn emit_report(records: &[BenchRecord], format: Format) -> Result<String, BenchError> {
    match format {
        Format::Csv => to_csv(records),
        Format::Markdown => to_markdown(records),
    }
}
