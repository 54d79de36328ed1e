//! Report rows and their two on-disk formats. The CSV layout is bit-exact:
//! one header, full-decimal numbers, empty cells for a failed n. JSON is an
//! array with one compact object per line. Scan output and whole-slice
//! emission share the same line formatters, so the bytes agree.

use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::witness::{audit_record, WitnessKind, WitnessRecord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

pub const CSV_HEADER: &str = "n,kind,y,x,value1,omega1,value2,omega2\n";

/// A scanned n: either a full witness or a failure marker with empty cells.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordRow {
    pub n: u64,
    pub kind: WitnessKind,
    pub y: Option<u64>,
    pub x: Option<u64>,
    pub value1: Option<u128>,
    pub omega1: Option<u32>,
    pub value2: Option<u128>,
    pub omega2: Option<u32>,
}

impl RecordRow {
    pub fn witness(rec: WitnessRecord) -> Self {
        RecordRow {
            n: rec.n,
            kind: rec.kind,
            y: Some(rec.y),
            x: Some(rec.x),
            value1: Some(rec.value1),
            omega1: Some(rec.omega1),
            value2: Some(rec.value2),
            omega2: Some(rec.omega2),
        }
    }

    pub fn failure(n: u64, kind: WitnessKind) -> Self {
        RecordRow {
            n,
            kind,
            y: None,
            x: None,
            value1: None,
            omega1: None,
            value2: None,
            omega2: None,
        }
    }

    pub fn is_failure(&self) -> bool {
        self.y.is_none()
    }

    pub fn to_witness(&self) -> Option<WitnessRecord> {
        Some(WitnessRecord {
            n: self.n,
            kind: self.kind,
            y: self.y?,
            x: self.x?,
            value1: self.value1?,
            omega1: self.omega1?,
            value2: self.value2?,
            omega2: self.omega2?,
        })
    }
}

fn opt<T: std::fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

pub fn csv_line(row: &RecordRow) -> String {
    format!(
        "{},{},{},{},{},{},{},{}\n",
        row.n,
        row.kind,
        opt(&row.y),
        opt(&row.x),
        opt(&row.value1),
        opt(&row.omega1),
        opt(&row.value2),
        opt(&row.omega2),
    )
}

/// One array entry, indented, with a trailing comma the array closer
/// later overwrites.
pub fn json_line(row: &RecordRow) -> String {
    let body = serde_json::to_string(row).expect("row serializes");
    format!("  {body},\n")
}

fn parse_csv_field<T: std::str::FromStr>(field: &str, line_no: usize) -> Result<Option<T>>
where
    T::Err: std::fmt::Display,
{
    if field.is_empty() {
        return Ok(None);
    }
    match field.parse() {
        Ok(v) => Ok(Some(v)),
        Err(e) => bail!("line {line_no}: bad field {field:?}: {e}"),
    }
}

pub fn parse_csv(reader: impl Read) -> Result<Vec<RecordRow>> {
    let mut rows = Vec::new();
    for (i, line) in BufReader::new(reader).lines().enumerate() {
        let line = line?;
        if i == 0 {
            if line != CSV_HEADER.trim_end() {
                bail!("unexpected CSV header {line:?}");
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 8 {
            bail!("line {}: expected 8 fields, got {}", i + 1, fields.len());
        }
        rows.push(RecordRow {
            n: fields[0].parse().with_context(|| format!("line {}", i + 1))?,
            kind: fields[1]
                .parse()
                .map_err(|e: String| anyhow::anyhow!("line {}: {e}", i + 1))?,
            y: parse_csv_field(fields[2], i + 1)?,
            x: parse_csv_field(fields[3], i + 1)?,
            value1: parse_csv_field(fields[4], i + 1)?,
            omega1: parse_csv_field(fields[5], i + 1)?,
            value2: parse_csv_field(fields[6], i + 1)?,
            omega2: parse_csv_field(fields[7], i + 1)?,
        });
    }
    Ok(rows)
}

pub fn read_report(path: &Path, format: Format) -> Result<Vec<RecordRow>> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    match format {
        Format::Csv => parse_csv(file),
        Format::Json => serde_json::from_reader(BufReader::new(file))
            .with_context(|| format!("parsing {}", path.display())),
    }
}

/// Writes a complete record set to path in the given format.
pub fn emit_report(records: &[RecordRow], format: Format, path: &Path) -> Result<()> {
    let mut out = Vec::new();
    write_full(records, format, &mut out);
    std::fs::write(path, out).with_context(|| format!("writing {}", path.display()))
}

pub fn write_full(records: &[RecordRow], format: Format, out: &mut Vec<u8>) {
    match format {
        Format::Csv => {
            out.extend_from_slice(CSV_HEADER.as_bytes());
            for row in records {
                out.extend_from_slice(csv_line(row).as_bytes());
            }
        }
        Format::Json => {
            if records.is_empty() {
                out.extend_from_slice(b"[]\n");
                return;
            }
            out.extend_from_slice(b"[\n");
            for row in records {
                out.extend_from_slice(json_line(row).as_bytes());
            }
            // replace the last ",\n" with the array closer
            out.truncate(out.len() - 2);
            out.extend_from_slice(b"\n]\n");
        }
    }
}

#[derive(Debug, Serialize)]
pub struct AuditOutcome {
    pub rows: usize,
    pub witnesses: usize,
    pub failures: usize,
    pub mismatches: Vec<u64>,
}

/// Re-derives every witness row from (n, y) and reports the n whose rows
/// do not reproduce.
pub fn audit_rows(rows: &[RecordRow]) -> AuditOutcome {
    let mut outcome = AuditOutcome {
        rows: rows.len(),
        witnesses: 0,
        failures: 0,
        mismatches: Vec::new(),
    };
    for row in rows {
        if row.is_failure() {
            outcome.failures += 1;
            continue;
        }
        outcome.witnesses += 1;
        let ok = row.to_witness().map(|w| audit_record(&w)).unwrap_or(false);
        if !ok {
            outcome.mismatches.push(row.n);
        }
    }
    outcome
}

pub fn audit_file(path: &Path, format: Format) -> Result<AuditOutcome> {
    Ok(audit_rows(&read_report(path, format)?))
}
