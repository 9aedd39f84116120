//! File formats.
//!
//! * Subjects: JSON lines, one object per subject, either
//!   `{"id": .., "label": .., "samples": [..]}` or
//!   `{"id": .., "label": .., "histogram": {"centers": [..], "counts": [..]}}`.
//! * Mesh areas: a CSV manifest `id,label,path` whose paths point to
//!   per-subject CSVs `cell_id,area_t0,area_t1`.
//! * Fitted cohorts: CSV `id,label,x,y`.
//!
//! Parse errors carry the 1-based line number of the offending input line.

use std::collections::HashSet;
use std::fs::{self, File};
use std::io::{BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::{Exclusion, FittedCohort, FittedSubject, SubjectRecord};
use crate::manifold::BetaPoint;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SubjectLine {
    id: String,
    label: String,
    #[serde(default)]
    samples: Option<Vec<f64>>,
    #[serde(default)]
    histogram: Option<HistogramLine>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HistogramLine {
    centers: Vec<f64>,
    counts: Vec<u64>,
}

fn parse_error(line: usize, message: impl ToString) -> Error {
    Error::Parse {
        line,
        message: message.to_string(),
    }
}

/// Reads JSON-lines subjects. Blank lines are skipped; ids must be unique.
pub fn parse_subjects<R: BufRead>(reader: R) -> Result<Vec<SubjectRecord>> {
    let mut records = Vec::new();
    let mut seen = HashSet::new();
    for (index, line) in reader.lines().enumerate() {
        let number = index + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let raw: SubjectLine = serde_json::from_str(&line).map_err(|e| parse_error(number, e))?;
        let record = match (raw.samples, raw.histogram) {
            (Some(samples), None) => SubjectRecord::new(raw.id, raw.label, samples),
            (None, Some(h)) => SubjectRecord::from_histogram(raw.id, raw.label, &h.centers, &h.counts),
            _ => {
                return Err(parse_error(
                    number,
                    "expected exactly one of \"samples\" or \"histogram\"",
                ))
            }
        }
        .map_err(|e| parse_error(number, e))?;
        if !seen.insert(record.id.clone()) {
            return Err(parse_error(number, format!("duplicate subject id {}", record.id)));
        }
        records.push(record);
    }
    Ok(records)
}

pub fn read_subjects(path: &Path) -> Result<Vec<SubjectRecord>> {
    parse_subjects(BufReader::new(File::open(path)?))
}

pub fn write_subjects<W: Write>(mut writer: W, records: &[SubjectRecord]) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut writer, r).map_err(std::io::Error::from)?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}

fn csv_error(e: csv::Error) -> Error {
    if e.is_io_error() {
        if let csv::ErrorKind::Io(io) = e.into_kind() {
            return Error::Io(io);
        }
        unreachable!("checked io error");
    }
    let line = e.position().map_or(0, |p| p.line() as usize);
    parse_error(line, e)
}

/// Deserialized rows paired with their line numbers.
fn numbered_rows<R: Read, T: serde::de::DeserializeOwned>(
    mut csv: csv::Reader<R>,
) -> impl Iterator<Item = Result<(usize, T)>> {
    let headers = csv.headers().cloned().map_err(csv_error);
    let mut rows = csv.into_records();
    let mut failed = false;
    std::iter::from_fn(move || {
        if failed {
            return None;
        }
        let headers = match &headers {
            Ok(h) => h,
            Err(e) => {
                failed = true;
                return Some(Err(parse_error(1, e)));
            }
        };
        let record = match rows.next()? {
            Ok(r) => r,
            Err(e) => return Some(Err(csv_error(e))),
        };
        let line = record.position().map_or(0, |p| p.line() as usize);
        Some(
            record
                .deserialize(Some(headers))
                .map(|row| (line, row))
                .map_err(|e| parse_error(line, e)),
        )
    })
}

#[derive(Deserialize)]
struct AreaRow {
    #[allow(dead_code)]
    cell_id: String,
    area_t0: f64,
    area_t1: f64,
}

#[derive(Deserialize)]
struct ManifestRow {
    id: String,
    label: String,
    path: PathBuf,
}

/// Per-cell areas `(t0, t1)` from a `cell_id,area_t0,area_t1` CSV.
pub fn parse_areas<R: Read>(reader: R) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut csv = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let (mut t0, mut t1) = (Vec::new(), Vec::new());
    for row in csv.deserialize::<AreaRow>() {
        let row = row.map_err(csv_error)?;
        t0.push(row.area_t0);
        t1.push(row.area_t1);
    }
    Ok((t0, t1))
}

/// Area-strain subjects from a manifest CSV `id,label,path`. Relative paths
/// are resolved against the manifest's directory. Errors inside a subject
/// file name that file.
pub fn read_area_manifest(path: &Path) -> Result<Vec<SubjectRecord>> {
    let dir = path.parent().unwrap_or(Path::new("."));
    let csv = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(csv_error)?;
    let mut records = Vec::new();
    let mut seen = HashSet::new();
    for row in numbered_rows::<_, ManifestRow>(csv) {
        let (line, row) = row?;
        let file = dir.join(&row.path);
        let (t0, t1) = File::open(&file)
            .map_err(Error::from)
            .and_then(parse_areas)
            .map_err(|e| parse_error(line, format!("{}: {e}", file.display())))?;
        let record = SubjectRecord::from_areas(row.id, row.label, &t0, &t1).map_err(|e| parse_error(line, e))?;
        if !seen.insert(record.id.clone()) {
            return Err(parse_error(line, format!("duplicate subject id {}", record.id)));
        }
        records.push(record);
    }
    Ok(records)
}

#[derive(Serialize, Deserialize)]
struct CohortRow {
    id: String,
    label: String,
    x: f64,
    y: f64,
}

/// Writes `id,label,x,y`. Floats use the shortest representation that reads back exactly.
pub fn write_cohort<W: Write>(writer: W, cohort: &FittedCohort) -> Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    for s in &cohort.subjects {
        csv.serialize(CohortRow {
            id: s.id.clone(),
            label: s.label.clone(),
            x: s.point.x(),
            y: s.point.y(),
        })
        .map_err(csv_error)?;
    }
    csv.flush()?;
    Ok(())
}

pub fn parse_cohort<R: Read>(reader: R) -> Result<FittedCohort> {
    let csv = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let mut subjects = Vec::new();
    for row in numbered_rows::<_, CohortRow>(csv) {
        let (line, row) = row?;
        let point = BetaPoint::new(row.x, row.y).map_err(|e| parse_error(line, e))?;
        subjects.push(FittedSubject {
            id: row.id,
            label: row.label,
            point,
        });
    }
    Ok(FittedCohort::new(subjects))
}

pub fn read_cohort(path: &Path) -> Result<FittedCohort> {
    parse_cohort(File::open(path)?)
}

/// Writes `id,label,reason`.
pub fn write_exclusions<W: Write>(writer: W, excluded: &[Exclusion]) -> Result<()> {
    let mut csv = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
    csv.write_record(["id", "label", "reason"]).map_err(csv_error)?;
    for e in excluded {
        csv.serialize(e).map_err(csv_error)?;
    }
    csv.flush()?;
    Ok(())
}

/// Writes through a temporary file in the same directory, then renames it
/// over `path`, so readers never observe a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let name = path
        .file_name()
        .ok_or_else(|| Error::invalid(format!("{} is not a file path", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    Ok(result?)
}
