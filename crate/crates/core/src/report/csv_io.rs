use std::io::{Read, Write};
use std::path::Path;

use crate::bench::{ResultRow, ResultsTable};
use crate::error::{Error, Result};

/// Column names of the results file, in order.
pub const CSV_HEADER: [&str; 8] = [
    "method",
    "param_set_id",
    "signal",
    "snr_db",
    "repetition",
    "metric",
    "value",
    "runtime_s",
];

fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes the table as CSV with LF line endings and 17 significant digits.
pub fn write_csv_to<W: Write>(table: &ResultsTable, out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in table.rows() {
        w.write_record([
            r.method.clone(),
            r.param_set_id.to_string(),
            r.signal.clone(),
            fmt_float(r.snr_db),
            r.repetition.to_string(),
            r.metric.clone(),
            fmt_float(r.value),
            fmt_float(r.runtime_s),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// [`write_csv_to`] through a temporary file renamed over `path`.
pub fn write_csv(table: &ResultsTable, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    write_csv_to(table, tmp.as_file_mut())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

pub fn read_csv_from<R: Read>(input: R) -> Result<ResultsTable> {
    let mut rd = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let header: Vec<String> = rd.headers()?.iter().map(str::to_string).collect();
    if header != CSV_HEADER {
        return Err(Error::Config(format!("unexpected CSV header {header:?}")));
    }
    let mut rows = Vec::new();
    for (line, record) in rd.records().enumerate() {
        let rec = record?;
        let bad = |what: &str| Error::Config(format!("row {}: invalid {what}", line + 2));
        let float = |i: usize, what: &str| rec[i].parse::<f64>().map_err(|_| bad(what));
        let int = |i: usize, what: &str| rec[i].parse::<usize>().map_err(|_| bad(what));
        rows.push(ResultRow {
            method: rec[0].to_string(),
            param_set_id: int(1, "param_set_id")?,
            signal: rec[2].to_string(),
            snr_db: float(3, "snr_db")?,
            repetition: int(4, "repetition")?,
            metric: rec[5].to_string(),
            value: float(6, "value")?,
            runtime_s: float(7, "runtime_s")?,
            error: None,
        });
    }
    Ok(ResultsTable::new(rows))
}

pub fn read_csv(path: impl AsRef<Path>) -> Result<ResultsTable> {
    read_csv_from(std::fs::File::open(path)?)
}
