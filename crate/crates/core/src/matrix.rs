//! Square labeled matrices and their CSV form.
//!
//! CSV layout: optional `# key: value` metadata lines, a header row whose
//! first cell is the corner label followed by the column labels, then one
//! row per label with 6-decimal cells.

use std::io::{Read, Write};

use crate::error::{Error, Result};

pub(crate) fn write_csv<W: Write>(
    out: W,
    corner: &str,
    labels: &[&str],
    values: &[Vec<f64>],
    metadata: &[(&str, String)],
) -> Result<()> {
    let mut out = out;
    for (k, v) in metadata {
        writeln!(out, "# {k}: {v}")?;
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(std::iter::once(corner).chain(labels.iter().copied()))?;
    for (label, row) in labels.iter().zip(values) {
        let cells = row.iter().map(|v| format!("{v:.6}"));
        w.write_record(std::iter::once(label.to_string()).chain(cells))?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a matrix written by [`write_csv`]; returns labels and values.
pub fn read_csv<R: Read>(input: R) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .has_headers(true)
        .from_reader(input);
    let labels: Vec<String> = r.headers()?.iter().skip(1).map(str::to_owned).collect();
    let mut values = Vec::with_capacity(labels.len());
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        if rec.get(0) != labels.get(i).map(String::as_str) {
            return Err(Error::MalformedMatrix(format!(
                "row {} label does not match column order",
                i + 1
            )));
        }
        let row = rec
            .iter()
            .skip(1)
            .map(|c| {
                c.parse::<f64>()
                    .map_err(|_| Error::MalformedMatrix(format!("bad cell {c:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if row.len() != labels.len() {
            return Err(Error::MalformedMatrix(format!(
                "row {} has {} cells",
                i + 1,
                row.len()
            )));
        }
        values.push(row);
    }
    if values.len() != labels.len() {
        return Err(Error::MalformedMatrix(format!(
            "{} rows for {} columns",
            values.len(),
            labels.len()
        )));
    }
    Ok((labels, values))
}
