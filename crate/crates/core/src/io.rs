//! CSV datasets: one observation per row, features then a ±1 label.

use std::io::{Read, Write};
use std::path::Path;

use nalgebra::DMatrix;

use crate::data::{Dataset, Label};
use crate::error::{Error, Result};

pub fn load_dataset_csv(path: impl AsRef<Path>) -> Result<Dataset> {
    read_dataset_csv(std::fs::File::open(path)?)
}

pub fn save_dataset_csv(data: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    write_dataset_csv(data, std::fs::File::create(path)?)
}

/// Parses a headerless CSV. Row numbers in errors are 1-based.
pub fn read_dataset_csv(reader: impl Read) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut values = Vec::new();
    let mut labels = Vec::new();
    let mut width = None;
    for (k, record) in rdr.records().enumerate() {
        let row = k + 1;
        let record = record?;
        if record.len() < 2 {
            return Err(Error::Parse {
                row,
                message: "need at least one feature and a label".into(),
            });
        }
        match width {
            None => width = Some(record.len()),
            Some(w) if w != record.len() => {
                return Err(Error::Parse {
                    row,
                    message: format!("expected {w} columns, found {}", record.len()),
                })
            }
            _ => {}
        }
        let parse = |s: &str| -> Result<f64> {
            s.parse::<f64>().map_err(|_| Error::Parse {
                row,
                message: format!("not a number: '{s}'"),
            })
        };
        let last = record.len() - 1;
        for field in record.iter().take(last) {
            let v = parse(field)?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    row,
                    message: "non-finite value".into(),
                });
            }
            values.push(v);
        }
        let raw = parse(&record[last])?;
        let label = Label::from_value(raw).ok_or_else(|| Error::Parse {
            row,
            message: format!("label must be +1 or -1, found {}", &record[last]),
        })?;
        labels.push(label);
    }
    let d = width.map(|w| w - 1).unwrap_or(0);
    let points = DMatrix::from_row_slice(labels.len(), d, &values);
    Dataset::new(points, labels)
}

pub fn write_dataset_csv(data: &Dataset, writer: impl Write) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
    for i in 0..data.len() {
        let mut rec: Vec<String> = data.points().row(i).iter().map(|v| format!("{v:?}")).collect();
        rec.push(if data.label(i) == Label::Positive { "1" } else { "-1" }.into());
        wtr.write_record(&rec)?;
    }
    wtr.flush()?;
    Ok(())
}
