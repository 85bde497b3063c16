//! Tabular output shared by the CLI subcommands.

use std::io::{self, Write};

use clap::ValueEnum;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Writes `rows` as CSV with a header row, or as a pretty JSON array.
pub fn write_rows<T: Serialize>(out: &mut dyn Write, format: Format, rows: &[T]) -> io::Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for row in rows {
                w.serialize(row).map_err(io::Error::other)?;
            }
            w.flush()
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, rows)?;
            writeln!(out)
        }
    }
}

/// A single record: one CSV row under a header, or one JSON object.
pub fn write_record<T: Serialize>(
    out: &mut dyn Write,
    format: Format,
    record: &T,
) -> io::Result<()> {
    match format {
        Format::Csv => write_rows(out, format, std::slice::from_ref(record)),
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, record)?;
            writeln!(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Row {
        label: String,
        value: f64,
        note: Option<u64>,
    }

    #[test]
    fn csv_has_header_and_rows() {
        let rows = vec![
            Row {
                label: "01".into(),
                value: 0.5,
                note: None,
            },
            Row {
                label: "10".into(),
                value: 0.25,
                note: Some(3),
            },
        ];
        let mut buf = Vec::new();
        write_rows(&mut buf, Format::Csv, &rows).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "label,value,note\n01,0.5,\n10,0.25,3\n"
        );
    }

    #[test]
    fn json_is_an_array() {
        let rows = vec![Row {
            label: "0".into(),
            value: 1.0,
            note: None,
        }];
        let mut buf = Vec::new();
        write_rows(&mut buf, Format::Json, &rows).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v[0]["label"], "0");
        assert!(v[0]["note"].is_null());
    }
}
