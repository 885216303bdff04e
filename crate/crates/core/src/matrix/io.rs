//! Matrix files.
//!
//! JSON: an array of rows, each entry either a real number or `[re, im]`.
//! CSV: one row per line, each field a real literal or `a+bi` / `a-bi`.
//! Row and column numbers in errors are 1-based.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde_json::Value;

use super::{ComplexMatrix, ComplexScalar, MatrixError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixFormat {
    Json,
    Csv,
}

impl MatrixFormat {
    /// Guesses the format from a file extension (`.json` or `.csv`).
    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "json" => Some(Self::Json),
            "csv" => Some(Self::Csv),
            _ => None,
        }
    }
}

impl FromStr for MatrixFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            other => Err(format!("unknown matrix format `{other}` (expected json or csv)")),
        }
    }
}

pub fn matrix_from_file(path: &Path, format: MatrixFormat) -> Result<ComplexMatrix, MatrixError> {
    let display = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|source| MatrixError::Io {
        path: display.clone(),
        source,
    })?;
    matrix_from_str(&text, format).map_err(|e| MatrixError::File {
        path: display,
        source: Box::new(e),
    })
}

pub fn matrix_to_file(
    m: &ComplexMatrix,
    path: &Path,
    format: MatrixFormat,
) -> Result<(), MatrixError> {
    fs::write(path, matrix_to_string(m, format)).map_err(|source| MatrixError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn matrix_from_str(text: &str, format: MatrixFormat) -> Result<ComplexMatrix, MatrixError> {
    match format {
        MatrixFormat::Json => from_json(text),
        MatrixFormat::Csv => from_csv(text),
    }
}

pub fn matrix_to_string(m: &ComplexMatrix, format: MatrixFormat) -> String {
    match format {
        MatrixFormat::Json => to_json(m),
        MatrixFormat::Csv => to_csv(m),
    }
}

fn from_json(text: &str) -> Result<ComplexMatrix, MatrixError> {
    let value: Value = serde_json::from_str(text).map_err(|e| MatrixError::Parse {
        row: e.line(),
        column: e.column(),
        message: format!("invalid JSON: {e}"),
    })?;
    let rows = value.as_array().ok_or_else(|| MatrixError::Parse {
        row: 0,
        column: 0,
        message: "top level must be an array of rows".into(),
    })?;
    let mut parsed = Vec::with_capacity(rows.len());
    for (r, row) in rows.iter().enumerate() {
        let cells = row.as_array().ok_or_else(|| MatrixError::Parse {
            row: r + 1,
            column: 0,
            message: "row must be an array".into(),
        })?;
        let row = cells
            .iter()
            .enumerate()
            .map(|(c, cell)| {
                json_entry(cell).ok_or_else(|| MatrixError::Parse {
                    row: r + 1,
                    column: c + 1,
                    message: format!("expected a number or [re, im], found {cell}"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        parsed.push(row);
    }
    ComplexMatrix::from_rows(parsed)
}

fn json_entry(v: &Value) -> Option<ComplexScalar> {
    match v {
        Value::Number(n) => Some(ComplexScalar::new(n.as_f64()?, 0.0)),
        Value::Array(pair) => match pair.as_slice() {
            [re, im] => Some(ComplexScalar::new(re.as_f64()?, im.as_f64()?)),
            _ => None,
        },
        _ => None,
    }
}

fn to_json(m: &ComplexMatrix) -> String {
    let rows: Vec<String> = m
        .rows()
        .map(|row| {
            let pairs: Vec<[f64; 2]> = row.iter().map(|z| [z.re, z.im]).collect();
            serde_json::to_string(&pairs).expect("finite floats serialize")
        })
        .collect();
    format!("[\n  {}\n]\n", rows.join(",\n  "))
}

fn from_csv(text: &str) -> Result<ComplexMatrix, MatrixError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| MatrixError::Parse {
            row: e.position().map_or(0, |p| p.line() as usize),
            column: 0,
            message: e.to_string(),
        })?;
        let line = record.position().map_or(rows.len() + 1, |p| p.line() as usize);
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        let row = record
            .iter()
            .enumerate()
            .map(|(c, field)| {
                parse_complex(field).map_err(|message| MatrixError::Parse {
                    row: line,
                    column: c + 1,
                    message,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    if let Some(first) = rows.first() {
        let width = first.len();
        if let Some((r, row)) = rows.iter().enumerate().find(|(_, row)| row.len() != width) {
            return Err(MatrixError::Shape {
                row: r + 1,
                expected: width,
                found: row.len(),
            });
        }
    }
    ComplexMatrix::from_rows(rows)
}

fn to_csv(m: &ComplexMatrix) -> String {
    let mut out = String::new();
    for row in m.rows() {
        let fields: Vec<String> = row.iter().map(|z| format_complex(*z)).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// Formats an entry in the CSV literal syntax; exact for finite values.
pub fn format_complex(z: ComplexScalar) -> String {
    if z.im == 0.0 && z.im.is_sign_positive() {
        format!("{}", z.re)
    } else if z.im.is_sign_negative() {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

/// Parses `1`, `-0.5`, `2i`, `-i`, `0.5-0.5i`, `1e-3+2E2i`.
pub fn parse_complex(field: &str) -> Result<ComplexScalar, String> {
    let s = field.trim();
    if s.is_empty() {
        return Err("empty field".into());
    }
    let bad = || format!("invalid complex literal `{s}`");
    let Some(body) = s.strip_suffix('i') else {
        return s
            .parse::<f64>()
            .map(|re| ComplexScalar::new(re, 0.0))
            .map_err(|_| bad());
    };
    // The split point is the last sign that is not the sign of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (body[..k].parse::<f64>().map_err(|_| bad())?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        // `f64::from_str` accepts "inf"/"nan"; a trailing `i` on those is not a literal we support.
        other if other.trim_start_matches(['+', '-']).starts_with(|c: char| c.is_ascii_digit() || c == '.') => {
            other.parse::<f64>().map_err(|_| bad())?
        }
        _ => return Err(bad()),
    };
    Ok(ComplexScalar::new(re, im))
}
