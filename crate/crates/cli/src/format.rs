//! The frame file format.
//!
//! A JSON document with a schema version, a kind, the dimensions and the
//! data, every complex scalar written as a two-element `[re, im]` array:
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "kind": "frame",
//!   "dim": 2,
//!   "data": [
//!     [[1.0000000000000000e0, 0.0000000000000000e0], [0.0000000000000000e0, 0.0000000000000000e0]]
//!   ]
//! }
//! ```
//!
//! `frame` data is a list of vectors, `operator_frame` data (with `dim_h` and
//! `dim_k`) a list of row-major matrices given as lists of rows, and `vector`
//! data a single vector. Unknown fields are rejected. Numbers are written with
//! 17 significant digits so a parse of the output reproduces every bit.

use std::fmt::Write as _;
use std::path::Path;

use frametensor::{CMatrix, CVector, Frame, HSElement, OperatorFrame, C64};
use serde::Deserialize;
use serde_json::Value;
use thiserror::Error;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid field `{field}`: {message}")]
    Field { field: String, message: String },
}

impl FormatError {
    fn field(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Field {
            field: field.into(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FrameFile {
    Frame(Frame),
    OperatorFrame(OperatorFrame),
    Vector(CVector),
}

impl FrameFile {
    pub fn kind(&self) -> &'static str {
        match self {
            FrameFile::Frame(_) => "frame",
            FrameFile::OperatorFrame(_) => "operator_frame",
            FrameFile::Vector(_) => "vector",
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case")]
enum Kind {
    Frame,
    OperatorFrame,
    Vector,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    schema_version: u32,
    kind: Kind,
    #[serde(default)]
    dim: Option<usize>,
    #[serde(default)]
    dim_h: Option<usize>,
    #[serde(default)]
    dim_k: Option<usize>,
    data: Value,
}

fn require(value: Option<usize>, name: &str, kind: &str) -> Result<usize, FormatError> {
    match value {
        Some(0) => Err(FormatError::field(name, "must be positive")),
        Some(v) => Ok(v),
        None => Err(FormatError::field(name, format!("required for kind `{kind}`"))),
    }
}

fn forbid(value: Option<usize>, name: &str, kind: &str) -> Result<(), FormatError> {
    match value {
        Some(_) => Err(FormatError::field(name, format!("not allowed for kind `{kind}`"))),
        None => Ok(()),
    }
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, FormatError> {
    v.as_array()
        .ok_or_else(|| FormatError::field(path, "expected an array"))
}

fn decode_scalar(v: &Value, path: &str) -> Result<C64, FormatError> {
    let pair = as_array(v, path)?;
    if pair.len() != 2 {
        return Err(FormatError::field(path, "expected a [re, im] pair"));
    }
    let part = |i: usize| {
        pair[i]
            .as_f64()
            .filter(|x| x.is_finite())
            .ok_or_else(|| FormatError::field(format!("{path}[{i}]"), "expected a finite number"))
    };
    Ok(C64::new(part(0)?, part(1)?))
}

fn decode_vector(v: &Value, path: &str, dim: usize) -> Result<CVector, FormatError> {
    let items = as_array(v, path)?;
    if items.len() != dim {
        return Err(FormatError::field(
            path,
            format!("expected {dim} entries, found {}", items.len()),
        ));
    }
    let data = items
        .iter()
        .enumerate()
        .map(|(i, z)| decode_scalar(z, &format!("{path}[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    CVector::new(data).map_err(|e| FormatError::field(path, e.to_string()))
}

fn decode_matrix(v: &Value, path: &str, rows: usize, cols: usize) -> Result<CMatrix, FormatError> {
    let items = as_array(v, path)?;
    if items.len() != rows {
        return Err(FormatError::field(
            path,
            format!("expected {rows} rows, found {}", items.len()),
        ));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for (i, row) in items.iter().enumerate() {
        data.extend(decode_vector(row, &format!("{path}[{i}]"), cols)?.into_vec());
    }
    CMatrix::new(rows, cols, data).map_err(|e| FormatError::field(path, e.to_string()))
}

fn nonempty(v: &Value) -> Result<&Vec<Value>, FormatError> {
    let items = as_array(v, "data")?;
    if items.is_empty() {
        return Err(FormatError::field("data", "must contain at least one element"));
    }
    Ok(items)
}

pub fn parse(text: &str) -> Result<FrameFile, FormatError> {
    let raw: RawFile = serde_json::from_str(text).map_err(|e| FormatError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if raw.schema_version != SCHEMA_VERSION {
        return Err(FormatError::field(
            "schema_version",
            format!("unsupported version {}, expected {SCHEMA_VERSION}", raw.schema_version),
        ));
    }
    match raw.kind {
        Kind::Frame => {
            let dim = require(raw.dim, "dim", "frame")?;
            forbid(raw.dim_h, "dim_h", "frame")?;
            forbid(raw.dim_k, "dim_k", "frame")?;
            let vectors = nonempty(&raw.data)?
                .iter()
                .enumerate()
                .map(|(n, v)| decode_vector(v, &format!("data[{n}]"), dim))
                .collect::<Result<Vec<_>, _>>()?;
            Frame::new(vectors)
                .map(FrameFile::Frame)
                .map_err(|e| FormatError::field("data", e.to_string()))
        }
        Kind::OperatorFrame => {
            let dim_h = require(raw.dim_h, "dim_h", "operator_frame")?;
            let dim_k = require(raw.dim_k, "dim_k", "operator_frame")?;
            forbid(raw.dim, "dim", "operator_frame")?;
            let elements = nonempty(&raw.data)?
                .iter()
                .enumerate()
                .map(|(n, v)| decode_matrix(v, &format!("data[{n}]"), dim_h, dim_k).map(HSElement::new))
                .collect::<Result<Vec<_>, _>>()?;
            OperatorFrame::new(elements)
                .map(FrameFile::OperatorFrame)
                .map_err(|e| FormatError::field("data", e.to_string()))
        }
        Kind::Vector => {
            let dim = require(raw.dim, "dim", "vector")?;
            forbid(raw.dim_h, "dim_h", "vector")?;
            forbid(raw.dim_k, "dim_k", "vector")?;
            decode_vector(&raw.data, "data", dim).map(FrameFile::Vector)
        }
    }
}

fn number(out: &mut String, x: f64) {
    write!(out, "{x:.16e}").expect("writing to a String");
}

fn scalar(out: &mut String, z: &C64) {
    out.push('[');
    number(out, z.re);
    out.push_str(", ");
    number(out, z.im);
    out.push(']');
}

fn vector(out: &mut String, v: &[C64]) {
    out.push('[');
    for (i, z) in v.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        scalar(out, z);
    }
    out.push(']');
}

pub fn to_string(file: &FrameFile) -> String {
    let mut out = String::new();
    writeln!(out, "{{").unwrap();
    writeln!(out, "  \"schema_version\": {SCHEMA_VERSION},").unwrap();
    writeln!(out, "  \"kind\": \"{}\",", file.kind()).unwrap();
    match file {
        FrameFile::Frame(f) => {
            writeln!(out, "  \"dim\": {},", f.dim()).unwrap();
            out.push_str("  \"data\": [\n");
            for (n, x) in f.iter().enumerate() {
                out.push_str("    ");
                vector(&mut out, x.as_slice());
                out.push_str(if n + 1 < f.len() { ",\n" } else { "\n" });
            }
            out.push_str("  ]\n");
        }
        FrameFile::OperatorFrame(of) => {
            writeln!(out, "  \"dim_h\": {},", of.dim_h()).unwrap();
            writeln!(out, "  \"dim_k\": {},", of.dim_k()).unwrap();
            out.push_str("  \"data\": [\n");
            for (n, t) in of.iter().enumerate() {
                out.push_str("    [\n");
                let m = t.matrix();
                for i in 0..m.rows() {
                    out.push_str("      ");
                    vector(&mut out, &m.as_slice()[i * m.cols()..(i + 1) * m.cols()]);
                    out.push_str(if i + 1 < m.rows() { ",\n" } else { "\n" });
                }
                out.push_str(if n + 1 < of.len() { "    ],\n" } else { "    ]\n" });
            }
            out.push_str("  ]\n");
        }
        FrameFile::Vector(v) => {
            writeln!(out, "  \"dim\": {},", v.dim()).unwrap();
            out.push_str("  \"data\": ");
            vector(&mut out, v.as_slice());
            out.push('\n');
        }
    }
    out.push_str("}\n");
    out
}

pub fn read_file(path: &Path) -> Result<FrameFile, FormatError> {
    let text = std::fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse(&text)
}

pub fn write_file(path: &Path, file: &FrameFile) -> Result<(), FormatError> {
    std::fs::write(path, to_string(file)).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })
}
