//! JSON file formats.
//!
//! A matrix is `{"n": int, "re": [[...]], "im": [[...]]}` with row-major
//! rows; a missing `"im"` means a real matrix. A subspace file is a JSON
//! array of matrices read as a real spanning set. An orbit frame file is
//! `{"base": matrix, "derivation": matrix}` with either key optional (but
//! not both absent).
//!
//! Numbers are written with 17 significant digits.

use std::path::Path;

use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::{check_dim, GeoError, Result};
use crate::linalg::{ComplexMatrix, HermitianMatrix};
use crate::triple::{orthonormalize, SubspaceBasis};

#[derive(Debug, Deserialize)]
struct MatrixFile {
    n: usize,
    re: Vec<Vec<f64>>,
    #[serde(default)]
    im: Option<Vec<Vec<f64>>>,
}

impl MatrixFile {
    fn into_matrix(self) -> Result<ComplexMatrix> {
        check_dim(self.n, self.re.len())?;
        ComplexMatrix::from_parts(&self.re, self.im.as_deref())
    }
}

#[derive(Debug, Deserialize)]
struct FrameFile {
    #[serde(default)]
    base: Option<MatrixFile>,
    #[serde(default)]
    derivation: Option<MatrixFile>,
}

/// Contents of an orbit frame file.
#[derive(Clone, Debug)]
pub struct FrameSpec {
    pub base: Option<ComplexMatrix>,
    pub derivation: Option<ComplexMatrix>,
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| GeoError::Parse(e.to_string()))
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| GeoError::Io(format!("{}: {e}", path.display())))
}

pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    parse::<MatrixFile>(text)?.into_matrix()
}

pub fn parse_subspace(text: &str) -> Result<SubspaceBasis> {
    let files: Vec<MatrixFile> = parse(text)?;
    let mut spanning = Vec::with_capacity(files.len());
    for f in files {
        spanning.push(HermitianMatrix::new(f.into_matrix()?)?);
    }
    orthonormalize(&spanning)
}

pub fn parse_frame(text: &str) -> Result<FrameSpec> {
    let f: FrameFile = parse(text)?;
    let base = f.base.map(MatrixFile::into_matrix).transpose()?;
    let derivation = f.derivation.map(MatrixFile::into_matrix).transpose()?;
    if base.is_none() && derivation.is_none() {
        return Err(GeoError::Parse("frame needs a \"base\" or a \"derivation\" matrix".into()));
    }
    Ok(FrameSpec { base, derivation })
}

pub fn read_matrix(path: &Path) -> Result<ComplexMatrix> {
    parse_matrix(&read_text(path)?)
}

pub fn read_subspace(path: &Path) -> Result<SubspaceBasis> {
    parse_subspace(&read_text(path)?)
}

pub fn read_frame(path: &Path) -> Result<FrameSpec> {
    parse_frame(&read_text(path)?)
}

/// Formats `x` with 17 significant digits, trimming trailing zeros.
/// Moderate exponents use positional notation (`0.0`, `1.5`, `0.25`),
/// others scientific (`1.2345e-7`).
pub fn format_f64(x: f64) -> String {
    if x == 0.0 {
        return "0.0".into();
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> String {
    if !s.contains('.') {
        return format!("{s}.0");
    }
    let t = s.trim_end_matches('0');
    if t.ends_with('.') {
        format!("{t}0")
    } else {
        t.to_string()
    }
}

/// JSON number with 17 significant digits; `null` for non-finite input.
pub fn number(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    serde_json::from_str(&format_f64(x)).expect("formatted float is valid JSON")
}

fn rows(rows: Vec<Vec<f64>>) -> Value {
    Value::Array(
        rows.into_iter()
            .map(|r| Value::Array(r.into_iter().map(number).collect()))
            .collect(),
    )
}

pub fn matrix_json(m: &ComplexMatrix) -> Value {
    json!({
        "n": m.n(),
        "re": rows(m.re_rows()),
        "im": rows(m.im_rows()),
    })
}
