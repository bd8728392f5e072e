//! Resolves command-line arguments into library objects.
//!
//! An argument is a path to a JSON document, `builtin:NAME`, or a bare builtin
//! name when no file of that name exists.

use std::fs;
use std::path::Path;

use qchannel_core::algorithms::BooleanOracle;
use qchannel_core::channels::{ChoiMatrix, BUILTIN_CHANNELS};
use qchannel_core::io::{self, MatrixDoc};
use qchannel_core::{Error, KrausChannel, Matrix, QuantumCode};
use serde_json::{json, Value};

use crate::CliError;

const BUILTIN_CODES: [&str; 2] = ["repetition3", "shor9"];
const BUILTIN_ORACLES: [&str; 4] = ["constant0", "constant1", "identity", "negation"];

enum Source {
    Document(Value),
    Builtin(String),
}

fn read_document(arg: &str, builtins: &[&str]) -> Result<Source, CliError> {
    if let Some(name) = arg.strip_prefix("builtin:") {
        return Ok(Source::Builtin(name.to_string()));
    }
    let path = Path::new(arg);
    if !path.exists() && builtins.contains(&arg) {
        return Ok(Source::Builtin(arg.to_string()));
    }
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: arg.to_string(), source })?;
    let mut v = io::parse_json(&text)?;
    // Reports carry a provenance tag that is not part of the input schemas.
    if let Some(obj) = v.as_object_mut() {
        obj.remove("paper_ref");
    }
    Ok(Source::Document(v))
}

/// Any Kraus list; trace preservation is left to the analyses that need it.
pub fn channel(arg: &str) -> Result<KrausChannel, CliError> {
    let v = match read_document(arg, &BUILTIN_CHANNELS)? {
        Source::Document(v) => v,
        Source::Builtin(name) => json!({ "builtin": name }),
    };
    Ok(KrausChannel::new(io::operators_from_value(&v)?)?)
}

/// A channel document, or the `recovery` member of a recovery report.
pub fn recovery(arg: &str) -> Result<KrausChannel, CliError> {
    let v = match read_document(arg, &BUILTIN_CHANNELS)? {
        Source::Document(mut v) => match v.get_mut("recovery") {
            Some(inner) => inner.take(),
            None => v,
        },
        Source::Builtin(name) => json!({ "builtin": name }),
    };
    Ok(KrausChannel::new(io::operators_from_value(&v)?)?)
}

pub fn code(arg: &str) -> Result<QuantumCode, CliError> {
    let v = match read_document(arg, &BUILTIN_CODES)? {
        Source::Document(v) => v,
        Source::Builtin(name) => json!({ "builtin": name }),
    };
    Ok(io::code_from_value(&v)?)
}

pub fn operators(arg: &str) -> Result<Vec<Matrix>, CliError> {
    let v = match read_document(arg, &BUILTIN_CHANNELS)? {
        Source::Document(v) => v,
        Source::Builtin(name) => json!({ "builtin": name }),
    };
    Ok(io::operators_from_value(&v)?)
}

pub fn matrix(arg: &str) -> Result<Matrix, CliError> {
    match read_document(arg, &[])? {
        Source::Document(v) => Ok(io::matrix_from_value(&v)?),
        Source::Builtin(name) => Err(Error::InvalidParameter(format!("no builtin matrix `{name}`")).into()),
    }
}

/// `{"block_dim": N, "matrix": {...}}` or a bare N²×N² matrix.
pub fn choi(arg: &str) -> Result<ChoiMatrix<f64>, CliError> {
    let v = match read_document(arg, &BUILTIN_CHANNELS)? {
        Source::Document(v) => v,
        Source::Builtin(name) => {
            let ch = io::channel_from_value(&json!({ "builtin": name }))?;
            return Ok(ch.choi());
        }
    };
    if let Some(m) = v.get("matrix") {
        let doc: MatrixDoc = serde_json::from_value(m.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let n = v
            .get("block_dim")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("`block_dim` must be a positive integer".into()))?;
        return Ok(ChoiMatrix::new(n as usize, doc.to_matrix()?)?);
    }
    let m = io::matrix_from_value(&v)?;
    let n = (m.rows() as f64).sqrt().round() as usize;
    Ok(ChoiMatrix::new(n, m)?)
}

pub fn oracle(arg: &str) -> Result<BooleanOracle, CliError> {
    match read_document(arg, &BUILTIN_ORACLES)? {
        Source::Document(v) => Ok(io::oracle_from_value(&v)?),
        Source::Builtin(name) => {
            let table = match name.as_str() {
                "constant0" => vec![0, 0],
                "constant1" => vec![1, 1],
                "identity" => vec![0, 1],
                "negation" => vec![1, 0],
                other => return Err(Error::InvalidOracle(format!("no builtin oracle `{other}`")).into()),
            };
            Ok(BooleanOracle::new(1, 1, table)?)
        }
    }
}
