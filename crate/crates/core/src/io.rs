//! JSON documents for matrices, states, channels, codes and oracles.
//!
//! Complex numbers are `[re, im]` pairs; matrices are row-major:
//! `{"rows": R, "cols": C, "data": [[re, im], ...]}`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algorithms::BooleanOracle;
use crate::channels::{self, KrausChannel};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::qcore::{gate, Gate};
use crate::qec::{builtin_code_by_name, QuantumCode};
use crate::{Matrix, C64};

fn parse_err(e: impl std::fmt::Display) -> Error {
    Error::Parse(e.to_string())
}

fn pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

fn cx(p: [f64; 2]) -> C64 {
    Complex::new(p[0], p[1])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDoc {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl MatrixDoc {
    pub fn to_matrix(&self) -> Result<Matrix> {
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::Parse("matrix dimensions must be positive".into()));
        }
        if self.data.iter().any(|p| !p[0].is_finite() || !p[1].is_finite()) {
            return Err(Error::NonFinite("matrix document".into()));
        }
        CMatrix::from_vec(self.rows, self.cols, self.data.iter().copied().map(cx).collect())
    }
}

impl From<&Matrix> for MatrixDoc {
    fn from(m: &Matrix) -> Self {
        MatrixDoc { rows: m.rows(), cols: m.cols(), data: m.data().iter().copied().map(pair).collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateDoc {
    pub dim: usize,
    pub amplitudes: Vec<[f64; 2]>,
}

impl StateDoc {
    /// Raw amplitudes (not normalized; codes orthonormalize their kets).
    pub fn to_vec(&self) -> Result<Vec<C64>> {
        if self.amplitudes.len() != self.dim {
            return Err(Error::DimMismatch(format!("{} amplitudes for dimension {}", self.amplitudes.len(), self.dim)));
        }
        if self.amplitudes.iter().any(|p| !p[0].is_finite() || !p[1].is_finite()) {
            return Err(Error::NonFinite("state document".into()));
        }
        Ok(self.amplitudes.iter().copied().map(cx).collect())
    }

    pub fn from_slice(v: &[C64]) -> Self {
        StateDoc { dim: v.len(), amplitudes: v.iter().copied().map(pair).collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelDoc {
    pub dim: usize,
    pub kraus: Vec<MatrixDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cp_only: Option<bool>,
}

impl ChannelDoc {
    pub fn from_channel(ch: &KrausChannel<f64>) -> Self {
        ChannelDoc {
            dim: ch.dim(),
            kraus: ch.operators().iter().map(MatrixDoc::from).collect(),
            cp_only: (!ch.is_trace_preserving()).then_some(true),
        }
    }

    /// Builds the channel; unless `cp_only` is set the map must be trace preserving.
    pub fn to_channel(&self) -> Result<KrausChannel<f64>> {
        let ops = self.kraus.iter().map(MatrixDoc::to_matrix).collect::<Result<Vec<_>>>()?;
        let ch = KrausChannel::new(ops)?;
        if ch.dim() != self.dim {
            return Err(Error::DimMismatch(format!("declared dimension {} but operators are {}x{}", self.dim, ch.dim(), ch.dim())));
        }
        if !self.cp_only.unwrap_or(false) {
            ch.require_tp()?;
        }
        Ok(ch)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeDoc {
    pub ambient_dim: usize,
    pub basis: Vec<StateDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleDoc {
    pub m: usize,
    pub k: usize,
    pub table: Vec<usize>,
}

impl OracleDoc {
    pub fn to_oracle(&self) -> Result<BooleanOracle> {
        BooleanOracle::new(self.m, self.k, self.table.clone())
    }
}

impl From<&BooleanOracle> for OracleDoc {
    fn from(f: &BooleanOracle) -> Self {
        OracleDoc { m: f.m(), k: f.k(), table: f.table().to_vec() }
    }
}

/// `{"builtin": name, "params": {...}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuiltinDoc {
    pub builtin: String,
    #[serde(default)]
    pub params: serde_json::Map<String, Value>,
}

fn param_f64(params: &serde_json::Map<String, Value>, key: &str, default: f64) -> Result<f64> {
    match params.get(key) {
        None => Ok(default),
        Some(v) => v.as_f64().ok_or_else(|| Error::InvalidParameter(format!("`{key}` must be a number"))),
    }
}

fn param_usize(params: &serde_json::Map<String, Value>, key: &str, default: usize) -> Result<usize> {
    match params.get(key) {
        None => Ok(default),
        Some(v) => v
            .as_u64()
            .map(|x| x as usize)
            .ok_or_else(|| Error::InvalidParameter(format!("`{key}` must be a non-negative integer"))),
    }
}

fn param<D: for<'de> Deserialize<'de>>(params: &serde_json::Map<String, Value>, key: &str) -> Result<Option<D>> {
    params
        .get(key)
        .map(|v| serde_json::from_value(v.clone()).map_err(|e| Error::InvalidParameter(format!("`{key}`: {e}"))))
        .transpose()
}

fn kets(docs: Vec<Vec<[f64; 2]>>) -> Vec<Vec<C64>> {
    docs.into_iter().map(|v| v.into_iter().map(cx).collect()).collect()
}

/// Builds a named channel; missing parameters take the documented defaults.
pub fn builtin_channel(name: &str, params: &serde_json::Map<String, Value>) -> Result<KrausChannel<f64>> {
    let known: &[&str] = match name {
        "bit_flip" | "phase_flip" | "zz_dephasing" => &["p"],
        "amplitude_damping" => &["r"],
        "constant_half" => &[],
        "random_unitary" => &["weights", "unitaries"],
        "entanglement_breaking" => &["psi", "phi"],
        "collective_rotation" => &["n", "thetas", "weights"],
        "permutation" => &["d", "n", "weights"],
        "dead_row" => &["d"],
        other => return Err(Error::InvalidParameter(format!("unknown builtin channel `{other}`"))),
    };
    if let Some(k) = params.keys().find(|k| !known.contains(&k.as_str())) {
        return Err(Error::InvalidParameter(format!("`{name}` takes no parameter `{k}`")));
    }
    let defaults = channels::default_catalogue::<f64>();
    let default = |n: &str| defaults.iter().find(|(k, _)| *k == n).map(|(_, c)| c.clone()).expect("catalogue entry");
    match name {
        "bit_flip" => channels::bit_flip(param_f64(params, "p", 0.3)?),
        "phase_flip" => channels::phase_flip(param_f64(params, "p", 0.25)?),
        "zz_dephasing" => channels::zz_dephasing(param_f64(params, "p", 0.3)?),
        "amplitude_damping" => channels::amplitude_damping(param_f64(params, "r", 0.5)?),
        "constant_half" => Ok(channels::constant_half()),
        "random_unitary" => {
            let weights: Option<Vec<f64>> = param(params, "weights")?;
            let unitaries: Option<Vec<MatrixDoc>> = param(params, "unitaries")?;
            match (weights, unitaries) {
                (None, None) => Ok(default(name)),
                (w, Some(us)) => {
                    let us = us.iter().map(MatrixDoc::to_matrix).collect::<Result<Vec<_>>>()?;
                    let w = w.unwrap_or_else(|| vec![1.0 / us.len() as f64; us.len()]);
                    channels::random_unitary(&w, &us)
                }
                (Some(_), None) => Err(Error::InvalidParameter("`weights` given without `unitaries`".into())),
            }
        }
        "entanglement_breaking" => {
            let psi: Option<Vec<Vec<[f64; 2]>>> = param(params, "psi")?;
            let phi: Option<Vec<Vec<[f64; 2]>>> = param(params, "phi")?;
            match (psi, phi) {
                (None, None) => Ok(default(name)),
                (Some(a), Some(b)) => channels::entanglement_breaking(&kets(a), &kets(b)),
                _ => Err(Error::InvalidParameter("`psi` and `phi` must be given together".into())),
            }
        }
        "collective_rotation" => {
            let n = param_usize(params, "n", 3)?;
            let thetas: [f64; 3] = param(params, "thetas")?.unwrap_or_else(channels::default_collective_angles);
            let third = 1.0 / 3.0;
            let weights: [f64; 3] = param(params, "weights")?.unwrap_or([third; 3]);
            channels::collective_rotation(n, thetas, weights)
        }
        "permutation" => {
            let d = param_usize(params, "d", 2)?;
            let n = param_usize(params, "n", 3)?;
            let weights: Option<Vec<f64>> = param(params, "weights")?;
            channels::permutation_channel(d, n, weights.as_deref())
        }
        "dead_row" => channels::dead_row(param_usize(params, "d", 4)?),
        _ => unreachable!("name checked above"),
    }
}

/// Channel from a Kraus document or a builtin document.
pub fn channel_from_value(v: &Value) -> Result<KrausChannel<f64>> {
    if v.get("builtin").is_some() {
        let doc: BuiltinDoc = serde_json::from_value(v.clone()).map_err(parse_err)?;
        return builtin_channel(&doc.builtin, &doc.params);
    }
    let doc: ChannelDoc = serde_json::from_value(v.clone()).map_err(parse_err)?;
    doc.to_channel()
}

/// Code from `{"ambient_dim", "basis"}` or `{"builtin": name}`.
pub fn code_from_value(v: &Value) -> Result<QuantumCode<f64>> {
    if let Some(name) = v.get("builtin") {
        let name = name.as_str().ok_or_else(|| Error::Parse("`builtin` must be a string".into()))?;
        return builtin_code_by_name(name);
    }
    let doc: CodeDoc = serde_json::from_value(v.clone()).map_err(parse_err)?;
    let kets = doc.basis.iter().map(StateDoc::to_vec).collect::<Result<Vec<_>>>()?;
    if let Some(k) = kets.iter().position(|k| k.len() != doc.ambient_dim) {
        return Err(Error::DimMismatch(format!("basis ket {k} does not have dimension {}", doc.ambient_dim)));
    }
    QuantumCode::from_kets(&kets)
}

/// Single-qubit gate placed on one qubit (1-based, qubit 1 most significant).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateRef {
    pub gate: String,
    pub qubit: usize,
}

/// `{"qubits": n, "gates": [{"gate": "X", "qubit": 1}, ...]}`: an error list of embedded gates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateListDoc {
    pub qubits: usize,
    pub gates: Vec<GateRef>,
}

impl GateListDoc {
    pub fn to_operators(&self) -> Result<Vec<Matrix>> {
        if self.gates.is_empty() {
            return Err(Error::Parse("empty gate list".into()));
        }
        self.gates.iter().map(|g| embedded_gate(&g.gate, g.qubit, self.qubits)).collect()
    }
}

/// Error list: an array of matrices, a gate list, a channel document (its Kraus
/// list) or a builtin channel document.
pub fn operators_from_value(v: &Value) -> Result<Vec<Matrix>> {
    if v.get("qubits").is_some() {
        let doc: GateListDoc = serde_json::from_value(v.clone()).map_err(parse_err)?;
        return doc.to_operators();
    }
    if v.is_array() {
        let docs: Vec<MatrixDoc> = serde_json::from_value(v.clone()).map_err(parse_err)?;
        let ops = docs.iter().map(MatrixDoc::to_matrix).collect::<Result<Vec<_>>>()?;
        if ops.is_empty() {
            return Err(Error::Parse("empty operator list".into()));
        }
        if let Some(k) = ops.iter().position(|m| m.shape() != ops[0].shape() || !m.is_square()) {
            return Err(Error::DimMismatch(format!("operator {k} has shape {:?}", ops[k].shape())));
        }
        return Ok(ops);
    }
    if v.get("builtin").is_some() {
        return Ok(channel_from_value(v)?.operators().to_vec());
    }
    let doc: ChannelDoc = serde_json::from_value(v.clone()).map_err(parse_err)?;
    doc.kraus.iter().map(MatrixDoc::to_matrix).collect()
}

pub fn matrix_from_value(v: &Value) -> Result<Matrix> {
    let doc: MatrixDoc = serde_json::from_value(v.clone()).map_err(parse_err)?;
    doc.to_matrix()
}

pub fn oracle_from_value(v: &Value) -> Result<BooleanOracle> {
    let doc: OracleDoc = serde_json::from_value(v.clone()).map_err(parse_err)?;
    doc.to_oracle()
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(parse_err)
}

/// Named single-qubit gate embedded on qubit `k` of `n`, for building error lists.
pub fn embedded_gate(name: &str, k: usize, n: usize) -> Result<Matrix> {
    let g: Gate = name.parse()?;
    crate::qcore::embed_single(&gate(g), k, n)
}
