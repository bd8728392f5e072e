//! JSON reports. Field order is the declaration order; `paper_ref` names the
//! result each verb exercises.

use qchannel_core::algebra::{algebra_dimension, AlgebraStructure, OperatorSpace};
use qchannel_core::io::{MatrixDoc, StateDoc};
use serde::Serialize;

#[derive(Serialize)]
pub struct Classify {
    pub dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kraus_operators: Option<usize>,
    pub completely_positive: bool,
    pub trace_preserving: bool,
    pub unital: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub choi_min_eigenvalue: Option<f64>,
    pub paper_ref: &'static str,
}

#[derive(Serialize)]
pub struct Choi {
    pub block_dim: usize,
    pub matrix: MatrixDoc,
    pub paper_ref: &'static str,
}

/// Same layout as a channel document, so it loads back as one.
#[derive(Serialize)]
pub struct Kraus {
    pub dim: usize,
    pub kraus: Vec<MatrixDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cp_only: Option<bool>,
    pub paper_ref: &'static str,
}

#[derive(Serialize)]
pub struct IntertwinerDoc {
    pub unitary: MatrixDoc,
    pub residual: f64,
    pub unitary_residual: f64,
}

#[derive(Serialize)]
pub struct ChannelsEqual {
    pub equal: bool,
    pub choi_distance: f64,
    pub intertwiner: Option<IntertwinerDoc>,
    pub paper_ref: &'static str,
}

#[derive(Serialize)]
pub struct Detect {
    pub detectable: bool,
    pub lambda: Option<[f64; 2]>,
    pub residual: f64,
    pub paper_ref: &'static str,
}

#[derive(Serialize)]
pub struct Correctable {
    pub correctable: bool,
    pub lambda: Option<MatrixDoc>,
    /// 1-based indices (i, j) of the first failing pair E_i†E_j.
    pub offending: Option<[usize; 2]>,
    pub residual: f64,
    pub paper_ref: &'static str,
}

#[derive(Serialize)]
pub struct ChannelBody {
    pub dim: usize,
    pub kraus: Vec<MatrixDoc>,
}

#[derive(Serialize)]
pub struct Recovery {
    pub ambient_dim: usize,
    pub code_dim: usize,
    pub syndromes: usize,
    pub completed: bool,
    pub lambda_eigenvalues: Vec<f64>,
    pub recovery: ChannelBody,
    pub paper_ref: &'static str,
}

#[derive(Serialize)]
pub struct VerifyRecovery {
    pub states: usize,
    pub deviation: f64,
    pub restored: bool,
    pub paper_ref: &'static str,
}

#[derive(Serialize)]
pub struct Space {
    pub ambient_dim: usize,
    pub dimension: usize,
    pub basis: Vec<MatrixDoc>,
    pub paper_ref: &'static str,
}

impl Space {
    pub fn new(space: &OperatorSpace<f64>, paper_ref: &'static str) -> Self {
        Space {
            ambient_dim: space.ambient_dim(),
            dimension: space.dimension(),
            basis: space.basis().iter().map(MatrixDoc::from).collect(),
            paper_ref,
        }
    }
}

#[derive(Serialize)]
pub struct FixVsCommutant {
    pub equal: bool,
    pub unital: bool,
    pub fix_dimension: usize,
    pub commutant_dimension: usize,
    pub paper_ref: &'static str,
}

#[derive(Serialize)]
pub struct BlockDoc {
    pub m: usize,
    pub n: usize,
}

fn blocks(s: &AlgebraStructure<f64>) -> Vec<BlockDoc> {
    s.blocks.iter().map(|b| BlockDoc { m: b.m, n: b.n }).collect()
}

#[derive(Serialize)]
pub struct Structure {
    /// Dimension of the algebra, Σ n².
    pub dim: usize,
    pub ambient_dim: usize,
    pub blocks: Vec<BlockDoc>,
    pub basis_change: MatrixDoc,
    pub paper_ref: &'static str,
}

impl Structure {
    pub fn new(s: &AlgebraStructure<f64>, paper_ref: &'static str) -> Self {
        Structure { dim: algebra_dimension(&s.blocks), ambient_dim: s.dim(), blocks: blocks(s), basis_change: MatrixDoc::from(&s.basis_change), paper_ref }
    }
}

#[derive(Serialize)]
pub struct SubsystemDoc {
    pub block: usize,
    pub m: usize,
    pub n: usize,
    pub decoherence_free: bool,
}

#[derive(Serialize)]
pub struct Noiseless {
    pub commutant_dim: usize,
    pub blocks: Vec<BlockDoc>,
    pub subsystems: Vec<SubsystemDoc>,
    pub basis_change: MatrixDoc,
    pub paper_ref: &'static str,
}

impl Noiseless {
    pub fn new(r: &qchannel_core::algebra::NoiselessReport<f64>, paper_ref: &'static str) -> Self {
        Noiseless {
            commutant_dim: r.commutant_dim,
            blocks: blocks(&r.structure),
            subsystems: r
                .subsystems
                .iter()
                .map(|s| SubsystemDoc { block: s.block, m: s.m, n: s.n, decoherence_free: s.decoherence_free })
                .collect(),
            basis_change: MatrixDoc::from(&r.structure.basis_change),
            paper_ref,
        }
    }
}

#[derive(Serialize)]
pub struct DeadSubspace {
    pub singular: bool,
    pub identity_image: MatrixDoc,
    pub dead_dimension: usize,
    pub dead_basis: Vec<StateDoc>,
    pub hypothesis_holds: Option<bool>,
    pub annihilation_residual: Option<f64>,
    pub paper_ref: &'static str,
}

#[derive(Serialize)]
pub struct Verdict {
    pub verdict: String,
    pub probability: f64,
    pub zero_probability: f64,
    pub paper_ref: &'static str,
}

#[derive(Serialize)]
pub struct Term {
    pub x: usize,
    pub fx: usize,
    pub amplitude: [f64; 2],
}

#[derive(Serialize)]
pub struct Parallelism {
    pub m: usize,
    pub k: usize,
    pub terms: Vec<Term>,
    pub state: StateDoc,
    pub paper_ref: &'static str,
}

#[derive(Serialize)]
pub struct Adder {
    pub n: usize,
    pub dim: usize,
    pub permutation_matrix: bool,
    /// `images[j]` is the basis index that column j is sent to.
    pub images: Vec<usize>,
    pub paper_ref: &'static str,
}
