use thiserror::Error;

use crate::exact::Var;

#[derive(Debug, Error)]
pub enum Error {
    #[error("variable mismatch: {left} vs {right}")]
    VarMismatch { left: String, right: String },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("invalid matrix dimensions: {0}")]
    BadDimensions(String),

    #[error("division is not exact")]
    InexactDivision,

    #[error("division by zero")]
    DivisionByZero,

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("tensor size M={m} exceeds cap {cap}")]
    SpinCapExceeded { m: u32, cap: u32 },

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("coupling {g} lies beyond the branch point g0 = 3^(-3/2); branch is ambiguous")]
    BeyondBranchPoint { g: f64 },

    #[error("{what}: no convergence up to {bits} bits")]
    NonConvergence { what: String, bits: u32 },

    #[error("evaluation point coincides with a pole: {0}")]
    Pole(String),

    #[error("no admissible singularity for M={0}")]
    NoAdmissibleCandidate(u32),

    #[error("branch selection is ambiguous for M={m}: {detail}")]
    BranchAmbiguity { m: u32, detail: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown {kind} `{name}`")]
    UnknownStrategy { kind: &'static str, name: String },
}

impl Error {
    pub(crate) fn var_mismatch(left: &[Var], right: &[Var]) -> Self {
        let show = |v: &[Var]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        Error::VarMismatch {
            left: show(left),
            right: show(right),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
