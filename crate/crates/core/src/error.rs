use thiserror::Error;

use crate::normalize::ParabolaClass;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong while building or analysing a germ.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("truncation order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("coordinate change has a nonzero constant term")]
    NonZeroConstant,

    #[error("coordinate change is not invertible at the origin (|det J| = {det:e})")]
    SingularJacobian { det: f64 },

    #[error("target matrix is not orthogonal")]
    NotOrthogonal,

    #[error("germ is not based at the origin: component {component} has constant term {value}")]
    NotOriginBased { component: usize, value: f64 },

    #[error("expected a corank 1 singular point, found corank {0}{suffix}", suffix = if *.0 == 0 { " (regular point)" } else { "" })]
    Corank(usize),

    #[error("{operation} requires {expected}, found {found}")]
    ClassMismatch {
        operation: &'static str,
        expected: &'static str,
        found: ParabolaClass,
    },

    #[error("under-resolved jet: need order >= {needed}, have {have}")]
    UnderResolved { needed: usize, have: usize },

    #[error("kernel not aligned with \u{2202}_v")]
    KernelNotAligned,

    #[error("germ is not in Monge form (first component must be u)")]
    NotMonge,

    #[error("numerical degeneracy: {0}")]
    Degenerate(&'static str),

    #[error("germ is not a frontal")]
    NotFrontal,

    #[error("not adapted: {0}")]
    NotAdapted(&'static str),

    #[error("swap components or not a fold")]
    NotAFold,

    #[error("axial frame undefined: the curvature parabola is the origin")]
    FrameUndefined,

    #[error("no transversal zero set: kappa_a = {0} is not negative")]
    NoTransversalZeroSet(f64),

    #[error("{0}")]
    Domain(String),

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("monomial {monomial} has total degree {degree}, above the truncation order {order}")]
    DegreeAboveOrder {
        monomial: String,
        degree: usize,
        order: usize,
    },

    #[error("invalid germ document: {0}")]
    Document(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Syntax { .. } | Error::DegreeAboveOrder { .. } | Error::Document(_) => 2,
            Error::Degenerate(_) | Error::SingularJacobian { .. } => 4,
            _ => 3,
        }
    }
}
