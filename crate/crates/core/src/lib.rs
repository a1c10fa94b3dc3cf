//! Second-order geometry of corank-1 surface germs `f: (R^2, 0) -> (R^3, 0)`.
//!
//! The pipeline runs bottom-up:
//!
//! * [`jet`]: truncated bivariate Taylor polynomials, germs and coordinate changes.
//! * [`normalize`]: corank detection, Monge form, 2-jet classification and the
//!   adapted charts used by the contact and fold analyses.
//! * [`parabola`]: curvature parabola, axial frame, asymptotic directions.
//! * [`invariants`]: axial, umbilic and singular curvature; frontality.
//! * [`contact`]: the height function along the axial vector and the curves
//!   it cuts out.
//! * [`blowup`]: Gaussian curvature on the blow-up of a fold and the
//!   apparent-contour profile.
//! * [`parse`], [`report`], [`export`]: text input, full reports and tabular
//!   output.

pub mod blowup;
pub mod contact;
pub mod error;
pub mod export;
pub mod invariants;
pub mod jet;
pub mod normalize;
pub mod parabola;
pub mod parse;
pub mod report;

pub use error::{Error, Result};
pub use jet::{MapGerm, SourceChange, TargetIsometry, TruncatedPoly2, Var};
pub use normalize::{MongeData, ParabolaClass};

/// Base factor of the degeneracy tolerance.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Degeneracy threshold `τ = base · (1 + scale)`, where `scale` is the largest
/// 2-jet coefficient magnitude of the germ under study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub base: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            base: DEFAULT_TOLERANCE,
        }
    }
}

impl Tolerance {
    pub fn new(base: f64) -> Self {
        Self { base }
    }

    pub fn tau(&self, scale: f64) -> f64 {
        self.base * (1.0 + scale)
    }
}
