//! Exact computation of minimal Bondal-Thomsen resolutions for closed
//! toric subvarieties and substacks, starting from the cellular complex of
//! the stratified real torus.
//!
//! The pipeline runs [`strat`] (cells of the periodic arrangement),
//! [`hhl`] (the cellular complex), [`grading`] (classes and per-class
//! Borel-Moore complexes), [`hpl`] (contraction and perturbation) and
//! [`paths`] (a zig-zag path oracle for the perturbation series).

pub mod cli;
pub mod grading;
pub mod hhl;
pub mod hpl;
pub mod paths;
pub mod pinv;
pub mod polyring;
pub mod ratlin;
pub mod strat;

pub use grading::{ClassId, GradingError};
pub use hhl::{build_hhl_complex, LineBundleComplex, NotAComplex};
pub use hpl::{minimal_resolution, HplError, MinimalResolution, MinresOptions};
pub use strat::{Quadruple, StratError};

/// Any failure of the pipeline.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Strat(#[from] StratError),
    #[error(transparent)]
    NotAComplex(#[from] NotAComplex),
    #[error(transparent)]
    Grading(#[from] GradingError),
    #[error(transparent)]
    Hpl(HplError),
    #[error(transparent)]
    Pinv(#[from] pinv::TooLarge),
    #[error(transparent)]
    Paths(#[from] paths::PathsError),
    #[error("{check} fails: {witness}")]
    Invariant { check: &'static str, witness: String },
}

impl From<HplError> for Error {
    fn from(e: HplError) -> Self {
        match e {
            HplError::Grading(g) => Error::Grading(g),
            other => Error::Hpl(other),
        }
    }
}

impl Error {
    /// Process exit code for the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Strat(_) => 3,
            Error::Grading(GradingError::NoPositiveGrading { .. }) => 4,
            Error::Grading(GradingError::BadUserBasis { .. }) => 3,
            Error::Hpl(HplError::InvalidContraction { .. }) => 3,
            Error::Pinv(_) => 3,
            Error::NotAComplex(_) | Error::Grading(_) | Error::Hpl(_) | Error::Paths(_) | Error::Invariant { .. } => 5,
        }
    }
}
