//! Exact computations with the kernel bundles `E_{n,a}` on `P^n`.
//!
//! A bundle is presented as the kernel of a general map
//! `O(1)^{(n+2)a} -> O(2)^{2a}` given by a matrix of linear forms. The crate
//! samples such matrices over a large prime field, certifies that they are
//! general enough, computes cohomology tables by graded linear algebra,
//! restricts the bundles to ACM complete intersections, decides simplicity
//! through the stabilizer of the presentation matrix and assembles the
//! resulting wild representation type certificate for `X` re-embedded by
//! `O_X(s)`, `s >= 3`.
//!
//! Module map:
//!
//! - [`exactfield`]: prime-field and rational dense linear algebra, seeded RNG
//! - [`polyspace`]: monomial bases, multiplication maps, Hilbert functions
//! - [`presentation`]: matrices of linear forms and genericity certificates
//! - [`cohomology`]: exact and closed-form cohomology tables on `P^n`
//! - [`restriction`]: ACM subvarieties, restricted tables, vanishing chases
//! - [`moduli`]: stabilizers, family dimension, wildness reports
//! - [`report`]: canonical JSON and markdown rendering

pub mod cohomology;
pub mod exactfield;
pub mod moduli;
pub mod polyspace;
pub mod presentation;
pub mod report;
pub mod restriction;

use thiserror::Error;

pub use cohomology::{CohomologyTable, Provenance};
pub use exactfield::{DenseMatrix, FieldSpec, Prime, SeededRng};
pub use moduli::{StabilizerReport, WildnessReport};
pub use polyspace::{HomogeneousForm, MonomialBasis, ResolutionDegreeData};
pub use presentation::{KernelBundlePresentation, LinearFormMatrix, SurjectivityCertificate};
pub use restriction::{AcmVarietyDescriptor, AcmVerdict, VanishingChaseTrace};

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("random sampling requires a prime field")]
    UnsupportedSampling,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("exact mode needs explicit complete-intersection forms")]
    ExactModeUnavailable,
    #[error("no generic presentation found after {attempts} samples")]
    GenericityFailure { attempts: usize },
    #[error("variety of dimension {d} is too small (need d >= 2)")]
    DimensionTooSmall { d: i64 },
    #[error(
        "twist s = {s} refused: h^1(E(t)) survives at t = -1 and t = -2, \
         which O_X(s) reaches for s = 1, 2 (need s >= 3)"
    )]
    TwistTooSmall { s: u32 },
    #[error("vanishing chase failed at cell (i = {index}, twist offset {offset})")]
    ChaseFailure {
        index: usize,
        offset: i64,
        trace: Box<VanishingChaseTrace>,
    },
}

impl Error {
    /// Whether the error is a refusal of well-formed input (as opposed to
    /// malformed input).
    pub fn is_refusal(&self) -> bool {
        matches!(
            self,
            Error::Precondition(_)
                | Error::GenericityFailure { .. }
                | Error::DimensionTooSmall { .. }
                | Error::TwistTooSmall { .. }
                | Error::ChaseFailure { .. }
                | Error::ExactModeUnavailable
        )
    }
}
