//! Numerical toolkit for one-shot entanglement sharing over noisy qudit
//! channels.
//!
//! A sender prepares `|psi>` on `C^d (x) C^d`, keeps the first half and sends
//! the second through a channel given by Kraus operators. This crate builds
//! such channels (including the nonunital `Omega` family), evaluates the
//! singlet fraction, fully entangled fraction and negativity of the shared
//! state, and produces checkable certificates for the inequality chain that
//! separates nonmaximally entangled inputs from maximally entangled ones.
//!
//! Basis convention: `|i>|j>` is flat index `i * d + j`, with `i` on the kept
//! subsystem and `j` on the transmitted one.

pub mod channels;
pub mod error;
pub mod io;
pub mod linalg;
pub mod measures;
pub mod omega;
pub mod random;
pub mod search;
pub mod states;

pub use channels::{ChoiState, KrausChannel, TopEigenpair};
pub use error::{Error, ParamViolation, Result};
pub use linalg::{CMat, CVec};
pub use measures::{FefOptions, FefResult};
pub use omega::{OmegaParams, TheoremCertificate};
pub use search::{SearchOptions, SearchResult};
pub use states::{DensityOperator, PureBipartiteState, SchmidtDecomposition, Subsystem};
