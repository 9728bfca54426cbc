//! Quantum correlations of two-qubit states.
//!
//! The crate separates three kinds of nonclassicality in a two-qubit density
//! matrix: entanglement (detected exactly by the partial-transpose test and
//! quantified by concurrence and negativity), and local quantumness, which
//! shows up in the one-sided quantum discords of separable states built from
//! non-orthogonal product states.
//!
//! * [`qlinalg`] holds the dense 2x2 / 4x4 complex linear algebra.
//! * [`states`] builds validated kets, density matrices and the state families
//!   (Werner, generalized Werner, classical and quantum-classical mixtures).
//! * [`measures`] computes entropies, covariance, PPT/negativity, concurrence,
//!   the discord function and its minimization, and the classification.
//! * [`cli`] is the command-line front end behind the `qdiscord` binary.
//!
//! Basis order is |00>, |01>, |10>, |11> with qubit A as the left tensor factor.

pub mod cli;
pub mod error;
pub mod measures;
pub mod qlinalg;
pub mod states;

pub use error::{Error, Result};
pub use measures::{
    classify, concurrence, covariance, discord, discord_vector, entropy, gw_threshold,
    is_entangled, mutual_information_total, negativity, ClassificationLabel, DiscordOptimizer,
    DiscordVector, Label, MeasurementBasis, Tolerances,
};
pub use qlinalg::{ComplexMatrix, EigenDecomposition, Subsystem, C64};
pub use states::{DensityMatrix, Ket, MixtureComponent};
