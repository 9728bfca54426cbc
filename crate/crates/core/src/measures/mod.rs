//! Correlation measures for two-qubit states.
//!
//! Entropies are in bits. Discords are labelled by the qubit that is measured:
//! `DiscordVector::on_b` is H(B) - H(AB) + H(A | measurement on B).

mod classify;
mod discord;
mod entanglement;
pub(crate) mod simplex;

pub use classify::{classify, classify_with, ClassificationLabel, Label};
pub use discord::{
    conditional_entropy_after_measurement, discord, discord_function, discord_vector,
    DiscordOptimizer, DiscordResult, DiscordVector, MeasurementBasis,
};
pub use entanglement::{
    concurrence, gw_threshold, is_entangled, is_entangled_with, negativity,
    partial_transpose_spectrum,
};

use crate::error::{Error, Result};
use crate::qlinalg::{herm_eig, ComplexMatrix, Subsystem, HERMITIAN_TOL, PSD_TOL};
use crate::states::DensityMatrix;

/// Thresholds that decide "zero" for discord and "negative" for eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// A discord component at or below this counts as zero.
    pub zero_tol: f64,
    /// An eigenvalue below `-psd_tol` counts as negative.
    pub psd_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            zero_tol: 1e-6,
            psd_tol: PSD_TOL,
        }
    }
}

/// Von Neumann entropy in bits of a Hermitian PSD matrix, with 0 log 0 = 0.
pub(crate) fn spectral_entropy(m: &ComplexMatrix) -> Result<f64> {
    let eig = herm_eig(m)?;
    let values = eig.eigenvalues();
    if values[0] < -PSD_TOL {
        return Err(Error::NotPositiveSemidefinite {
            min_eigenvalue: values[0],
        });
    }
    let h: f64 = values
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.log2())
        .sum();
    Ok(h.clamp(0.0, (m.dim() as f64).log2()))
}

/// −Tr ρ log₂ ρ
pub fn entropy(rho: &DensityMatrix) -> Result<f64> {
    spectral_entropy(rho.matrix())
}

fn check_observable(o: &ComplexMatrix, name: &str) -> Result<()> {
    if o.dim() != 2 {
        return Err(Error::invalid(format!("{name} must act on one qubit")));
    }
    if !o.is_hermitian(HERMITIAN_TOL) {
        return Err(Error::invalid(format!("{name} is not Hermitian")));
    }
    Ok(())
}

/// Tr(ρ O_A⊗O_B) − Tr(ρ_A O_A) Tr(ρ_B O_B).
pub fn covariance(rho: &DensityMatrix, ox: &ComplexMatrix, oy: &ComplexMatrix) -> Result<f64> {
    check_observable(ox, "observable on A")?;
    check_observable(oy, "observable on B")?;
    if rho.dim() != 4 {
        return Err(Error::invalid("covariance needs a two-qubit state"));
    }
    let joint = (*rho.matrix() * ComplexMatrix::tensor(ox, oy)?).trace();
    let mean_a = (*rho.marginal(Subsystem::A)?.matrix() * *ox).trace();
    let mean_b = (*rho.marginal(Subsystem::B)?.matrix() * *oy).trace();
    let cov = joint - mean_a * mean_b;
    if cov.im.abs() > 1e-10 {
        return Err(Error::numeric(
            format!("covariance has imaginary part {:e}", cov.im),
            Some(cov.re),
        ));
    }
    Ok(cov.re)
}

/// Quantum mutual information H(A) + H(B) − H(AB).
pub fn mutual_information_total(rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::invalid("mutual information needs a two-qubit state"));
    }
    let h_a = entropy(&rho.marginal(Subsystem::A)?)?;
    let h_b = entropy(&rho.marginal(Subsystem::B)?)?;
    let h_ab = entropy(rho)?;
    Ok((h_a + h_b - h_ab).max(0.0))
}
