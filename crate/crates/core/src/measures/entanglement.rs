//! Partial-transpose test, negativity and concurrence.

use crate::error::{Error, Result};
use crate::qlinalg::{herm_eig, psd_sqrt, ComplexMatrix, Subsystem, PSD_TOL};
use crate::states::DensityMatrix;

/// Eigenvalues of √ρ ρ̃ √ρ at or below this are rounding noise from
/// rank-deficient states and are taken as exactly zero.
const SPIN_FLIP_FLOOR: f64 = 1e-14;

fn require_two_qubits(rho: &DensityMatrix) -> Result<()> {
    if rho.dim() == 4 {
        Ok(())
    } else {
        Err(Error::invalid("expected a two-qubit (4x4) state"))
    }
}

/// Ascending spectrum of the partial transpose on qubit B.
pub fn partial_transpose_spectrum(rho: &DensityMatrix) -> Result<Vec<f64>> {
    require_two_qubits(rho)?;
    let pt = rho.matrix().partial_transpose(Subsystem::B)?;
    Ok(herm_eig(&pt)?.eigenvalues().to_vec())
}

/// PPT test: entangled iff the partial transpose has an eigenvalue below
/// `-1e-10`. Exact for two qubits.
pub fn is_entangled(rho: &DensityMatrix) -> Result<bool> {
    is_entangled_with(rho, PSD_TOL)
}

pub fn is_entangled_with(rho: &DensityMatrix, psd_tol: f64) -> Result<bool> {
    Ok(partial_transpose_spectrum(rho)?[0] < -psd_tol)
}

/// (‖ρ^{T_B}‖₁ − 1)/2, clamped at zero.
pub fn negativity(rho: &DensityMatrix) -> Result<f64> {
    let trace_norm: f64 = partial_transpose_spectrum(rho)?.iter().map(|l| l.abs()).sum();
    Ok(((trace_norm - 1.0) / 2.0).max(0.0))
}

/// Spin-flip concurrence max(0, λ₁ − λ₂ − λ₃ − λ₄), with λ the descending
/// square roots of the spectrum of √ρ (σy⊗σy) ρ* (σy⊗σy) √ρ.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubits(rho)?;
    let yy = ComplexMatrix::tensor(&ComplexMatrix::pauli_y(), &ComplexMatrix::pauli_y())?;
    let flipped = yy * rho.matrix().conj() * yy;
    let root = psd_sqrt(rho.matrix())?;
    let r = (root * flipped * root).hermitian_part();
    let mut lambdas: Vec<f64> = herm_eig(&r)?
        .eigenvalues()
        .iter()
        .map(|&mu| if mu <= SPIN_FLIP_FLOOR { 0.0 } else { mu.sqrt() })
        .collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    let c = lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3];
    Ok(c.clamp(0.0, 1.0))
}

/// Mixing weight above which the generalized Werner state is entangled:
/// (1 + k²) / (1 + k² + 4k). Returns 1 at k = 0.
pub fn gw_threshold(k: f64) -> Result<f64> {
    if !(k >= 0.0) || !k.is_finite() {
        return Err(Error::invalid(format!("k must be a finite real >= 0, got {k}")));
    }
    let k2 = k * k;
    Ok((1.0 + k2) / (1.0 + k2 + 4.0 * k))
}
