//! Discord function over rank-one projective measurements and its minimization.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::Serialize;

use super::simplex::NelderMead;
use super::{entropy, spectral_entropy};
use crate::error::{Error, Result};
use crate::qlinalg::{ComplexMatrix, Subsystem};
use crate::states::{bloch_ket, DensityMatrix};

/// Outcomes less likely than this contribute no conditional entropy.
const DEGENERATE_OUTCOME: f64 = 1e-14;
/// Discord values down to this are clamped to zero; lower is an error.
const NEGATIVE_SLACK: f64 = 1e-9;

/// Projective qubit measurement {|ψ(θ,φ)><ψ(θ,φ)|, I − |ψ><ψ|}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasurementBasis {
    pub theta: f64,
    pub phi: f64,
}

impl MeasurementBasis {
    /// Canonicalizes to θ ∈ [0, π], φ ∈ [0, 2π). Angles beyond θ = π are
    /// folded to the antipodal direction, which describes the same
    /// measurement with outcomes relabelled.
    pub fn new(theta: f64, phi: f64) -> MeasurementBasis {
        let mut theta = theta.rem_euclid(TAU);
        let mut phi = phi;
        if theta > PI {
            theta = TAU - theta;
            phi += PI;
        }
        let mut phi = phi.rem_euclid(TAU);
        if phi >= TAU {
            phi = 0.0;
        }
        MeasurementBasis { theta, phi }
    }

    pub fn computational() -> MeasurementBasis {
        MeasurementBasis { theta: 0.0, phi: 0.0 }
    }

    /// The two one-qubit projectors π₀, π₁ = I − π₀.
    pub fn projectors(&self) -> [ComplexMatrix; 2] {
        raw_projectors(self.theta, self.phi)
    }
}

fn raw_projectors(theta: f64, phi: f64) -> [ComplexMatrix; 2] {
    let p0 = bloch_ket(theta, phi).projector();
    [p0, ComplexMatrix::identity(2) - p0]
}

fn require_two_qubits(rho: &DensityMatrix) -> Result<()> {
    if rho.dim() == 4 {
        Ok(())
    } else {
        Err(Error::invalid("expected a two-qubit (4x4) state"))
    }
}

/// Σ_j p_j H(ρ_{unmeasured | j}) for the measurement `basis` on `measured`.
pub fn conditional_entropy_after_measurement(
    rho: &DensityMatrix,
    measured: Subsystem,
    basis: &MeasurementBasis,
) -> Result<f64> {
    require_two_qubits(rho)?;
    conditional_entropy(rho.matrix(), measured, basis.theta, basis.phi)
}

fn conditional_entropy(rho: &ComplexMatrix, measured: Subsystem, theta: f64, phi: f64) -> Result<f64> {
    let id = ComplexMatrix::identity(2);
    let mut total = 0.0;
    for p in raw_projectors(theta, phi) {
        let lifted = match measured {
            Subsystem::A => ComplexMatrix::tensor(&p, &id)?,
            Subsystem::B => ComplexMatrix::tensor(&id, &p)?,
        };
        let post = lifted * *rho * lifted;
        let prob = post.trace().re;
        if prob < DEGENERATE_OUTCOME {
            continue;
        }
        let conditional = post.scale_real(1.0 / prob).partial_trace(measured.other())?;
        total += prob * spectral_entropy(&conditional)?;
    }
    Ok(total)
}

/// Discord function for one measurement side with the basis-independent part
/// H(measured) − H(joint) precomputed.
struct Landscape<'a> {
    rho: &'a ComplexMatrix,
    measured: Subsystem,
    offset: f64,
}

impl<'a> Landscape<'a> {
    fn new(rho: &'a DensityMatrix, measured: Subsystem) -> Result<Self> {
        require_two_qubits(rho)?;
        let offset = entropy(&rho.marginal(measured)?)? - entropy(rho)?;
        Ok(Landscape {
            rho: rho.matrix(),
            measured,
            offset,
        })
    }

    fn eval(&self, theta: f64, phi: f64) -> Result<f64> {
        Ok(self.offset + conditional_entropy(self.rho, self.measured, theta, phi)?)
    }
}

fn clamp_discord(value: f64, context: &str) -> Result<f64> {
    if value < -NEGATIVE_SLACK {
        Err(Error::numeric(
            format!("{context} is negative ({value:e})"),
            Some(value),
        ))
    } else {
        Ok(value.max(0.0))
    }
}

/// H(measured) − H(joint) + H(unmeasured | measurement on `measured`).
pub fn discord_function(
    rho: &DensityMatrix,
    measured: Subsystem,
    basis: &MeasurementBasis,
) -> Result<f64> {
    let landscape = Landscape::new(rho, measured)?;
    clamp_discord(landscape.eval(basis.theta, basis.phi)?, "discord function")
}

/// Minimized discord for one measurement side, with where and how it was found.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscordResult {
    pub value: f64,
    pub basis: MeasurementBasis,
    /// Nelder-Mead iterations summed over all refinement starts.
    pub iterations: usize,
    pub evaluations: usize,
    /// Every refinement start met the spread criterion before the iteration cap.
    pub converged: bool,
}

/// Grid search over (θ, φ) followed by Nelder-Mead refinement of the best
/// grid points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscordOptimizer {
    /// Points per axis; θ spans [0, π] inclusive, φ spans [0, 2π).
    pub grid: usize,
    pub refine_iters: usize,
    pub starts: usize,
    pub spread_tol: f64,
}

impl Default for DiscordOptimizer {
    fn default() -> Self {
        DiscordOptimizer {
            grid: 64,
            refine_iters: 500,
            starts: 5,
            spread_tol: 1e-10,
        }
    }
}

impl DiscordOptimizer {
    pub fn minimize(&self, rho: &DensityMatrix, measured: Subsystem) -> Result<DiscordResult> {
        if self.grid < 2 {
            return Err(Error::invalid("discord grid needs at least 2 points per axis"));
        }
        let landscape = Landscape::new(rho, measured)?;
        let n = self.grid;
        let d_theta = PI / (n - 1) as f64;
        let d_phi = TAU / n as f64;

        // Row-major in (i, j) so a stable sort on value breaks ties by (θ, φ).
        let mut grid: Vec<(f64, f64, f64)> = (0..n * n)
            .into_par_iter()
            .map(|idx| {
                let theta = (idx / n) as f64 * d_theta;
                let phi = (idx % n) as f64 * d_phi;
                landscape.eval(theta, phi).map(|v| (v, theta, phi))
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(bad) = grid.iter().find(|g| !g.0.is_finite()) {
            return Err(Error::numeric(
                format!("discord function not finite at θ={}, φ={}", bad.1, bad.2),
                None,
            ));
        }
        grid.sort_by(|a, b| a.0.total_cmp(&b.0));

        let (mut best, mut best_theta, mut best_phi) = grid[0];
        let mut iterations = 0;
        let mut evaluations = n * n;
        let mut converged = true;
        let nm = NelderMead {
            max_iters: self.refine_iters,
            spread_tol: self.spread_tol,
        };
        for &(_, theta, phi) in grid.iter().take(self.starts) {
            let out = nm.minimize(
                |x: &[f64; 2]| landscape.eval(x[0], x[1]),
                [theta, phi],
                [d_theta, d_phi],
            )?;
            iterations += out.iterations;
            evaluations += out.evaluations;
            converged &= out.converged;
            if out.value < best {
                best = out.value;
                best_theta = out.x[0];
                best_phi = out.x[1];
            }
        }

        Ok(DiscordResult {
            value: clamp_discord(best, "minimized discord")?,
            basis: MeasurementBasis::new(best_theta, best_phi),
            iterations,
            evaluations,
            converged,
        })
    }

    /// Both one-sided discords, with their optimizer records (A side first).
    pub fn discord_vector(&self, rho: &DensityMatrix) -> Result<(DiscordVector, [DiscordResult; 2])> {
        let (a, b) = rayon::join(
            || self.minimize(rho, Subsystem::A),
            || self.minimize(rho, Subsystem::B),
        );
        let (a, b) = (a?, b?);
        Ok((
            DiscordVector {
                on_a: a.value,
                on_b: b.value,
            },
            [a, b],
        ))
    }
}

/// Discord minimized over measurements on `measured`, default optimizer.
pub fn discord(rho: &DensityMatrix, measured: Subsystem) -> Result<f64> {
    Ok(DiscordOptimizer::default().minimize(rho, measured)?.value)
}

/// The pair of one-sided discords.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscordVector {
    /// Measurement on qubit A.
    pub on_a: f64,
    /// Measurement on qubit B.
    pub on_b: f64,
}

impl DiscordVector {
    pub fn get(&self, measured: Subsystem) -> f64 {
        match measured {
            Subsystem::A => self.on_a,
            Subsystem::B => self.on_b,
        }
    }

    pub fn max(&self) -> f64 {
        self.on_a.max(self.on_b)
    }

    pub fn is_zero(&self, zero_tol: f64) -> bool {
        self.max() <= zero_tol
    }
}

pub fn discord_vector(rho: &DensityMatrix) -> Result<DiscordVector> {
    Ok(DiscordOptimizer::default().discord_vector(rho)?.0)
}
