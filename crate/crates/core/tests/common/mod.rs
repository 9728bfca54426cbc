//! Test helpers: seeded random states and unitaries, plus oracles that avoid
//! the library's eigensolver and optimizer.
#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use qdiscord::{ComplexMatrix, DensityMatrix, Subsystem, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_c64(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Hilbert-Schmidt random two-qubit state G G† / Tr.
pub fn random_state(rng: &mut impl Rng) -> DensityMatrix {
    let g: Vec<C64> = (0..16).map(|_| gaussian_c64(rng)).collect();
    let g = ComplexMatrix::from_row_major(4, &g).unwrap();
    let m = g * g.adjoint();
    let m = m.scale_real(1.0 / m.trace().re).hermitian_part();
    DensityMatrix::new(m).unwrap()
}

/// Random state of lower rank (1 or 2), which hits the degenerate corners.
pub fn random_low_rank_state(rng: &mut impl Rng, rank: usize) -> DensityMatrix {
    let mut m = ComplexMatrix::zeros(4);
    for _ in 0..rank {
        let v: Vec<C64> = (0..4).map(|_| gaussian_c64(rng)).collect();
        m = m + ComplexMatrix::outer(&v, &v).unwrap();
    }
    let m = m.scale_real(1.0 / m.trace().re).hermitian_part();
    DensityMatrix::new(m).unwrap()
}

pub fn random_hermitian(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let g: Vec<C64> = (0..dim * dim).map(|_| gaussian_c64(rng)).collect();
    ComplexMatrix::from_row_major(dim, &g).unwrap().hermitian_part()
}

pub fn random_matrix(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let g: Vec<C64> = (0..dim * dim).map(|_| gaussian_c64(rng)).collect();
    ComplexMatrix::from_row_major(dim, &g).unwrap()
}

/// Haar-ish 2x2 unitary from a normalized complex pair and a global phase.
pub fn random_unitary(rng: &mut impl Rng) -> ComplexMatrix {
    let a = gaussian_c64(rng);
    let b = gaussian_c64(rng);
    let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
    let (a, b) = (a / norm, b / norm);
    let phase = C64::from_polar(1.0, rng.random::<f64>() * TAU);
    ComplexMatrix::from_row_major(2, &[a * phase, -b.conj() * phase, b * phase, a.conj() * phase])
        .unwrap()
}

// ---------------------------------------------------------------------------
// Characteristic-polynomial eigenvalue oracle.

type Dense = Vec<Vec<C64>>;

fn dense(m: &ComplexMatrix) -> Dense {
    let n = m.dim();
    (0..n).map(|r| (0..n).map(|c| m[(r, c)]).collect()).collect()
}

fn dense_mul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    (0..n)
        .map(|r| (0..n).map(|c| (0..n).map(|k| a[r][k] * b[k][c]).sum()).collect())
        .collect()
}

/// Coefficients c_0..c_n (c_n = 1) of det(λI − A), by Faddeev-LeVerrier.
pub fn characteristic_polynomial(m: &ComplexMatrix) -> Vec<C64> {
    let a = dense(m);
    let n = a.len();
    let mut coeffs = vec![C64::new(0.0, 0.0); n + 1];
    coeffs[n] = C64::new(1.0, 0.0);
    let mut mk: Dense = vec![vec![C64::new(0.0, 0.0); n]; n];
    for k in 1..=n {
        let mut next = dense_mul(&a, &mk);
        for i in 0..n {
            next[i][i] += coeffs[n - k + 1];
        }
        let am = dense_mul(&a, &next);
        let tr: C64 = (0..n).map(|i| am[i][i]).sum();
        coeffs[n - k] = -tr / k as f64;
        mk = next;
    }
    coeffs
}

fn poly_eval(coeffs: &[C64], z: C64) -> C64 {
    coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

fn poly_derivative(coeffs: &[C64]) -> Vec<C64> {
    coeffs.iter().enumerate().skip(1).map(|(i, &c)| c * i as f64).collect()
}

/// Real parts of all roots of a monic polynomial, ascending
/// (Durand-Kerner, then Newton polishing).
pub fn polynomial_real_roots(coeffs: &[C64]) -> Vec<f64> {
    let n = coeffs.len() - 1;
    let scale = 1.0 + coeffs[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = C64::new(0.4, 0.9);
    let mut roots: Vec<C64> = (0..n).map(|i| seed.powu(i as u32) * scale).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut denom = C64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= roots[i] - roots[j];
                }
            }
            if denom.norm() == 0.0 {
                continue;
            }
            let step = poly_eval(coeffs, roots[i]) / denom;
            roots[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 * scale {
            break;
        }
    }
    let deriv = poly_derivative(coeffs);
    for r in roots.iter_mut() {
        for _ in 0..5 {
            let d = poly_eval(&deriv, *r);
            if d.norm() < 1e-12 {
                break;
            }
            let step = poly_eval(coeffs, *r) / d;
            if !step.re.is_finite() {
                break;
            }
            *r -= step;
        }
    }
    let mut re: Vec<f64> = roots.iter().map(|r| r.re).collect();
    re.sort_by(|a, b| a.total_cmp(b));
    re
}

pub fn oracle_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    polynomial_real_roots(&characteristic_polynomial(m))
}

pub fn det(m: &ComplexMatrix) -> C64 {
    // det(A) = (-1)^n c_0
    let c = characteristic_polynomial(m);
    if m.dim() % 2 == 0 {
        c[0]
    } else {
        -c[0]
    }
}

fn entropy_of_values(values: &[f64]) -> f64 {
    values
        .iter()
        .filter(|&&l| l > 1e-300)
        .map(|&l| -l * l.log2())
        .sum()
}

/// Entropy of a 2x2 density operator from its Bloch-vector length.
fn qubit_entropy(m: [[C64; 2]; 2]) -> f64 {
    let tr = (m[0][0] + m[1][1]).re;
    let x = 2.0 * m[0][1].re / tr;
    let y = -2.0 * m[0][1].im / tr;
    let z = (m[0][0] - m[1][1]).re / tr;
    let r = (x * x + y * y + z * z).sqrt().min(1.0);
    entropy_of_values(&[(1.0 + r) / 2.0, (1.0 - r) / 2.0])
}

/// Discord-function landscape evaluated by contracting the measured qubit
/// with the measurement kets directly.
pub struct GridOracle {
    rho: Dense,
    measured: Subsystem,
    offset: f64,
}

impl GridOracle {
    pub fn new(rho: &DensityMatrix, measured: Subsystem) -> Self {
        let m = rho.matrix();
        let joint = entropy_of_values(&oracle_eigenvalues(m));
        let d = dense(m);
        let mut marginal = [[C64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for t in 0..2 {
                    marginal[i][j] += match measured {
                        Subsystem::A => d[2 * i + t][2 * j + t],
                        Subsystem::B => d[2 * t + i][2 * t + j],
                    };
                }
            }
        }
        GridOracle {
            rho: d,
            measured,
            offset: qubit_entropy(marginal) - joint,
        }
    }

    pub fn eval(&self, theta: f64, phi: f64) -> f64 {
        let (s, c) = (theta / 2.0).sin_cos();
        let kets = [
            [C64::new(c, 0.0), C64::from_polar(s, phi)],
            [C64::new(s, 0.0), -C64::from_polar(c, phi)],
        ];
        let mut cond_entropy = 0.0;
        for psi in kets {
            // <psi|_measured rho |psi>_measured
            let mut sigma = [[C64::new(0.0, 0.0); 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    for b in 0..2 {
                        for b2 in 0..2 {
                            let (r, col) = match self.measured {
                                Subsystem::B => (2 * i + b, 2 * j + b2),
                                Subsystem::A => (2 * b + i, 2 * b2 + j),
                            };
                            sigma[i][j] += psi[b].conj() * self.rho[r][col] * psi[b2];
                        }
                    }
                }
            }
            let p = (sigma[0][0] + sigma[1][1]).re;
            if p > 1e-14 {
                cond_entropy += p * qubit_entropy(sigma);
            }
        }
        self.offset + cond_entropy
    }

    /// Minimum over an `n` x `n` grid, θ in [0, π] inclusive, φ in [0, 2π).
    pub fn grid_min(&self, n: usize) -> f64 {
        use rayon::prelude::*;
        (0..n)
            .into_par_iter()
            .map(|i| {
                let theta = i as f64 * PI / (n - 1) as f64;
                (0..n)
                    .map(|j| self.eval(theta, j as f64 * TAU / n as f64))
                    .fold(f64::INFINITY, f64::min)
            })
            .reduce(|| f64::INFINITY, f64::min)
    }
}

/// True when every eigenvalue of the Hermitian `m` is at least `-tol`:
/// `m + tol·I` must admit a Cholesky factorization.
pub fn is_psd_within(m: &ComplexMatrix, tol: f64) -> bool {
    let mut a = dense(m);
    let n = a.len();
    for (i, row) in a.iter_mut().enumerate() {
        row[i] += tol;
    }
    let mut l = vec![vec![C64::new(0.0, 0.0); n]; n];
    for j in 0..n {
        let diag = a[j][j].re - (0..j).map(|k| l[j][k].norm_sqr()).sum::<f64>();
        if diag <= 0.0 {
            return false;
        }
        l[j][j] = C64::new(diag.sqrt(), 0.0);
        for i in j + 1..n {
            let s: C64 = (0..j).map(|k| l[i][k] * l[j][k].conj()).sum();
            l[i][j] = (a[i][j] - s) / l[j][j];
        }
    }
    true
}
