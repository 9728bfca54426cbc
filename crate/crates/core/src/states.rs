//! Validated kets, density matrices and the two-qubit state families.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::qlinalg::{herm_eig, ComplexMatrix, Subsystem, C64, I, ONE, PSD_TOL, ZERO};

/// Normalization tolerance for kets.
pub const NORM_TOL: f64 = 1e-12;
/// Hermiticity and trace tolerance for density matrices.
pub const DENSITY_TOL: f64 = 1e-10;
/// Mixture weights must sum to one within this.
pub const WEIGHT_TOL: f64 = 1e-12;

fn check_probability(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} must lie in [0, 1], got {p}")))
    }
}

/// Normalized pure state of one (dim 2) or two (dim 4) qubits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ket {
    dim: usize,
    amps: [C64; 4],
}

impl Ket {
    /// Wraps amplitudes that are already normalized.
    pub fn new(amps: &[C64]) -> Result<Ket> {
        let ket = Self::raw(amps)?;
        let norm = ket.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::invalid(format!("ket is not normalized (norm² = {norm})")));
        }
        Ok(ket)
    }

    /// Rescales the amplitudes to unit norm.
    pub fn normalized(amps: &[C64]) -> Result<Ket> {
        let mut ket = Self::raw(amps)?;
        let norm = ket.norm_sqr().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::invalid("cannot normalize a zero or non-finite vector"));
        }
        ket.amps.iter_mut().for_each(|a| *a /= norm);
        Ok(ket)
    }

    fn raw(amps: &[C64]) -> Result<Ket> {
        if amps.len() != 2 && amps.len() != 4 {
            return Err(Error::invalid(format!("ket dimension must be 2 or 4, got {}", amps.len())));
        }
        let mut buf = [ZERO; 4];
        buf[..amps.len()].copy_from_slice(amps);
        Ok(Ket {
            dim: amps.len(),
            amps: buf,
        })
    }

    fn norm_sqr(&self) -> f64 {
        self.amplitudes().iter().map(|a| a.norm_sqr()).sum()
    }

    fn qubit(a0: C64, a1: C64) -> Ket {
        Ket::normalized(&[a0, a1]).expect("nonzero qubit amplitudes")
    }

    /// |0>
    pub fn zero() -> Ket {
        Self::qubit(ONE, ZERO)
    }

    /// |1>
    pub fn one() -> Ket {
        Self::qubit(ZERO, ONE)
    }

    /// (|0> + |1>)/√2
    pub fn plus() -> Ket {
        Self::qubit(ONE, ONE)
    }

    /// (|0> - |1>)/√2
    pub fn minus() -> Ket {
        Self::qubit(ONE, -ONE)
    }

    /// (|0> + i|1>)/√2
    pub fn plus_i() -> Ket {
        Self::qubit(ONE, I)
    }

    /// (|0> - i|1>)/√2
    pub fn minus_i() -> Ket {
        Self::qubit(ONE, -I)
    }

    /// N(|0> + n|1>) with N = 1/√(1+|n|²).
    pub fn plus_n(n: C64) -> Ket {
        let norm = 1.0 / (1.0 + n.norm_sqr()).sqrt();
        Ket {
            dim: 2,
            amps: [ONE * norm, n * norm, ZERO, ZERO],
        }
    }

    /// N(-n*|0> + |1>), orthogonal to [`Ket::plus_n`].
    pub fn minus_n(n: C64) -> Ket {
        let norm = 1.0 / (1.0 + n.norm_sqr()).sqrt();
        Ket {
            dim: 2,
            amps: [-n.conj() * norm, ONE * norm, ZERO, ZERO],
        }
    }

    /// (|00> + |11>)/√2
    pub fn phi_plus() -> Ket {
        let s = C64::new(FRAC_1_SQRT_2, 0.0);
        Ket {
            dim: 4,
            amps: [s, ZERO, ZERO, s],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps[..self.dim]
    }

    /// `<self|other>`
    pub fn inner(&self, other: &Ket) -> C64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.amplitudes()
            .iter()
            .zip(other.amplitudes())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Two-qubit product `self ⊗ other`.
    pub fn tensor(&self, other: &Ket) -> Result<Ket> {
        if self.dim != 2 || other.dim != 2 {
            return Err(Error::invalid("tensor product of kets needs two qubits"));
        }
        let a = self.amplitudes();
        let b = other.amplitudes();
        Ok(Ket {
            dim: 4,
            amps: [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]],
        })
    }

    /// |ψ><ψ|
    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::outer(self.amplitudes(), self.amplitudes()).expect("valid ket dimension")
    }
}

/// Hermitian, unit-trace, positive semidefinite operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates `matrix` with the default PSD tolerance.
    pub fn new(matrix: ComplexMatrix) -> Result<DensityMatrix> {
        Self::with_psd_tol(matrix, PSD_TOL)
    }

    /// Validates `matrix`, accepting eigenvalues down to `-psd_tol`.
    pub fn with_psd_tol(matrix: ComplexMatrix, psd_tol: f64) -> Result<DensityMatrix> {
        if matrix.entries().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::invalid("density matrix has non-finite entries"));
        }
        let asym = matrix.hermiticity_error();
        if asym > DENSITY_TOL {
            return Err(Error::invalid(format!(
                "density matrix is not Hermitian (max asymmetry {asym:e})"
            )));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > DENSITY_TOL || tr.im.abs() > DENSITY_TOL {
            return Err(Error::invalid(format!("density matrix trace is {tr}, expected 1")));
        }
        let min = herm_eig(&matrix)?.eigenvalues()[0];
        if min < -psd_tol {
            return Err(Error::NotPositiveSemidefinite {
                min_eigenvalue: min,
            });
        }
        Ok(DensityMatrix { matrix })
    }

    pub fn from_ket(ket: &Ket) -> DensityMatrix {
        DensityMatrix {
            matrix: ket.projector(),
        }
    }

    /// I/dim
    pub fn maximally_mixed(dim: usize) -> DensityMatrix {
        DensityMatrix {
            matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    /// `rho_a ⊗ rho_b`
    pub fn product(a: &DensityMatrix, b: &DensityMatrix) -> Result<DensityMatrix> {
        Ok(DensityMatrix {
            matrix: ComplexMatrix::tensor(&a.matrix, &b.matrix)?,
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Reduced state of one qubit of a two-qubit state.
    pub fn marginal(&self, keep: Subsystem) -> Result<DensityMatrix> {
        Ok(DensityMatrix {
            matrix: self.matrix.partial_trace(keep)?,
        })
    }

    /// Spectrum, ascending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(herm_eig(&self.matrix)?.eigenvalues().to_vec())
    }

    /// Tr(ρ²)
    pub fn purity(&self) -> f64 {
        (self.matrix * self.matrix).trace().re
    }

    /// `(u ⊗ v) ρ (u ⊗ v)†` for 2x2 unitaries `u` on A and `v` on B.
    pub fn local_unitary(&self, u: &ComplexMatrix, v: &ComplexMatrix) -> Result<DensityMatrix> {
        let uv = ComplexMatrix::tensor(u, v)?;
        if (uv.adjoint() * uv).max_abs_diff(&ComplexMatrix::identity(4)) > 1e-10 {
            return Err(Error::invalid("local operation is not unitary"));
        }
        let mut m = self.matrix.conjugate_by(&uv);
        m = m.hermitian_part();
        Ok(DensityMatrix { matrix: m })
    }

    /// Exchanges the roles of qubits A and B.
    pub fn swap_qubits(&self) -> Result<DensityMatrix> {
        if self.dim() != 4 {
            return Err(Error::invalid("qubit swap needs a two-qubit state"));
        }
        let perm = [0usize, 2, 1, 3];
        let mut m = ComplexMatrix::zeros(4);
        for r in 0..4 {
            for c in 0..4 {
                m[(perm[r], perm[c])] = self.matrix[(r, c)];
            }
        }
        Ok(DensityMatrix { matrix: m })
    }
}

/// One weighted term `p_i ρ_i` of a convex decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureComponent {
    pub weight: f64,
    pub state: DensityMatrix,
}

impl MixtureComponent {
    pub fn new(weight: f64, state: DensityMatrix) -> Result<MixtureComponent> {
        check_probability("mixture weight", weight)?;
        Ok(MixtureComponent { weight, state })
    }

    fn pure(weight: f64, ket: Ket) -> MixtureComponent {
        MixtureComponent {
            weight,
            state: DensityMatrix::from_ket(&ket),
        }
    }
}

/// Convex combination `Σ p_i ρ_i`.
pub fn mix(components: &[MixtureComponent]) -> Result<DensityMatrix> {
    let first = components
        .first()
        .ok_or_else(|| Error::invalid("mixture needs at least one component"))?;
    let dim = first.state.dim();
    let mut total = 0.0;
    let mut m = ComplexMatrix::zeros(dim);
    for c in components {
        if !(c.weight >= 0.0) {
            return Err(Error::invalid(format!("negative mixture weight {}", c.weight)));
        }
        if c.state.dim() != dim {
            return Err(Error::invalid("mixture components have different dimensions"));
        }
        total += c.weight;
        m = m + c.state.matrix.scale_real(c.weight);
    }
    if (total - 1.0).abs() > WEIGHT_TOL {
        return Err(Error::invalid(format!("mixture weights sum to {total}, expected 1")));
    }
    DensityMatrix::new(m)
}

/// cos(θ/2)|0> + e^{iφ} sin(θ/2)|1>
pub fn bloch_ket(theta: f64, phi: f64) -> Ket {
    let (s, c) = (theta / 2.0).sin_cos();
    Ket {
        dim: 2,
        amps: [C64::new(c, 0.0), C64::from_polar(s, phi), ZERO, ZERO],
    }
}

fn product_ket(a: Ket, b: Ket) -> Ket {
    a.tensor(&b).expect("single-qubit factors")
}

/// Maximally entangled |Φ+><Φ+|.
pub fn bell() -> DensityMatrix {
    DensityMatrix::from_ket(&Ket::phi_plus())
}

/// Pure and classically mixed product states of the `rho_a`/`rho_b`/`rho_c` family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RhoAbc {
    /// |++><++|
    A,
    /// p|++><++| + (1-p)|--><--|
    B,
    /// q|++><++| + (1-q)|00><00|
    C,
}

pub fn rho_abc(which: RhoAbc, mix_weight: f64) -> Result<DensityMatrix> {
    let pp = product_ket(Ket::plus(), Ket::plus());
    if which == RhoAbc::A {
        return Ok(DensityMatrix::from_ket(&pp));
    }
    check_probability("mixing parameter", mix_weight)?;
    let other = match which {
        RhoAbc::B => product_ket(Ket::minus(), Ket::minus()),
        _ => product_ket(Ket::zero(), Ket::zero()),
    };
    mix(&[
        MixtureComponent::pure(mix_weight, pp),
        MixtureComponent::pure(1.0 - mix_weight, other),
    ])
}

/// Separable two-component mixtures with classical, one-sided and two-sided
/// local superposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rho1234 {
    /// p|00><00| + (1-p)|11><11|
    One,
    /// p|++><++| + (1-p)|0-><0-|
    Two,
    /// p|++><++| + (1-p)|-0><-0|
    Three,
    /// p|++><++| + (1-p)|00><00|
    Four,
}

pub fn rho_1234(which: Rho1234, p: f64) -> Result<DensityMatrix> {
    check_probability("p", p)?;
    let (first, second) = match which {
        Rho1234::One => (
            product_ket(Ket::zero(), Ket::zero()),
            product_ket(Ket::one(), Ket::one()),
        ),
        Rho1234::Two => (
            product_ket(Ket::plus(), Ket::plus()),
            product_ket(Ket::zero(), Ket::minus()),
        ),
        Rho1234::Three => (
            product_ket(Ket::plus(), Ket::plus()),
            product_ket(Ket::minus(), Ket::zero()),
        ),
        Rho1234::Four => (
            product_ket(Ket::plus(), Ket::plus()),
            product_ket(Ket::zero(), Ket::zero()),
        ),
    };
    mix(&[
        MixtureComponent::pure(p, first),
        MixtureComponent::pure(1.0 - p, second),
    ])
}

/// (1-p) I/4 + p |Φ+><Φ+|
pub fn werner(p: f64) -> Result<DensityMatrix> {
    check_probability("p", p)?;
    mix(&[
        MixtureComponent {
            weight: 1.0 - p,
            state: DensityMatrix::maximally_mixed(4),
        },
        MixtureComponent {
            weight: p,
            state: bell(),
        },
    ])
}

/// Werner state written as (1-3p) I/4 plus weight p/2 on each of six product
/// states, valid for p ≤ 1/3. The I/4 term comes first.
pub fn werner_separable_decomposition(p: f64) -> Result<Vec<MixtureComponent>> {
    check_probability("p", p)?;
    let residual = 1.0 - 3.0 * p;
    if residual < -WEIGHT_TOL {
        return Err(Error::invalid(format!(
            "separable decomposition is a valid density operator only for p <= 1/3, got {p}"
        )));
    }
    let half = p / 2.0;
    let products = [
        (Ket::plus(), Ket::plus()),
        (Ket::minus(), Ket::minus()),
        (Ket::zero(), Ket::zero()),
        (Ket::one(), Ket::one()),
        (Ket::plus_i(), Ket::minus_i()),
        (Ket::minus_i(), Ket::plus_i()),
    ];
    let mut components = Vec::with_capacity(7);
    components.push(MixtureComponent {
        weight: residual.max(0.0),
        state: DensityMatrix::maximally_mixed(4),
    });
    components.extend(
        products
            .into_iter()
            .map(|(a, b)| MixtureComponent::pure(half, product_ket(a, b))),
    );
    Ok(components)
}

/// Unitary sending |0> to |+>_n and |1> to |->_n.
pub fn superposition_basis(n: C64) -> ComplexMatrix {
    let plus = Ket::plus_n(n);
    let minus = Ket::minus_n(n);
    let (p, m) = (plus.amplitudes(), minus.amplitudes());
    ComplexMatrix::from_row_major(2, &[p[0], m[0], p[1], m[1]]).expect("2x2")
}

/// N_nk (|+>_n|+>_n + k|->_n|->_n) with N_nk = 1/√(1+k²).
pub fn phi_nk(n: C64, k: f64) -> Result<Ket> {
    if !(k >= 0.0) || !k.is_finite() {
        return Err(Error::invalid(format!("k must be a finite real >= 0, got {k}")));
    }
    if !n.re.is_finite() || !n.im.is_finite() {
        return Err(Error::invalid("n must be finite"));
    }
    let pp = product_ket(Ket::plus_n(n), Ket::plus_n(n));
    let mm = product_ket(Ket::minus_n(n), Ket::minus_n(n));
    let norm = 1.0 / (1.0 + k * k).sqrt();
    let amps: Vec<C64> = pp
        .amplitudes()
        .iter()
        .zip(mm.amplitudes())
        .map(|(a, b)| (a + b * k) * norm)
        .collect();
    Ket::new(&amps)
}

/// (1-p) I/4 + p |Φ_nk><Φ_nk|
pub fn generalized_werner(p: f64, n: C64, k: f64) -> Result<DensityMatrix> {
    check_probability("p", p)?;
    let phi = phi_nk(n, k)?;
    mix(&[
        MixtureComponent {
            weight: 1.0 - p,
            state: DensityMatrix::maximally_mixed(4),
        },
        MixtureComponent::pure(p, phi),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn close(a: &DensityMatrix, b: &DensityMatrix, tol: f64) -> bool {
        a.matrix().max_abs_diff(b.matrix()) < tol
    }

    #[test]
    fn bloch_poles_and_equator() {
        let k = bloch_ket(0.0, 0.0);
        assert!((k.inner(&Ket::zero()).norm() - 1.0).abs() < 1e-15);
        let k = bloch_ket(PI, 0.0);
        assert!((k.inner(&Ket::one()).norm() - 1.0).abs() < 1e-15);
        let k = bloch_ket(PI / 2.0, 0.0);
        assert!((k.inner(&Ket::plus()) - ONE).norm() < 1e-15);
    }

    #[test]
    fn ket_validation() {
        assert!(Ket::new(&[ONE, ONE]).is_err());
        assert!(Ket::normalized(&[ZERO, ZERO]).is_err());
        assert!(Ket::new(&[ONE, ZERO, ZERO]).is_err());
    }

    #[test]
    fn rho_a_is_pure() {
        let r = rho_abc(RhoAbc::A, f64::NAN).unwrap();
        assert!((r.purity() - 1.0).abs() < 1e-14);
        let ev = r.eigenvalues().unwrap();
        assert_eq!(ev.iter().filter(|&&l| l > 1e-10).count(), 1);
    }

    #[test]
    fn rho_b_degenerate_mixture() {
        let r = rho_abc(RhoAbc::B, 1.0).unwrap();
        assert!(close(&r, &rho_abc(RhoAbc::A, 0.0).unwrap(), 1e-15));
        assert!(rho_abc(RhoAbc::B, 1.5).is_err());
    }

    #[test]
    fn rho_c_spectrum() {
        // |<++|00>|² = 1/4, so the Gram matrix [[.5,.25],[.25,.5]] has eigenvalues .75, .25
        let ev = rho_abc(RhoAbc::C, 0.5).unwrap().eigenvalues().unwrap();
        let want = [0.0, 0.0, 0.25, 0.75];
        for (a, b) in ev.iter().zip(want) {
            assert!((a - b).abs() < 1e-12, "{ev:?}");
        }
    }

    #[test]
    fn rho_1234_examples() {
        let r = rho_1234(Rho1234::One, 0.5).unwrap();
        let want = ComplexMatrix::from_real_diagonal(&[0.5, 0.0, 0.0, 0.5]).unwrap();
        assert!(r.matrix().max_abs_diff(&want) < 1e-15);

        let r = rho_1234(Rho1234::Four, 1.0).unwrap();
        assert!(close(&r, &rho_abc(RhoAbc::A, 0.0).unwrap(), 1e-15));

        let ev = rho_1234(Rho1234::Two, 0.5).unwrap().eigenvalues().unwrap();
        assert_eq!(ev.iter().filter(|&&l| l > 1e-10).count(), 2);

        assert!(rho_1234(Rho1234::Three, -0.1).is_err());
    }

    #[test]
    fn werner_examples() {
        assert!(close(&werner(0.0).unwrap(), &DensityMatrix::maximally_mixed(4), 1e-15));
        assert!(close(&werner(1.0).unwrap(), &bell(), 1e-15));
        let ev = werner(0.5).unwrap().eigenvalues().unwrap();
        let want = [0.125, 0.125, 0.125, 0.625];
        for (a, b) in ev.iter().zip(want) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(werner(1.01).is_err());
    }

    #[test]
    fn werner_marginal_is_maximally_mixed() {
        let m = werner(0.5).unwrap().marginal(Subsystem::B).unwrap();
        assert!(close(&m, &DensityMatrix::maximally_mixed(2), 1e-15));
    }

    #[test]
    fn separable_decomposition_reassembles() {
        for p in [0.0, 0.1, 0.2, 1.0 / 3.0] {
            let parts = werner_separable_decomposition(p).unwrap();
            assert_eq!(parts.len(), 7);
            let sum: f64 = parts.iter().map(|c| c.weight).sum();
            assert!((sum - 1.0).abs() < 1e-12);
            let rho = mix(&parts).unwrap();
            assert!(close(&rho, &werner(p).unwrap(), 1e-12), "p = {p}");
        }
        let boundary = werner_separable_decomposition(1.0 / 3.0).unwrap();
        assert_eq!(boundary[0].weight, 0.0);
        assert!(boundary[1..].iter().all(|c| (c.weight - 1.0 / 6.0).abs() < 1e-15));
        assert!(werner_separable_decomposition(0.35).is_err());
    }

    #[test]
    fn generalized_werner_reduces_to_werner() {
        for p in [0.0, 0.3, 0.77, 1.0] {
            let gw = generalized_werner(p, ZERO, 1.0).unwrap();
            assert!(close(&gw, &werner(p).unwrap(), 1e-15));
        }
        assert!(generalized_werner(0.9, C64::new(0.7, 0.0), 0.5).is_ok());
        assert!(generalized_werner(0.5, ZERO, -1.0).is_err());
    }

    #[test]
    fn mix_errors_and_singleton() {
        let rho = werner(0.4).unwrap();
        assert_eq!(mix(&[MixtureComponent::new(1.0, rho).unwrap()]).unwrap(), rho);
        assert!(mix(&[]).is_err());
        let half = MixtureComponent { weight: 0.5, state: rho };
        assert!(mix(&[half]).is_err());
        let neg = MixtureComponent { weight: -0.5, state: rho };
        let big = MixtureComponent { weight: 1.5, state: rho };
        assert!(mix(&[neg, big]).is_err());
        assert!(MixtureComponent::new(1.2, rho).is_err());
    }

    #[test]
    fn mix_of_orthogonal_products() {
        let a = DensityMatrix::from_ket(&product_ket(Ket::zero(), Ket::zero()));
        let b = DensityMatrix::from_ket(&product_ket(Ket::one(), Ket::one()));
        let m = mix(&[
            MixtureComponent::new(0.5, a).unwrap(),
            MixtureComponent::new(0.5, b).unwrap(),
        ])
        .unwrap();
        assert!(close(&m, &rho_1234(Rho1234::One, 0.5).unwrap(), 1e-15));
    }

    #[test]
    fn density_validation() {
        let not_unit = ComplexMatrix::identity(4);
        assert!(DensityMatrix::new(not_unit).is_err());
        let negative = ComplexMatrix::from_real_diagonal(&[1.5, -0.5]).unwrap();
        assert!(matches!(
            DensityMatrix::new(negative),
            Err(Error::NotPositiveSemidefinite { .. })
        ));
        let asym = ComplexMatrix::from_real(2, &[0.5, 0.1, 0.0, 0.5]).unwrap();
        assert!(DensityMatrix::new(asym).is_err());
    }

    #[test]
    fn swap_exchanges_rho2_and_rho3() {
        for p in [0.0, 0.25, 0.5, 0.9] {
            let two = rho_1234(Rho1234::Two, p).unwrap();
            let three = rho_1234(Rho1234::Three, p).unwrap();
            assert!(close(&two.swap_qubits().unwrap(), &three, 1e-12));
        }
    }
}
