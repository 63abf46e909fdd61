//! Hamiltonian builders for the dimerized Kitaev-Hubbard chain with a complex
//! nearest-neighbour interaction `U - i delta`.
//!
//! Three representations are produced:
//! * the interacting many-body operator on the full Fock space (open chain),
//! * the quadratic Nambu matrix valid at `mu = 0`, `pairing = hopping`,
//! * the 4x4 Bloch matrix of the two-site unit cell, for bulk analytics.

use faer::Mat;
use num_complex::Complex64 as c64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{assemble, Factor, FockBasis, ManyBodyOperator, Term};

/// Physical parameters of the chain. `hopping` is the energy unit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainParams {
    pub hopping: f64,
    pub pairing: f64,
    pub hubbard_u: f64,
    /// Non-Hermitian part of the interaction; the bond coupling is `U - i delta`.
    pub nh_delta: f64,
    pub mu: f64,
    pub eta: f64,
    pub length: usize,
}

impl Default for ChainParams {
    fn default() -> Self {
        Self { hopping: 1.0, pairing: 1.0, hubbard_u: 0.0, nh_delta: 0.0, mu: 0.0, eta: 0.0, length: 2 }
    }
}

/// Relative tolerance for "pairing equals hopping" and "mu vanishes".
const SOLVABLE_TOL: f64 = 1e-12;

impl ChainParams {
    /// Parameters in the exactly solvable limit (`mu = 0`, `pairing = hopping`).
    pub fn solvable(hopping: f64, hubbard_u: f64, nh_delta: f64, eta: f64, length: usize) -> Self {
        Self { hopping, pairing: hopping, hubbard_u, nh_delta, mu: 0.0, eta, length }
    }

    pub fn with_length(mut self, length: usize) -> Self {
        self.length = length;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let reals = [self.hopping, self.pairing, self.hubbard_u, self.nh_delta, self.mu, self.eta];
        if reals.iter().any(|x| !x.is_finite()) {
            return Err(Error::Parameter("all chain parameters must be finite".into()));
        }
        if self.hopping <= 0.0 {
            return Err(Error::Parameter(format!("hopping must be positive, got {}", self.hopping)));
        }
        if self.length < 2 {
            return Err(Error::Parameter(format!("chain length must be at least 2, got {}", self.length)));
        }
        if !(-1.0..=1.0).contains(&self.eta) {
            return Err(Error::Parameter(format!("dimerization eta must lie in [-1, 1], got {}", self.eta)));
        }
        Ok(())
    }

    pub fn is_solvable_limit(&self) -> bool {
        let scale = self.hopping.abs().max(1.0);
        self.mu.abs() <= SOLVABLE_TOL * scale && (self.pairing - self.hopping).abs() <= SOLVABLE_TOL * scale
    }

    pub fn require_solvable(&self, what: &str) -> Result<()> {
        if self.is_solvable_limit() {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "{what} requires mu = 0 and pairing = hopping (got mu = {}, pairing = {}, hopping = {})",
                self.mu, self.pairing, self.hopping
            )))
        }
    }

    /// `U - i delta`.
    pub fn complex_u(&self) -> c64 {
        c64::new(self.hubbard_u, -self.nh_delta)
    }
}

/// Bond-resolved couplings; index `j - 1` holds bond `j` between sites `j` and `j + 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct DimerizedCouplings {
    pub hopping: Vec<f64>,
    pub pairing: Vec<f64>,
    pub hubbard_u: Vec<f64>,
    pub nh_delta: Vec<f64>,
}

impl DimerizedCouplings {
    pub fn bonds(&self) -> usize {
        self.hopping.len()
    }

    /// `U_j - i delta_j` for 1-based bond `j`.
    pub fn complex_u(&self, bond: usize) -> c64 {
        c64::new(self.hubbard_u[bond - 1], -self.nh_delta[bond - 1])
    }
}

/// Multiplier applied to bond `j` (1-based): `1 + eta` on odd bonds, `1 - eta` on even ones.
pub fn bond_factor(eta: f64, bond: usize) -> f64 {
    if bond % 2 == 1 {
        1.0 + eta
    } else {
        1.0 - eta
    }
}

pub fn dimerize(params: &ChainParams) -> DimerizedCouplings {
    let bonds = params.length.saturating_sub(1);
    let scaled = |base: f64| -> Vec<f64> { (1..=bonds).map(|j| base * bond_factor(params.eta, j)).collect() };
    DimerizedCouplings {
        hopping: scaled(params.hopping),
        pairing: scaled(params.pairing),
        hubbard_u: scaled(params.hubbard_u),
        nh_delta: scaled(params.nh_delta),
    }
}

/// Operator terms of the interacting open-chain Hamiltonian.
pub fn interacting_terms(params: &ChainParams) -> Vec<Term> {
    use Factor::*;
    let couplings = dimerize(params);
    let mut terms = Vec::with_capacity(8 * couplings.bonds() + 2 * params.length);
    for j in 1..=couplings.bonds() {
        let t = couplings.hopping[j - 1];
        let d = couplings.pairing[j - 1];
        let u = couplings.complex_u(j);
        terms.push(Term::new(-t, vec![Create(j), Annihilate(j + 1)]));
        terms.push(Term::new(-t, vec![Create(j + 1), Annihilate(j)]));
        terms.push(Term::new(-d, vec![Create(j), Create(j + 1)]));
        terms.push(Term::new(-d, vec![Annihilate(j + 1), Annihilate(j)]));
        // (2n_j - 1)(2n_{j+1} - 1) = 4 n_j n_{j+1} - 2 n_j - 2 n_{j+1} + 1
        terms.push(Term::new(4.0 * u, vec![Density(j), Density(j + 1)]));
        terms.push(Term::new(-2.0 * u, vec![Density(j)]));
        terms.push(Term::new(-2.0 * u, vec![Density(j + 1)]));
        terms.push(Term::new(u, vec![Identity]));
    }
    if params.mu != 0.0 {
        for j in 1..=params.length {
            terms.push(Term::new(-params.mu, vec![Density(j)]));
        }
        terms.push(Term::new(0.5 * params.mu * params.length as f64, vec![Identity]));
    }
    terms
}

/// Interacting Hamiltonian on the full Fock space with open boundaries.
pub fn build_interacting_h(params: &ChainParams, basis: &FockBasis) -> Result<ManyBodyOperator> {
    params.validate()?;
    if basis.sites() != params.length {
        return Err(Error::Construction(format!(
            "basis has {} sites but the chain has length {}",
            basis.sites(),
            params.length
        )));
    }
    assemble(&interacting_terms(params), basis)
}

/// Quadratic Nambu form `H = 1/2 C^† M C + offset` in the basis
/// `C = (f_1 .. f_L, f^†_1 .. f^†_L)`.
///
/// The stored [`matrix`](Self::matrix) is `M / 2`, so its eigenvalues are
/// `±Λ/2` and a many-body energy is `Σ_m s_m Λ_m/2 + offset` with `s_m = ±1`.
#[derive(Clone, Debug)]
pub struct QuadraticModel {
    length: usize,
    matrix: Mat<c64>,
    offset: c64,
}

impl QuadraticModel {
    pub fn length(&self) -> usize {
        self.length
    }

    pub fn matrix(&self) -> &Mat<c64> {
        &self.matrix
    }

    /// Constant `Tr(H) / 2^L` of the many-body operator.
    pub fn offset(&self) -> c64 {
        self.offset
    }
}

/// Free-fermion form of the chain at `mu = 0`, `pairing = hopping`.
///
/// Bond `j` contributes `(-t_j + Ũ_j)` to the hopping `f^†_{j+1} f_j + h.c.`
/// and `(-t_j - Ũ_j)` to the pairing `f^†_j f^†_{j+1} + f_{j+1} f_j`.
pub fn build_quadratic_h(params: &ChainParams) -> Result<QuadraticModel> {
    params.validate()?;
    params.require_solvable("the quadratic model")?;
    let l = params.length;
    let couplings = dimerize(params);

    // Blocks of the full BdG matrix M = [[A, B], [C, -A^T]].
    let mut m = Mat::<c64>::zeros(2 * l, 2 * l);
    for j in 1..=couplings.bonds() {
        let (a, b) = (j - 1, j);
        let t = couplings.hopping[j - 1];
        let u = couplings.complex_u(j);
        let hop = -t + u;
        let pair = -t - u;
        m[(a, b)] += hop;
        m[(b, a)] += hop;
        m[(l + a, l + b)] -= hop;
        m[(l + b, l + a)] -= hop;
        m[(a, l + b)] += pair;
        m[(b, l + a)] -= pair;
        m[(l + b, a)] += pair;
        m[(l + a, b)] -= pair;
    }
    let trace_a: c64 = (0..l).map(|i| m[(i, i)]).sum();
    let matrix = Mat::from_fn(2 * l, 2 * l, |i, j| m[(i, j)] * 0.5);
    Ok(QuadraticModel { length: l, matrix, offset: trace_a * 0.5 })
}

/// Momentum-space Bogoliubov matrix of the two-site unit cell in the basis
/// `(f^†_{kA}, f^†_{kB}, f_{-kA}, f_{-kB})`, scaled by 1/2 so its eigenvalues are `±Λ_k/2`.
#[derive(Clone, Copy, Debug)]
pub struct BlochMatrix {
    pub k: f64,
    pub matrix: [[c64; 4]; 4],
    pub z: c64,
    pub w: c64,
    /// `-t + Ũ`
    pub a1: c64,
    /// `-(t + Ũ)`
    pub a2: c64,
}

impl BlochMatrix {
    pub fn to_mat(&self) -> Mat<c64> {
        Mat::from_fn(4, 4, |i, j| self.matrix[i][j])
    }
}

pub fn bloch_matrix(params: &ChainParams, k: f64) -> Result<BlochMatrix> {
    params.require_solvable("the Bloch matrix")?;
    let eta = params.eta;
    let phase = c64::from_polar(1.0, -k);
    let z = (1.0 + eta) + phase * (1.0 - eta);
    let w = (1.0 + eta) - phase * (1.0 - eta);
    let u = params.complex_u();
    let a1 = -params.hopping + u;
    let a2 = -(params.hopping + u);
    let zero = c64::new(0.0, 0.0);
    let full = [
        [zero, a1 * z.conj(), zero, a2 * w.conj()],
        [a1 * z, zero, -a2 * w, zero],
        [zero, -a2 * w.conj(), zero, -a1 * z.conj()],
        [a2 * w, zero, -a1 * z, zero],
    ];
    let matrix = full.map(|row| row.map(|x| x * 0.5));
    Ok(BlochMatrix { k, matrix, z, w, a1, a2 })
}
