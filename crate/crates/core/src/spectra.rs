//! Dense eigensolves, ground-state selection, excitation gaps and the
//! free-fermion many-body reconstruction used as an exact oracle.

use std::cmp::Ordering;

use faer::{Mat, Side};
use num_complex::Complex64 as c64;

use crate::error::{Error, Result};
use crate::fock::{split_parity, FockBasis, ManyBodyOperator};
use crate::model::QuadraticModel;

/// Largest matrix (or parity block) handed to the dense solver by default.
pub const DEFAULT_DENSE_CAP: usize = 1 << 13;

/// Real parts closer than this (relative) are treated as tied when picking the ground state.
const GROUND_TIE_TOL: f64 = 1e-10;

/// Unmatched Nambu eigenvalues beyond this distance break particle-hole pairing.
pub const PAIRING_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    pub dense_cap: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { dense_cap: DEFAULT_DENSE_CAP }
    }
}

/// Eigenvalues sorted by real part, then imaginary part, with optional
/// unit-norm right eigenvectors stored column-major.
#[derive(Clone, Debug)]
pub struct ComplexSpectrum {
    eigenvalues: Vec<c64>,
    vectors: Option<Vec<c64>>,
    source_dimension: usize,
}

pub fn cmp_energy(a: &c64, b: &c64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

impl ComplexSpectrum {
    /// Spectrum without eigenvectors; the values are sorted on construction.
    pub fn from_eigenvalues(mut eigenvalues: Vec<c64>) -> Self {
        eigenvalues.sort_by(cmp_energy);
        let source_dimension = eigenvalues.len();
        Self { eigenvalues, vectors: None, source_dimension }
    }

    fn from_pairs(source_dimension: usize, mut pairs: Vec<(c64, Option<Vec<c64>>)>) -> Self {
        pairs.sort_by(|a, b| cmp_energy(&a.0, &b.0));
        let with_vectors = pairs.iter().all(|p| p.1.is_some()) && !pairs.is_empty();
        let eigenvalues = pairs.iter().map(|p| p.0).collect();
        let vectors = with_vectors.then(|| pairs.into_iter().flat_map(|p| p.1.unwrap()).collect());
        Self { eigenvalues, vectors, source_dimension }
    }

    pub fn eigenvalues(&self) -> &[c64] {
        &self.eigenvalues
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn source_dimension(&self) -> usize {
        self.source_dimension
    }

    pub fn has_vectors(&self) -> bool {
        self.vectors.is_some()
    }

    /// Right eigenvector belonging to `eigenvalues()[index]`.
    pub fn vector(&self, index: usize) -> Option<&[c64]> {
        let d = self.source_dimension;
        self.vectors.as_ref().map(|v| &v[index * d..(index + 1) * d])
    }
}

/// Unit 2-norm, with the first significant component rotated onto the positive real axis.
fn normalize(mut v: Vec<c64>) -> Vec<c64> {
    let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return v;
    }
    let peak = v.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let phase = v
        .iter()
        .find(|x| x.norm() > 1e-8 * peak)
        .map(|x| x.conj() / x.norm())
        .unwrap_or(c64::new(1.0, 0.0));
    let scale = phase / norm;
    v.iter_mut().for_each(|x| *x *= scale);
    v
}

fn solver_error(dimension: usize) -> impl FnOnce(faer::linalg::evd::EvdError) -> Error {
    move |e| Error::Solver { dimension, reason: format!("{e:?} (QR iteration did not converge)") }
}

/// Eigenpairs of one dense block; vectors are in block coordinates.
fn dense_eigenpairs(op: &ManyBodyOperator, want_vectors: bool) -> Result<Vec<(c64, Option<Vec<c64>>)>> {
    let n = op.dimension();
    if n == 0 {
        return Ok(Vec::new());
    }
    if op.is_hermitian() {
        if op.is_real() {
            let a = op.to_dense_real();
            if want_vectors {
                let evd = a.self_adjoint_eigen(Side::Lower).map_err(solver_error(n))?;
                let (u, s) = (evd.U(), evd.S());
                return Ok((0..n)
                    .map(|j| {
                        let v = (0..n).map(|i| c64::new(u[(i, j)], 0.0)).collect();
                        (c64::new(s[j], 0.0), Some(normalize(v)))
                    })
                    .collect());
            }
            let s = a.self_adjoint_eigenvalues(Side::Lower).map_err(solver_error(n))?;
            return Ok(s.into_iter().map(|x| (c64::new(x, 0.0), None)).collect());
        }
        let a = op.to_dense();
        if want_vectors {
            let evd = a.self_adjoint_eigen(Side::Lower).map_err(solver_error(n))?;
            let (u, s) = (evd.U(), evd.S());
            return Ok((0..n)
                .map(|j| {
                    let v = (0..n).map(|i| u[(i, j)]).collect();
                    (c64::new(s[j].re, 0.0), Some(normalize(v)))
                })
                .collect());
        }
        let s = a.self_adjoint_eigenvalues(Side::Lower).map_err(solver_error(n))?;
        return Ok(s.into_iter().map(|x| (c64::new(x, 0.0), None)).collect());
    }
    let a = op.to_dense();
    general_eigenpairs(&a, want_vectors)
}

fn general_eigenpairs(a: &Mat<c64>, want_vectors: bool) -> Result<Vec<(c64, Option<Vec<c64>>)>> {
    let n = a.nrows();
    if want_vectors {
        let evd = a.eigen().map_err(solver_error(n))?;
        let (u, s) = (evd.U(), evd.S());
        Ok((0..n)
            .map(|j| {
                let v = (0..n).map(|i| u[(i, j)]).collect();
                (s[j], Some(normalize(v)))
            })
            .collect())
    } else {
        let s = a.eigenvalues().map_err(solver_error(n))?;
        Ok(s.into_iter().map(|x| (x, None)).collect())
    }
}

/// Eigenvalues of a general dense complex matrix, sorted.
pub fn dense_eigenvalues(a: &Mat<c64>) -> Result<Vec<c64>> {
    let mut vals: Vec<c64> = general_eigenpairs(a, false)?.into_iter().map(|p| p.0).collect();
    vals.sort_by(cmp_energy);
    Ok(vals)
}

/// All eigenvalues of `op` from a single dense solve.
pub fn full_spectrum(op: &ManyBodyOperator, want_vectors: bool) -> Result<ComplexSpectrum> {
    full_spectrum_with(op, want_vectors, &SolverConfig::default())
}

pub fn full_spectrum_with(op: &ManyBodyOperator, want_vectors: bool, config: &SolverConfig) -> Result<ComplexSpectrum> {
    let n = op.dimension();
    if n > config.dense_cap {
        return Err(Error::Capacity { dimension: n, cap: config.dense_cap });
    }
    Ok(ComplexSpectrum::from_pairs(n, dense_eigenpairs(op, want_vectors)?))
}

/// Full spectrum obtained block by block in the two fermion-parity sectors.
/// Eigenvectors, when requested, are embedded back into the full Fock space.
pub fn parity_resolved_spectrum(
    op: &ManyBodyOperator,
    basis: &FockBasis,
    want_vectors: bool,
    config: &SolverConfig,
) -> Result<ComplexSpectrum> {
    let blocks = split_parity(op, basis)?;
    let dim = basis.dimension();
    let mut pairs = Vec::with_capacity(dim);
    for (block, indices) in [(&blocks.even_block, &blocks.even_indices), (&blocks.odd_block, &blocks.odd_indices)] {
        if block.dimension() > config.dense_cap {
            return Err(Error::Capacity { dimension: block.dimension(), cap: config.dense_cap });
        }
        for (value, vector) in dense_eigenpairs(block, want_vectors)? {
            let embedded = vector.map(|v| {
                let mut full = vec![c64::new(0.0, 0.0); dim];
                for (local, &global) in indices.iter().enumerate() {
                    full[global] = v[local];
                }
                full
            });
            pairs.push((value, embedded));
        }
    }
    Ok(ComplexSpectrum::from_pairs(dim, pairs))
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroundStateInfo {
    pub index: usize,
    pub energy: c64,
    /// Indices with `|E - E_0| < resolution`, including the ground state itself.
    pub manifold: Vec<usize>,
    pub resolution: f64,
}

/// Ground state: minimal real part, ties broken by minimal `|Im E|`.
pub fn ground_state(spectrum: &ComplexSpectrum, resolution: f64) -> GroundStateInfo {
    let values = spectrum.eigenvalues();
    assert!(!values.is_empty(), "ground state of an empty spectrum");
    let min_re = values.iter().map(|e| e.re).fold(f64::INFINITY, f64::min);
    let tie = GROUND_TIE_TOL * (1.0 + min_re.abs());
    let index = (0..values.len())
        .filter(|&i| values[i].re <= min_re + tie)
        .min_by(|&i, &j| {
            let (a, b) = (values[i], values[j]);
            a.im.abs().total_cmp(&b.im.abs()).then(a.im.total_cmp(&b.im)).then(i.cmp(&j))
        })
        .expect("at least one candidate");
    let energy = values[index];
    let manifold = (0..values.len()).filter(|&i| (values[i] - energy).norm() < resolution).collect();
    GroundStateInfo { index, energy, manifold, resolution }
}

/// `ε_α = |E_α - E_0|`, ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct ExcitationGaps {
    pub gaps: Vec<f64>,
}

impl ExcitationGaps {
    pub fn count(&self) -> usize {
        self.gaps.len()
    }
}

/// The `count` smallest excitation energies; `count` is clamped to the spectrum size.
pub fn excitation_gaps(spectrum: &ComplexSpectrum, ground: &GroundStateInfo, count: usize) -> ExcitationGaps {
    let mut gaps: Vec<f64> = spectrum
        .eigenvalues()
        .iter()
        .enumerate()
        .map(|(i, e)| if i == ground.index { 0.0 } else { (e - ground.energy).norm() })
        .collect();
    gaps.sort_by(f64::total_cmp);
    gaps.truncate(count.min(spectrum.len()));
    ExcitationGaps { gaps }
}

/// Pair Nambu eigenvalues into `(+e, -e)` couples, largest magnitude first.
/// Returns one representative per pair (the one with nonnegative real part).
pub fn particle_hole_pairs(nambu: &[c64]) -> Result<Vec<c64>> {
    if nambu.len() % 2 != 0 {
        return Err(Error::Structure(format!("odd number of Nambu eigenvalues ({})", nambu.len())));
    }
    let mut order: Vec<usize> = (0..nambu.len()).collect();
    order.sort_by(|&i, &j| nambu[j].norm().total_cmp(&nambu[i].norm()).then(i.cmp(&j)));
    let mut used = vec![false; nambu.len()];
    let mut reps = Vec::with_capacity(nambu.len() / 2);
    for &i in &order {
        if used[i] {
            continue;
        }
        used[i] = true;
        let (j, dist) = order
            .iter()
            .filter(|&&j| !used[j])
            .map(|&j| (j, (nambu[j] + nambu[i]).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .ok_or_else(|| Error::Structure(format!("eigenvalue {} has no partner", nambu[i])))?;
        if dist > PAIRING_TOL {
            return Err(Error::Structure(format!(
                "eigenvalue {} has nearest negated partner at distance {dist:.3e}",
                nambu[i]
            )));
        }
        used[j] = true;
        let rep = if nambu[i].re >= 0.0 { nambu[i] } else { nambu[j] };
        reps.push(rep);
    }
    Ok(reps)
}

/// All `2^L` many-body energies `Σ_m s_m e_m + offset` of a quadratic model,
/// where `±e_m` are the eigenvalues of its (half-scaled) Nambu matrix.
pub fn free_fermion_many_body_spectrum(qm: &QuadraticModel) -> Result<ComplexSpectrum> {
    let nambu = dense_eigenvalues(qm.matrix())?;
    let modes = particle_hole_pairs(&nambu)?;
    let l = modes.len();
    let mut energies = Vec::with_capacity(1 << l);
    let base: c64 = -modes.iter().sum::<c64>();
    for mask in 0usize..(1 << l) {
        let mut e = base + qm.offset();
        for (m, mode) in modes.iter().enumerate() {
            if mask & (1 << m) != 0 {
                e += 2.0 * mode;
            }
        }
        energies.push(e);
    }
    Ok(ComplexSpectrum::from_eigenvalues(energies))
}

/// Largest displacement in a greedy nearest-neighbour matching of two
/// multisets; `None` when the sizes differ.
pub fn multiset_distance(a: &[c64], b: &[c64]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let mut sorted_a = a.to_vec();
    sorted_a.sort_by(cmp_energy);
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    for x in sorted_a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))?;
        used[j] = true;
        worst = worst.max(d);
    }
    Some(worst)
}
