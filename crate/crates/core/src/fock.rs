//! Occupation-number basis and sparse many-body operators for spinless fermions.
//!
//! Basis states are integers `0..2^L`; bit `j - 1` holds the occupation of
//! site `j` (sites are 1-based throughout the crate). Fermionic signs follow
//! the Jordan-Wigner string: acting on site `j` picks up `(-1)^N` where `N`
//! counts occupied sites with index strictly below `j`.

use faer::Mat;
use num_complex::Complex64 as c64;

use crate::error::{Error, Result};

/// Largest chain length the basis enumerator accepts.
pub const MAX_SITES: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FockBasis {
    sites: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FermionKind {
    Create,
    Annihilate,
}

/// Enumerate the occupation basis of an `sites`-site chain.
pub fn build_basis(sites: usize) -> Result<FockBasis> {
    FockBasis::new(sites)
}

impl FockBasis {
    pub fn new(sites: usize) -> Result<Self> {
        if !(1..=MAX_SITES).contains(&sites) {
            return Err(Error::Size { sites, max: MAX_SITES });
        }
        Ok(Self { sites })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn dimension(&self) -> usize {
        1 << self.sites
    }

    /// Occupation vector `[n_1, ..., n_L]` of a basis index.
    pub fn occupations(&self, state: usize) -> Vec<u8> {
        (0..self.sites).map(|b| ((state >> b) & 1) as u8).collect()
    }

    pub fn index_of(&self, occupations: &[u8]) -> Result<usize> {
        if occupations.len() != self.sites {
            return Err(Error::Construction(format!(
                "occupation vector has {} entries, basis has {} sites",
                occupations.len(),
                self.sites
            )));
        }
        occupations.iter().enumerate().try_fold(0usize, |acc, (b, &n)| match n {
            0 => Ok(acc),
            1 => Ok(acc | (1 << b)),
            other => Err(Error::Construction(format!("occupation {other} is not 0 or 1"))),
        })
    }

    /// Occupation `n_site` of a basis state.
    pub fn occupation(&self, state: usize, site: usize) -> u8 {
        ((state >> (site - 1)) & 1) as u8
    }

    pub fn is_even(state: usize) -> bool {
        state.count_ones() % 2 == 0
    }

    fn check_site(&self, site: usize) -> Result<()> {
        if site == 0 || site > self.sites {
            Err(Error::SiteIndex { site, sites: self.sites })
        } else {
            Ok(())
        }
    }

    /// Apply `c_site` or `c†_site` to a basis state.
    ///
    /// Returns `None` when the action is Pauli-blocked, otherwise the new
    /// state and its fermionic sign.
    pub fn apply(&self, kind: FermionKind, site: usize, state: usize) -> Result<Option<(usize, f64)>> {
        self.check_site(site)?;
        Ok(apply_unchecked(kind, site, state))
    }
}

#[inline]
fn apply_unchecked(kind: FermionKind, site: usize, state: usize) -> Option<(usize, f64)> {
    let bit = 1usize << (site - 1);
    let occupied = state & bit != 0;
    match (kind, occupied) {
        (FermionKind::Create, true) | (FermionKind::Annihilate, false) => None,
        _ => {
            let below = (state & (bit - 1)).count_ones();
            let sign = if below % 2 == 0 { 1.0 } else { -1.0 };
            Some((state ^ bit, sign))
        }
    }
}

/// One factor of an ordered operator product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Factor {
    Create(usize),
    Annihilate(usize),
    Density(usize),
    Identity,
}

/// `coefficient * f_1 f_2 ... f_k`; the rightmost factor acts first.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coefficient: c64,
    pub factors: Vec<Factor>,
}

impl Term {
    pub fn new(coefficient: impl Into<c64>, factors: Vec<Factor>) -> Self {
        Self { coefficient: coefficient.into(), factors }
    }

    fn act(&self, state: usize) -> Option<(usize, f64)> {
        let mut current = state;
        let mut sign = 1.0;
        for factor in self.factors.iter().rev() {
            match *factor {
                Factor::Create(site) => {
                    let (next, s) = apply_unchecked(FermionKind::Create, site, current)?;
                    current = next;
                    sign *= s;
                }
                Factor::Annihilate(site) => {
                    let (next, s) = apply_unchecked(FermionKind::Annihilate, site, current)?;
                    current = next;
                    sign *= s;
                }
                Factor::Density(site) => {
                    if current & (1 << (site - 1)) == 0 {
                        return None;
                    }
                }
                Factor::Identity => {}
            }
        }
        Some((current, sign))
    }
}

/// Sparse complex matrix over a Fock basis, stored row-major (CSR).
#[derive(Clone, Debug, PartialEq)]
pub struct ManyBodyOperator {
    dimension: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    values: Vec<c64>,
    hermitian: bool,
}

const HERMITIAN_TOL: f64 = 1e-13;

impl ManyBodyOperator {
    /// Build from unordered `(row, col, value)` triplets. Duplicates are
    /// summed and exact zeros dropped.
    pub fn from_triplets(dimension: usize, mut triplets: Vec<(usize, usize, c64)>) -> Result<Self> {
        if let Some(&(r, c, _)) = triplets.iter().find(|(r, c, _)| *r >= dimension || *c >= dimension) {
            return Err(Error::Construction(format!(
                "entry ({r}, {c}) outside a {dimension}-dimensional space"
            )));
        }
        triplets.sort_by_key(|&(r, c, _)| (r, c));

        let mut merged: Vec<(usize, usize, c64)> = Vec::with_capacity(triplets.len());
        for (r, c, v) in triplets {
            match merged.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => merged.push((r, c, v)),
            }
        }
        merged.retain(|e| e.2.norm_sqr() != 0.0);

        let mut row_ptr = vec![0usize; dimension + 1];
        for &(r, _, _) in &merged {
            row_ptr[r + 1] += 1;
        }
        for i in 0..dimension {
            row_ptr[i + 1] += row_ptr[i];
        }
        let cols = merged.iter().map(|e| e.1).collect();
        let values = merged.iter().map(|e| e.2).collect();
        let mut op = Self { dimension, row_ptr, cols, values, hermitian: false };
        op.hermitian = op.compute_hermitian();
        Ok(op)
    }

    pub fn identity(dimension: usize) -> Self {
        Self::from_triplets(dimension, (0..dimension).map(|i| (i, i, c64::new(1.0, 0.0))).collect())
            .expect("diagonal indices are in range")
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    /// True when every stored entry has zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, c64)> + '_ {
        (0..self.dimension).flat_map(move |r| {
            (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |k| (r, self.cols[k], self.values[k]))
        })
    }

    pub fn get(&self, row: usize, col: usize) -> c64 {
        let span = &self.cols[self.row_ptr[row]..self.row_ptr[row + 1]];
        match span.binary_search(&col) {
            Ok(k) => self.values[self.row_ptr[row] + k],
            Err(_) => c64::new(0.0, 0.0),
        }
    }

    pub fn trace(&self) -> c64 {
        (0..self.dimension).map(|i| self.get(i, i)).sum()
    }

    fn compute_hermitian(&self) -> bool {
        self.entries().all(|(r, c, v)| {
            let w = self.get(c, r).conj();
            (v - w).norm() <= HERMITIAN_TOL * (1.0 + v.norm())
        })
    }

    pub fn matvec(&self, x: &[c64]) -> Vec<c64> {
        assert_eq!(x.len(), self.dimension, "vector length must match operator dimension");
        (0..self.dimension)
            .map(|r| {
                (self.row_ptr[r]..self.row_ptr[r + 1])
                    .map(|k| self.values[k] * x[self.cols[k]])
                    .sum()
            })
            .collect()
    }

    pub fn to_dense(&self) -> Mat<c64> {
        let mut m = Mat::<c64>::zeros(self.dimension, self.dimension);
        for (r, c, v) in self.entries() {
            m[(r, c)] = v;
        }
        m
    }

    /// Real part as a dense matrix; only meaningful when [`is_real`](Self::is_real).
    pub fn to_dense_real(&self) -> Mat<f64> {
        let mut m = Mat::<f64>::zeros(self.dimension, self.dimension);
        for (r, c, v) in self.entries() {
            m[(r, c)] = v.re;
        }
        m
    }
}

/// Sum the matrices of `terms` over `basis`. Entries are deterministic and row-major.
pub fn assemble(terms: &[Term], basis: &FockBasis) -> Result<ManyBodyOperator> {
    for term in terms {
        for factor in &term.factors {
            match *factor {
                Factor::Create(s) | Factor::Annihilate(s) | Factor::Density(s) => {
                    if s == 0 || s > basis.sites() {
                        return Err(Error::Construction(format!(
                            "factor {factor:?} references site {s} on a {}-site chain",
                            basis.sites()
                        )));
                    }
                }
                Factor::Identity => {}
            }
        }
    }
    let dim = basis.dimension();
    let mut triplets = Vec::with_capacity(dim * terms.len() / 2);
    for state in 0..dim {
        for term in terms {
            if let Some((row, sign)) = term.act(state) {
                triplets.push((row, state, term.coefficient * sign));
            }
        }
    }
    ManyBodyOperator::from_triplets(dim, triplets)
}

/// Matrix of a single `c_site` or `c†_site` on the full basis.
pub fn fermion_matrix(kind: FermionKind, site: usize, basis: &FockBasis) -> Result<ManyBodyOperator> {
    let factor = match kind {
        FermionKind::Create => Factor::Create(site),
        FermionKind::Annihilate => Factor::Annihilate(site),
    };
    assemble(&[Term::new(1.0, vec![factor])], basis)
}

/// An operator split into its even- and odd-parity diagonal blocks.
#[derive(Clone, Debug)]
pub struct ParityBlocks {
    pub even_block: ManyBodyOperator,
    pub odd_block: ManyBodyOperator,
    /// Full-basis index of each even-block row.
    pub even_indices: Vec<usize>,
    /// Full-basis index of each odd-block row.
    pub odd_indices: Vec<usize>,
}

/// Split a parity-conserving operator into even and odd blocks.
pub fn split_parity(op: &ManyBodyOperator, basis: &FockBasis) -> Result<ParityBlocks> {
    if op.dimension() != basis.dimension() {
        return Err(Error::Construction(format!(
            "operator dimension {} does not match basis dimension {}",
            op.dimension(),
            basis.dimension()
        )));
    }
    let dim = basis.dimension();
    let mut local = vec![0usize; dim];
    let (mut even_indices, mut odd_indices) = (Vec::with_capacity(dim / 2), Vec::with_capacity(dim / 2));
    for s in 0..dim {
        if FockBasis::is_even(s) {
            local[s] = even_indices.len();
            even_indices.push(s);
        } else {
            local[s] = odd_indices.len();
            odd_indices.push(s);
        }
    }
    let (mut even, mut odd) = (Vec::new(), Vec::new());
    for (r, c, v) in op.entries() {
        let re = FockBasis::is_even(r);
        if re != FockBasis::is_even(c) {
            return Err(Error::SymmetryViolation { row: r, col: c });
        }
        if re {
            even.push((local[r], local[c], v));
        } else {
            odd.push((local[r], local[c], v));
        }
    }
    Ok(ParityBlocks {
        even_block: ManyBodyOperator::from_triplets(even_indices.len(), even)?,
        odd_block: ManyBodyOperator::from_triplets(odd_indices.len(), odd)?,
        even_indices,
        odd_indices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_mul(a: &Mat<c64>, b: &Mat<c64>) -> Mat<c64> {
        a * b
    }

    fn max_abs(m: &Mat<c64>) -> f64 {
        let mut best = 0.0f64;
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                best = best.max(m[(i, j)].norm());
            }
        }
        best
    }

    #[test]
    fn basis_dimensions() {
        assert_eq!(build_basis(1).unwrap().dimension(), 2);
        assert_eq!(build_basis(4).unwrap().dimension(), 16);
        assert_eq!(build_basis(12).unwrap().dimension(), 4096);
        assert!(matches!(build_basis(0), Err(Error::Size { .. })));
        assert!(matches!(build_basis(21), Err(Error::Size { .. })));
    }

    #[test]
    fn occupation_round_trip() {
        let basis = build_basis(6).unwrap();
        for s in 0..basis.dimension() {
            assert_eq!(basis.index_of(&basis.occupations(s)).unwrap(), s);
        }
    }

    #[test]
    fn apply_examples() {
        let basis = build_basis(3).unwrap();
        let ket = |occ: [u8; 3]| basis.index_of(&occ).unwrap();
        assert_eq!(basis.apply(FermionKind::Create, 1, ket([0, 0, 0])).unwrap(), Some((ket([1, 0, 0]), 1.0)));
        assert_eq!(basis.apply(FermionKind::Create, 1, ket([1, 0, 0])).unwrap(), None);
        assert_eq!(basis.apply(FermionKind::Create, 2, ket([1, 0, 0])).unwrap(), Some((ket([1, 1, 0]), -1.0)));
        assert_eq!(basis.apply(FermionKind::Annihilate, 2, ket([1, 0, 0])).unwrap(), None);
        assert!(matches!(basis.apply(FermionKind::Create, 4, 0), Err(Error::SiteIndex { .. })));
        assert!(matches!(basis.apply(FermionKind::Create, 0, 0), Err(Error::SiteIndex { .. })));
    }

    #[test]
    fn anticommutation_relations() {
        for l in 1..=4 {
            let basis = build_basis(l).unwrap();
            let c: Vec<Mat<c64>> = (1..=l)
                .map(|j| fermion_matrix(FermionKind::Annihilate, j, &basis).unwrap().to_dense())
                .collect();
            let cd: Vec<Mat<c64>> = (1..=l)
                .map(|j| fermion_matrix(FermionKind::Create, j, &basis).unwrap().to_dense())
                .collect();
            let id = ManyBodyOperator::identity(basis.dimension()).to_dense();
            for i in 0..l {
                for j in 0..l {
                    let cc = dense_mul(&c[i], &c[j]) + dense_mul(&c[j], &c[i]);
                    assert_eq!(max_abs(&cc), 0.0);
                    let mut ccd = dense_mul(&c[i], &cd[j]) + dense_mul(&cd[j], &c[i]);
                    if i == j {
                        ccd = ccd - &id;
                    }
                    assert_eq!(max_abs(&ccd), 0.0, "{{c_{}, c†_{}}} at L={l}", i + 1, j + 1);
                }
            }
        }
    }

    #[test]
    fn assemble_examples() {
        let b1 = build_basis(1).unwrap();
        let n1 = assemble(&[Term::new(1.0, vec![Factor::Density(1)])], &b1).unwrap();
        assert_eq!(n1.get(0, 0), c64::new(0.0, 0.0));
        assert_eq!(n1.get(1, 1), c64::new(1.0, 0.0));
        assert_eq!(n1.nnz(), 1);

        // -i (2n_1 - 1)(2n_2 - 1) expanded into density products.
        let b2 = build_basis(2).unwrap();
        let mi = c64::new(0.0, -1.0);
        let terms = vec![
            Term::new(mi * 4.0, vec![Factor::Density(1), Factor::Density(2)]),
            Term::new(mi * -2.0, vec![Factor::Density(1)]),
            Term::new(mi * -2.0, vec![Factor::Density(2)]),
            Term::new(mi, vec![Factor::Identity]),
        ];
        let op = assemble(&terms, &b2).unwrap();
        let expect = [-1.0, 1.0, 1.0, -1.0];
        for (s, e) in expect.iter().enumerate() {
            assert_eq!(op.get(s, s), c64::new(0.0, *e));
        }
        assert_eq!(op.nnz(), 4);
        assert!(!op.is_hermitian());
    }

    #[test]
    fn assemble_rejects_bad_sites() {
        let b = build_basis(2).unwrap();
        let err = assemble(&[Term::new(1.0, vec![Factor::Create(3)])], &b);
        assert!(matches!(err, Err(Error::Construction(_))));
    }

    #[test]
    fn from_triplets_merges_and_orders() {
        let one = c64::new(1.0, 0.0);
        let op = ManyBodyOperator::from_triplets(3, vec![(2, 0, one), (0, 1, one), (0, 1, one), (1, 1, one), (1, 1, -one)])
            .unwrap();
        let entries: Vec<_> = op.entries().collect();
        assert_eq!(entries, vec![(0, 1, 2.0 * one), (2, 0, one)]);
        assert!(ManyBodyOperator::from_triplets(2, vec![(2, 0, one)]).is_err());
    }

    #[test]
    fn split_identity() {
        let basis = build_basis(2).unwrap();
        let blocks = split_parity(&ManyBodyOperator::identity(4), &basis).unwrap();
        assert_eq!(blocks.even_block.dimension(), 2);
        assert_eq!(blocks.odd_block.dimension(), 2);
        assert_eq!(blocks.even_indices, vec![0, 3]);
        assert_eq!(blocks.odd_indices, vec![1, 2]);
    }

    #[test]
    fn split_rejects_parity_mixing() {
        let basis = build_basis(2).unwrap();
        let c1 = fermion_matrix(FermionKind::Annihilate, 1, &basis).unwrap();
        assert!(matches!(split_parity(&c1, &basis), Err(Error::SymmetryViolation { .. })));
    }
}
