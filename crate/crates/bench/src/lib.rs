//! Parameter points shared by the benchmarks.

use nhkitaev_core::model::ChainParams;

/// A generic non-Hermitian point in the solvable limit.
pub fn solvable_point(length: usize) -> ChainParams {
    ChainParams::solvable(1.0, 0.7, 0.5, -0.3, length)
}

/// Away from the solvable limit, with a chemical potential.
pub fn generic_point(length: usize) -> ChainParams {
    ChainParams { mu: 0.25, ..solvable_point(length) }
}
