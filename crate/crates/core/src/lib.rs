//! Exact diagonalization and solvable-limit analytics for the dimerized
//! non-Hermitian Kitaev-Hubbard chain.

pub mod analytic;
pub mod error;
pub mod fock;
pub mod model;
pub mod observables;
pub mod output;
pub mod spectra;
pub mod sweep;

pub use analytic::{
    classify_gap, edge_coefficients, lambda_bands, locate_boundary_numeric, phase_boundary_formula,
    predict_degeneracy, Degeneracy, DegeneracyClass, EdgeModeCoefficients, GapClass, GapReport, Provenance,
    SolvableLimitParams,
};
pub use error::{Error, Result};
pub use fock::{build_basis, FockBasis, ManyBodyOperator};
pub use model::{build_interacting_h, build_quadratic_h, ChainParams, QuadraticModel};
pub use num_complex::Complex64 as c64;
pub use observables::{
    classify, degeneracy_chi, extrapolate, local_correlator, CorrelatorProfile, DegeneracyMeasure, ExtrapolationFit,
};
pub use spectra::{
    excitation_gaps, free_fermion_many_body_spectrum, full_spectrum, ground_state, parity_resolved_spectrum,
    ComplexSpectrum, ExcitationGaps, GroundStateInfo, SolverConfig,
};
pub use sweep::{run_sweep, GridPoint, PhaseDiagramGrid, PointStatus, SweepConfig};
