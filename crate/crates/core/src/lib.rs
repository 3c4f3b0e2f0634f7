//! Extremal-eigenvalue statistics of sparse random matrices.
//!
//! - [`ensemble`]: samplers, the edge observable `𝒳`, Gaussian-divisible interpolation.
//! - [`linalg`]: dense symmetric eigensolver, resolvents, Stieltjes transforms.
//! - [`sce`]: the self-consistent polynomial, its edge and its density.
//! - [`freeconv`]: edges of the free convolution with a semicircle.
//! - [`verify`]: per-sample diagnostics.
//! - [`experiments`]: Monte Carlo harness, statistical tests and the selftest suite.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision, clippy::needless_range_loop)]

pub mod ensemble;
pub mod error;
pub mod experiments;
pub mod freeconv;
pub mod linalg;
pub mod quad;
pub mod rng;
pub mod sce;
pub mod verify;

pub use ensemble::{
    compute_x, cumulants_of, gaussian_divisible, sample, sample_x, CumulantProfile, EnsembleKind, EnsembleSpec,
    SampleMatrix,
};
pub use error::{Error, Result};
pub use experiments::{
    ks_one_sample, ks_two_sample, normal_cdf, run_experiment, run_gap, run_gaussian_regime, run_tw_regime,
    run_x_clt, ExperimentConfig, RunOptions, Statistic, SummaryStats, TrialRecord,
};
pub use freeconv::{edge_e_plus, free_conv_edge, gamma0, xi_plus, FreeConvEdge, SpectralMeasure};
pub use linalg::{eigenvalues, green_matrix, m_sc, stieltjes_mn, ComplexPoint, Spectrum, SymMatrix};
pub use sce::{
    counting_prediction, density_rho_inf, edge_expansion, stieltjes_m_inf, EdgeReport, EdgeSolution, SCPoly,
};
pub use verify::{
    counting_check, eigenvalue_location_check, local_law_check, rigidity_check, DiagnosticReport, VerifyConfig,
};
