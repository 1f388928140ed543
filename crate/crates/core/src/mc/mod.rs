//! Random-matrix samplers, Monte Carlo estimators and the exact Wick oracle.

pub mod estimators;
pub mod quadrature;
pub mod rng;
pub mod samplers;
pub mod wick;

pub use estimators::{
    default_workers, estimate, estimate_many, mc_gaussian_schur, mc_moment, mc_normal_second_moment, mc_schur_split,
    mc_weingarten_monomial, MCEstimate, SplitEstimate, TraceWord,
};
pub use quadrature::{normal_second_moment_exact, normal_second_moment_quadrature};
pub use samplers::{normality_residual, unitarity_residual, EnsembleConfig, EnsembleKind, Sampler, VarianceConvention};
pub use wick::{gaussian_schur_average, wick_expectation, wick_product_moment, GaussianWord, WickPolynomial};
