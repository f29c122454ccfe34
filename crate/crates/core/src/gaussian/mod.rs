//! Covariance-matrix calculus for Gaussian operators.

pub mod fixed_point;
pub mod ladder;
pub mod operator;
pub mod spectra;
pub mod symplectic;
pub mod wick;

pub use fixed_point::{fixed_point_cov, fixed_point_cov_direct, gaussian_product_cov, vacuum_filter_fixed_point_cov, FixedPointCov};
pub use ladder::{covariance_from_ladder, ladder_from_covariance, LadderMoments};
pub use operator::{gaussian_char, GaussianOperator};
pub use spectra::{logneg_gaussian, momentum_flip, physicality_check, symplectic_eigenvalues, PhysicalityReport};
pub use symplectic::SymplecticForm;
pub use wick::wick_moments;
