//! Truncated multimode bosonic linear algebra.
//!
//! Multi-indices are flattened row-major with mode 0 most significant. When
//! two copies of an `m`-party state are combined, mode `2j + k` holds party
//! `j`, copy `k`, so parties are major and copies minor.

pub mod basis;
pub mod beam_splitter;
pub mod displacement;
pub mod entanglement;
pub mod ladder;
pub mod moments;
pub mod operator;
pub mod states;

pub use basis::BasisSpec;
pub use beam_splitter::{beam_splitter_5050, PairBlocks};
pub use displacement::{char_fn, displacement, CharFn, DisplacementGuard};
pub use entanglement::{logneg_fock, partial_transpose};
pub use ladder::{annihilation, creation, momentum, normal_moment, number, position, quadrature, total_number};
pub use moments::{quadrature_moments, QuadratureMoments};
pub use operator::{fidelity_pure, FockOperator};
pub use states::{schmidt_diagonal, state_from_amplitudes, state_phi_mu, state_psi_lambda, thermal, vacuum};
