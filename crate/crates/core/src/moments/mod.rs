//! Normally ordered moments `α^{x,y} = tr((∏ a_k^{x_k})† (∏ a_j^{y_j}) σ)`,
//! their one-round recursion, and the strong-convergence condition check.
//!
//! With `U† a_1 U = (a_1 + a_2)/√2` and `Π ⊗ Π` commuting with `U`, the
//! normalised `σ` of the next round satisfies
//! `α'^{x,y} = Σ_{u≤x, v≤y} C^{x,y}_{u,v} α^{u,v} α^{x−u,y−v}` with
//! `C = ∏_j 2^{−(x_j+y_j)/2} binom(x_j, u_j) binom(y_j, v_j)`.

pub mod coefficients;
pub mod strong;
pub mod table;

pub use coefficients::{recursion_coefficients, ExactCoefficient};
pub use strong::{strong_convergence_check, StrongConvergenceEntry, StrongConvergenceReport};
pub use table::{moment_step, moments_from_fock, multi_indices, MomentTable, DEFAULT_MAX_ORDER};
