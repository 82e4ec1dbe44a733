//! Maximum-entropy solutions of ill-posed linear inverse problems `y = Xp`.
//!
//! A pmf `p` on m outcomes is represented by a *potential* `u` through
//! `p = dist(u) ∝ e^{−u}`. Two tasks are tied together:
//!
//! - **ML**: among the collinear potentials `λu`, the most likely one given sample
//!   frequencies `r` makes `dist(λ₀u)` *coherent* with `r` on `u` (`u·r = u·dist(λ₀u)`).
//! - **MaxEnt**: among pmfs coherent with `r` on `u`, the one of maximal Shannon entropy
//!   is induced by a potential collinear with `u`.
//!
//! [`solver`] solves both with independent algorithms, [`oracle`] checks them by brute
//! force, and [`maxprob`] enumerates multinomial type classes to show the most probable
//! coherent type approaching the same pmf as the sample grows.

pub mod error;
pub mod functional;
pub mod maxprob;
pub mod oracle;
pub mod solver;
pub mod types;

#[cfg(feature = "cli")]
pub mod cli;

pub use error::{Error, Result};
pub use functional::{
    coherence, dist, dist_values, entropy_of_potential, log_likelihood, log_partition, mean_value,
    nats_to_bits, shannon_entropy, shift,
};
pub use maxprob::{enumerate_types, most_probable_coherent_type, TypeClass};
pub use oracle::{grid_maxent, grid_ml, project_coherent, SimplexGrid};
pub use solver::{
    collinear_mean, dual_gradient, dual_objective, orthogonality_check, solve_collinear,
    solve_inverse, solve_maxent_coherent, solve_ml_scalar, SolverConfig,
};
pub use types::{ConstraintSystem, DualSolution, Pmf, Potential, Sample};
