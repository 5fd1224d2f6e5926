//! Exact ground truth for a rooted graph: return-probability series, the
//! return generating function, spectra with root weights, and the moment
//! and reconstruction identities.

mod genfun;
mod moments;
mod series;
mod spectrum;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::RootedGraph;
use crate::ratfun::RatFunError;

pub use genfun::{poles_to_eigenvalues, return_gen_fun, GenFun, PoleEigenvalues};
pub use moments::{
    first_return_moments, hitting_from_stationary, hitting_times, reconstruct_counts, HittingReport, Reconstruction,
};
pub use series::{first_return_series, lazy_series, lazy_transition_series, transition_series, SeriesTable};
pub use spectrum::{
    nondegenerate_set, spectrum, EigenCluster, Spectrum, CLUSTER_TOLERANCE, JACOBI_TOLERANCE, WEIGHT_TOLERANCE,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("Jacobi iteration did not converge within {rotations} rotations")]
    ConvergenceFailure { rotations: usize },
    #[error(transparent)]
    RootFinding(#[from] RatFunError),
    #[error("hitting time mismatch: linear system gives {linear_system}, moments give {moment_formula}")]
    MomentMismatch {
        linear_system: String,
        moment_formula: String,
    },
    #[error("{quantity} {value} is not a positive integer; the inputs are inconsistent")]
    NonIntegerResult { quantity: &'static str, value: String },
    #[error("series has terms up to k = {have}, but k = {need} was requested")]
    SeriesTooShort { have: usize, need: usize },
    #[error("input already describes a lazy walk")]
    AlreadyLazy,
    #[error("rational function is not a return generating function (f(0) != 1)")]
    NotAGenFun,
    #[error("{what} = {got} exceeds the exact-mode cap of {cap}")]
    LimitExceeded { what: &'static str, got: usize, cap: usize },
}

/// Size caps for exact computations; costs grow quickly past desk scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactLimits {
    pub max_n: usize,
    pub max_k: usize,
}

impl Default for ExactLimits {
    fn default() -> Self {
        ExactLimits { max_n: 64, max_k: 1000 }
    }
}

impl ExactLimits {
    pub fn check(&self, g: &RootedGraph, k_max: usize) -> Result<(), ExactError> {
        if g.n() > self.max_n {
            return Err(ExactError::LimitExceeded {
                what: "n",
                got: g.n(),
                cap: self.max_n,
            });
        }
        if k_max > self.max_k {
            return Err(ExactError::LimitExceeded {
                what: "k_max",
                got: k_max,
                cap: self.max_k,
            });
        }
        Ok(())
    }
}
