//! Spectral inference for finite graphs from the return times of a random
//! walk observed at a single vertex.
//!
//! - [`graph`]: rooted graphs, fixture families and the tree builders.
//! - [`exact`]: exact return series, generating functions and spectra.
//! - [`ratfun`]: rational functions over the integers, the tree function
//!   `h`, and the forge for trees with equal return-time distributions.
//! - [`walk`]: seeded walks, the observer's view, and return-probability
//!   estimation.
//! - [`gap`]: the spectral-gap estimator and its bounds.
//! - [`report`]: JSON-ready reports shared by the CLI and the tests.

pub mod exact;
pub mod gap;
pub mod graph;
pub mod json;
pub mod linalg;
pub mod ratfun;
pub mod report;
pub mod walk;
