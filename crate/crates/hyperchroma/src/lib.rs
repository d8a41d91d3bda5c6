//! Chromatic thresholds of random uniform hypergraphs.
//!
//! This crate decides where the chromatic number of a sparse random
//! r-uniform hypergraph with edge density c sits, and verifies the
//! analytic machinery behind that answer at desk scale:
//!
//! * [`models`] samples hypergraphs under three random models (multiset,
//!   uniform without replacement, Bernoulli) with a splittable seeded RNG,
//!   and classifies defective/duplicate edges.
//! * [`coloring`] decides weak k-colorability exactly (backtracking with
//!   monochromatic-edge propagation), counts balanced colorings, and
//!   computes chromatic numbers. It is the brute-force oracle for every
//!   moment identity.
//! * [`moments`] evaluates the first and second moments of the
//!   balanced-coloring count Z, exactly (big rationals) or in compensated
//!   log domain, together with the Laplace-method constants that govern
//!   the n -> infinity behaviour of E[Z^2].
//! * [`threshold`] reduces the second-moment condition to a univariate
//!   minimisation and computes the density window: the first-moment bound
//!   u_{r,k} = k^(r-1) ln k and the second-moment density c_{r,k} below
//!   which k-colorability holds a.a.s.
//! * [`lemmas`] turns the supporting analytic inequalities into executable
//!   numeric checks with explicit grids and margins.
//! * [`experiment`] runs seeded Monte Carlo colorability sweeps and
//!   validates the bad-edge and isolated-vertex laws empirically.
//!
//! The [`cli`] module exposes all of this behind one binary with
//! machine-readable output; each capability also has a runnable example
//! under `examples/`.

pub mod cli;
pub mod coloring;
pub mod error;
pub mod experiment;
pub mod lemmas;
pub mod models;
pub mod moments;
pub mod numeric;
pub mod threshold;

pub use error::{Error, Result};
