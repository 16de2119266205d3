//! Binormal flow and Schrödinger map in Minkowski 3-space for planar
//! l-polygons.
//!
//! The crate is organised bottom-up:
//!
//! * [`minkowski`] vectors, products and hyperbolic rotations of R^{1,2}
//! * [`gauss`] quadratic Gauss sums and corner coefficients at rational times
//! * [`polygon`] l-polygon initial data, the algebraic solution, centre of mass
//! * [`solver`] finite differences + RK4 integration of the flow
//! * [`selfsimilar`] one-corner self-similar profiles and their asymptotics
//! * [`diagnostics`] corner trajectories, Riemann's function, error tables
//! * [`io`] run configuration, CSV and JSON artifacts
//! * [`cli`] the `hypervfe` command line
//!
//! ```
//! use hypervfe::polygon::c_l;
//! assert!((c_l(0.1) - 1.000416458444891).abs() < 1e-12);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop, clippy::excessive_precision)]

pub mod cli;
pub mod diagnostics;
pub mod error;
pub mod gauss;
pub mod io;
pub mod minkowski;
pub mod polygon;
pub mod selfsimilar;
pub mod solver;
pub mod special;

pub use error::{Error, Result};
pub use minkowski::{CausalClass, HypRotation, MinkVec3};

/// Builds a rayon pool honouring `HYPERVFE_THREADS` (unset or 0 means all cores).
pub fn thread_pool() -> rayon::ThreadPool {
    let n = std::env::var("HYPERVFE_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()).unwrap_or(0);
    rayon::ThreadPoolBuilder::new().num_threads(n).build().expect("thread pool")
}
