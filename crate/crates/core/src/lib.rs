//! Exact isospectral reductions of finite Hamiltonians, latent symmetry
//! detection, degeneracy certificates, generalized exchange symmetries and
//! latent-symmetry-preserving extensions.
//!
//! Site indices are zero-based throughout the library API. Text formats and
//! the CLI use one-based labels; [`SiteSet::from_one_based`] converts.

pub mod degeneracy;
pub mod error;
pub mod exact;
pub mod ges;
pub mod graphdoc;
pub mod fixtures;
pub mod hamiltonian;
pub mod multiplets;
pub mod numeric;
pub mod par;
pub mod reduction;
pub mod sweeps;
pub mod symmetry;

pub use error::{Error, Result};
pub use exact::{Matrix, Poly, RatFunc, Scalar};
pub use hamiltonian::{Hamiltonian, SiteSet};
