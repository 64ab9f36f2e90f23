//! Fock and MacMahon modules of the quantum toroidal superalgebra of gl(m|n).
//!
//! States are s-partitions and plane s-partitions; eigenvalues and matrix
//! coefficients are computed exactly from a stabilized tensor product of
//! vector and covector representations. Characters are computed by direct
//! enumeration and by closed formulas, and the defining relations can be
//! checked on any finite truncation.

pub mod boxrule;
pub mod characters;
pub mod error;
pub mod exact;
pub mod fock;
pub mod parity;
pub mod plane;
pub mod spart;
pub mod verify;

pub use error::{Error, Result};
pub use exact::{CharSeries, Monomial, ScalarExpr, SpectralFunction};
pub use parity::{ParityContext, RootSign};
pub use plane::{LayerPair, MacMahonModule, PlaneState};
pub use spart::{BoxRef, FockFamily, FockState, GenPartition};

/// Sets the worker count of the global thread pool. Results never depend on it.
pub fn set_jobs(n: usize) -> Result<()> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Parse(format!("cannot set {n} workers: {e}")))
}
