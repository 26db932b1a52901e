//! Finite models of `l`-adic Galois images of abelian varieties.
//!
//! Galois images are explicit subgroups of `GSp_{2g}(Z/l^n)`, torsion
//! subgroups are Smith-normalized submodules of `(Z/l^n)^{2g}`, and field
//! degrees such as `[K(H):K]` or `[K(H) ∩ K(μ_{l^∞}):K]` become indices of
//! stabilizers and sizes of multiplier images. The [`mumford`] module carries
//! the tensor-cube stabilizer computation showing that the strong form of
//! property (μ) fails.

pub mod cli;
pub mod error;
pub mod galois_model;
pub mod modring;
pub mod mumford;
pub mod symplectic;
pub mod torsion;

pub use error::{Error, Result};
pub use galois_model::{DegreeReport, MatrixGroup};
pub use modring::{smith_normal_form, MatrixMod, ResidueElem, ResidueRing, SmithForm};
pub use symplectic::{PairingValue, SymplecticSpace};
pub use torsion::TorsionSubgroup;

/// Default cap on materialized group and orbit sizes.
pub const DEFAULT_CAP: u64 = 10_000_000;
