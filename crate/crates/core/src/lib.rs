//! Exact computation with integral quadratic lattices of hyperkähler type.
//!
//! The crate covers integral lattices and their sublattices ([`lattice`]),
//! discriminant forms and overlattice gluing ([`discriminant`]), the
//! Bogomolov–Beauville–Fujiki lattice catalog with period predicates
//! ([`catalog`], [`bbf`]), and primitive isotropic vectors with their orbit
//! classification ([`parabolic`]). All arithmetic is exact.

pub mod arith;
pub mod error;
pub mod linalg;
pub mod lattice;
pub mod discriminant;
pub mod parabolic;
pub mod bbf;
pub mod catalog;
pub mod json;

pub use arith::{Int, IntMatrix, IntVector, Rat, RatVector};
pub use error::{LatticeError, Result};
pub use bbf::{FujikiData, PeriodLine, TopForm};
pub use catalog::{catalog, CatalogEntry, CatalogName};
pub use lattice::{primitive_part, Lattice, Signature, Sublattice};
