//! Exact order-theoretic toolkit for spectral and Priestley spaces, dispersions,
//! subgroup-space catalogs of compact Lie groups and punctured-cube diagrams.

pub mod cube;
pub mod dispersion;
pub mod error;
pub mod flagged;
pub mod guiding;
pub mod lattice;
pub mod liegroups;
pub mod oracle;
pub mod order;
pub mod qlinalg;
pub mod rep;

pub use error::{PrismError, Result};
pub use flagged::{AccumulationFamily, FamilyPart, FlaggedPriestley, MemberOrder, SymbolicSet};
pub use order::{FinitePriestley, FiniteTopSpace, Order, PointSet};
