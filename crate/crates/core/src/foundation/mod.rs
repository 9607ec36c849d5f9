//! Exact scalars, the group `G ≅ Zⁿ`, its orders and lattice utilities.

pub mod group;
pub mod lattice;
pub mod order;
pub mod parse;
pub mod poly;
pub mod quadratic;
pub mod scalar;

pub use group::{GroupElement, GroupSpec, Weight, WeightBase};
pub use lattice::{complement_basis, eq31_matrix};
pub use order::{classify_order, OrderKind, OrderSpec, TieBreak};
pub use poly::{Monomial, Poly, Var};
pub use quadratic::QuadSurd;
pub use scalar::Scalar;
