//! Cohomological-dimension obstructions to compact quotients `Γ\G/H`.
//!
//! A group acting properly and cocompactly on `G/H` has vcd equal to
//! `dim(G/K) − dim(H/K_H)`. If every `ι`-invariant component of
//! `a⁺ ∖ μ(H)` avoids a simple root whose Anosov property bounds the vcd
//! strictly below that number, no such group exists.

mod catalog;
mod groups;
mod rules;
mod verdict;

pub use catalog::{load_catalog, parse_catalog, Catalog, BUILTIN_CATALOGS};
pub use groups::{
    check_multiplicities, dim_symmetric_space, group_data, required_vcd, ClassicalGroupData, GroupDescriptor,
    RootFactor, Scalars, StandardRep,
};
pub use rules::{anosov_vcd_bound, parabolic_pair_dimension, BoundRule, VcdBound};
pub use verdict::{
    obstruction_verdict, ComponentTrace, ObstructionCase, ObstructionStatus, ObstructionVerdict, OrbitTrace, RootBound,
};
