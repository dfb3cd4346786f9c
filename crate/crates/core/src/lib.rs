//! Computational tools for Cartan projections, wall arrangements in Weyl
//! chambers, empirical sharpness and Anosov certification over word balls,
//! and cohomological-dimension obstructions to compact quotients.

pub mod arrangement;
pub mod cartan;
pub mod certify;
pub mod error;
pub mod lp;
pub mod obstruct;
pub mod rational;
pub mod rootsys;

pub use error::{Error, Result};
pub use rational::Q;
pub use rootsys::{build_root_system, ChamberMembership, Family, FactorType, MultiplicityProfile, RootSystem, WeylElement};
