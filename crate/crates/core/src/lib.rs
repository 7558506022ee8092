//! Layered ideal triangulations of 2-bridge link complements, their
//! angle structures and hyperbolic volume estimates.

pub mod angles;
pub mod blocks;
pub mod isosig;
pub mod moves;
pub mod perm;
pub mod triangulation;
pub mod volume;
pub mod word;
