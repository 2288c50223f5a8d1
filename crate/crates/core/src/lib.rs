//! Permutation groups with exact conjugacy-class counts, and exact
//! verification of class-number inequalities on concrete instances.
//!
//! Points are 0-based internally; text uses 1-based cycle notation.
//! Products act on the right: `p.then(q)` maps `x` to `q(p(x))`.

pub mod blocks;
pub mod chain;
pub mod classes;
pub mod constructions;
pub mod error;
pub mod group;
pub mod harness;
pub mod partitions;
pub mod perm;
pub mod report;
pub mod verify;

pub use error::{Error, Result};
pub use group::{FamilyTag, PermGroup};
pub use perm::Permutation;
