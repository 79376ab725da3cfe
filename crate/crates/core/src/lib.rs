//! Coprime actions of elementary abelian `p`-groups on finite `p'`-groups.
//!
//! The crate builds permutation-group instances `G` together with an action
//! of `A ≅ (Z/p)^k`, computes the A-special and γ-A-special subgroup
//! families, the associated graded Lie ring `L(G)` with its induced
//! `A`-action, and checks the structural statements that tie these objects
//! to the nilpotency of `G^(d)` and `γ_{k-2}(G)`.

pub mod error;
pub mod group;
pub mod perm;
pub mod section;
pub mod series;
pub mod subspace;
pub mod action;
pub mod lie;
pub mod special;
pub mod verdict;
pub mod instances;
pub mod harness;

pub use error::{Error, Result};
pub use group::{commutator_subgroup, normal_closure, Group};
pub use perm::Perm;
