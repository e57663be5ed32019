//! Exact computation of decoupling exponents for moment manifolds, the
//! induction-on-scales matrix and its fixed vector, polynomial-rank
//! transversality certificates, and solution counts of Vinogradov systems.

pub mod error;
pub mod exponents;
pub mod linalg;
pub mod count;
pub mod matrix;
pub mod poly;
pub mod transversality;
pub mod lattice;
pub mod rational;

pub use error::{Error, Result};
pub use lattice::{BoxSpec, ExponentSet, KBox, LevelProfile, MultiIndex};
pub use rational::Rational;
