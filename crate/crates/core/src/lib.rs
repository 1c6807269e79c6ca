//! Exact multiple partition structures, Jack-deformed branching graphs over a
//! finite group, Ewens measures on wreath products, kernels on the generalized
//! Thoma set, and multiple Poisson-Dirichlet sampling.

pub mod branching;
pub mod error;
pub mod group;
pub mod measures;
pub mod memo;
pub mod partition;
pub mod rational;
pub mod sampling;
pub mod scalar;
pub mod symfunc;
pub mod thoma;
pub mod wreath;

pub use error::{Error, Result};
pub use group::FiniteGroupData;
pub use partition::{enumerate_multipartitions, enumerate_partitions, MultiPartition, YoungDiagram};
pub use rational::Rational;
