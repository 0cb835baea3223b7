//! Measure-free probability on finite-dimensional Riesz spaces.
//!
//! The Riesz space is realized concretely as the scalar functions on a finite
//! set of weighted atoms ([`Space`], [`Element`]). Conditional expectations
//! are block-wise weighted averages over a partition ([`CondExp`]), events are
//! band projections ([`BandProjection`]), and independence, variance, the
//! Bernoulli process and its limit theorems are built on top.
//!
//! Identities are checked in exact rational arithmetic ([`Rational`]);
//! limit experiments at large `n` run on `f64`.
//!
//! ```
//! use rieszprob::{CondExp, Partition, Rational, Scalar, Space};
//!
//! let space = Space::<Rational>::uniform(3).unwrap();
//! let t = CondExp::new(&space, Partition::new(vec![0, 0, 1]).unwrap()).unwrap();
//! let f = space.element(vec![Rational::from_i64(1), Rational::from_i64(2), Rational::from_i64(5)]).unwrap();
//! let g = space.element(vec![Rational::from_i64(4), Rational::from_i64(4), Rational::from_i64(7)]).unwrap();
//! assert!(t.check_averaging(&f, &g).unwrap().holds);
//! ```

pub mod band;
pub mod bernoulli;
pub mod check;
pub mod conditional;
pub mod error;
pub mod independence;
pub mod io;
pub mod partition;
pub mod random;
pub mod scalar;
pub mod space;
pub mod stats;

pub use band::BandProjection;
pub use bernoulli::{poisson_limit, poisson_scheme, BernoulliProcess, Representation, SnStatistics};
pub use check::Check;
pub use conditional::CondExp;
pub use error::{Error, Result};
pub use independence::{
    are_independent_projections, are_independent_projections_on_unit, are_independent_subspaces,
    extend_with_independent_events, generated_subspace, is_independent_family, pairwise_product_rule, Extension,
    IndependenceWitness,
};
pub use partition::Partition;
pub use scalar::{Rational, Scalar, ScalarRepr};
pub use space::{Element, LatticeOp, RealFunction, Space};
pub use stats::{bienayme, cross_term, tchebichev, variance, Evidence, VarianceReport};
