//! Finite-dimensional quantum probability.
//!
//! Eventualities are Hilbert subspaces ([`Eventuality`]), observables are
//! complete orthogonal families of them ([`Observable`]), and states are
//! von Neumann probability operators ([`ProbabilityOperator`]). On top of the
//! Born rule the crate provides Bayesian collapse, joint and conditional
//! probabilities for sensor pairs, Luder's rule, branch decompositions,
//! Heisenberg-picture transport, and the weak / proper / entropic anthropic
//! weighting schemes that turn gross perception probabilities into net ones.

pub mod anthropic;
pub mod error;
pub mod hilbert;
pub mod lattice;
pub mod observable;
pub mod probability;
pub mod random;

pub use anthropic::{AnthropicScheme, LogBase, ObserverModel};
pub use error::{Error, Result};
pub use hilbert::{CompositeSpace, HilbertSpace, Ket, Operator, Structure, DEFAULT_TOL};
pub use lattice::{ClassicalEventuality, ClassicalModel, Eventuality};
pub use observable::{Observable, QuantitativeObservable};
pub use probability::{ProbabilityOperator, State};
