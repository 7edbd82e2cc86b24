//! Maximal positively invariant sets of polynomial discrete-time dynamics
//! under compact basic semialgebraic state constraints.
//!
//! The pipeline: exact sparse polynomial arithmetic ([`poly`]), conservative
//! interval enclosures over rational boxes ([`interval`]), basic
//! semialgebraic sets with the restricted preimage update ([`semialg`]), a
//! certified interval branch-and-bound minimizer ([`globopt`]), and the set
//! recursion with its certified termination test ([`engine`]).

pub mod contract;
pub mod engine;
pub mod error;
pub mod globopt;
pub mod interval;
pub mod parse;
pub mod poly;
pub mod semialg;

pub use error::{Error, Result};
pub use poly::{rat, ratio, Monomial, PolyMap, Polynomial};
