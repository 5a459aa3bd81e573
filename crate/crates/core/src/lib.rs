//! Finite bounded lattices, their congruences, compatible monotone functions
//! and the discrete lattice-valued Sugeno integral.
//!
//! Every structural claim in the library has a brute-force
//! counterpart (closure oracles, exhaustive enumeration) so it can be checked
//! mechanically at small sizes.

pub mod compat;
pub mod congruence;
pub mod constructions;
pub mod io;
pub mod lattice;
pub mod polynomial;
pub mod sugeno;
pub mod verify;

pub use compat::{CompatMode, FunctionTable};
pub use congruence::{Congruence, Partition};
pub use lattice::{ElementId, Lattice, LatticeError};
pub use polynomial::{NormalForm, Polynomial, Term};
pub use sugeno::Capacity;
