//! Exact simulation of a two-chain qubit ladder that emulates the spin-full
//! one-dimensional Fermi-Hubbard model, together with the superconducting
//! circuit formulas that set its parameters.
//!
//! Conventions shared by every module:
//! * the ladder has two chains of `n` sites; `(j, down)` is linear qubit `j`
//!   and `(j, up)` is qubit `j + n`;
//! * linear qubit `q` is bit `q - 1` of a basis index (qubit 1 least significant);
//! * a set bit is an excited qubit and `Z |excited> = +|excited>`, so the
//!   fermion number of a mode is `(Z + 1) / 2`.

pub mod circuit;
pub mod error;
pub mod hamiltonians;
pub mod jordan_wigner;
pub mod ladder;
pub mod pauli;
pub mod protocols;
pub mod sector;
pub mod solver;
pub mod sparse;
pub mod state;

pub use error::{Error, Result};
pub use hamiltonians::{HubbardParams, LadderParams};
pub use ladder::{Chain, LadderIndex};
pub use pauli::{Pauli, PauliString, PauliSum};
pub use sector::{BasisSet, FullBasis, SectorBasis};
pub use sparse::SparseOperator;
pub use state::StateVector;
