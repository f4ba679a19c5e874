//! wittlab: exact-arithmetic computer algebra for big and p-adic Witt
//! vectors and their companion structures — universal Witt polynomials,
//! ghost maps, Frobenius/Verschiebung/Teichmueller operators, symmetric and
//! quasi-symmetric functions, lambda-ring operations and plethysm, Cartier
//! operators, necklace rings and the cyclic Burnside ring — with
//! machine-verified identities at configurable truncation.

pub mod arith;
pub mod cartier;
pub mod cli;
pub mod error;
pub mod fe;
pub mod necklace;
pub mod nest;
pub mod qpoly;
pub mod qsymm;
pub mod ring;
pub mod series;
pub mod symm;
pub mod univ;
pub mod verify;
pub mod witt;

pub use error::{Result, WittError};
pub use nest::Nest;
pub use ring::{RingElem, RingSpec};
