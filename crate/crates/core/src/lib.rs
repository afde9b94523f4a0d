//! Exact computations with Freese-Nation style witnesses on finite
//! topological spaces.
//!
//! Spaces are stored extensionally (every open set is listed) and every
//! predicate is decided by direct enumeration. On top of the topology engine
//! in [`topo`] sit witness construction and verification ([`witness`]),
//! quotients by families of open sets ([`quotient`]), the open-open game
//! ([`game`]), transfer of witnesses along irreducible maps ([`transfer`])
//! and the generators, documents and sweeps used by the CLI ([`workbench`]).

pub mod error;
pub mod game;
pub mod quotient;
pub mod topo;
pub mod transfer;
pub mod witness;
pub mod workbench;

pub use error::{Error, Result};
