//! Fiber-labeled Reeb digraphs of Morse functions on closed surfaces and
//! 3-manifolds.
//!
//! The crate is organised bottom-up:
//!
//! - [`surface`]: normal forms of closed surfaces and their surgery rules.
//! - [`digraph`]: labeled Reeb digraphs, pre-M validation, invariants,
//!   isomorphism, and the `reeb v1` / DOT formats.
//! - [`sim`]: combinatorial Morse functions as handle sequences, replayed
//!   into Reeb data and level traces, plus exhaustive enumeration.
//! - [`classify`]: the realizability conditions, connected-sum families and
//!   the surface minimal-genus formula.
//! - [`realize`]: compiles a valid digraph into a certificate sequence.
//! - [`verify`]: brute-force harnesses cross-checking all of the above.

pub mod classify;
pub mod digraph;
mod parse;
pub mod realize;
pub mod sim;
pub mod surface;
pub mod verify;

pub use parse::ParseError;
