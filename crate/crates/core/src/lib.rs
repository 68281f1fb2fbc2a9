//! Separated box products of digraphs, their symmetries and the tetravalent
//! graphs they produce.

pub mod alter;
pub mod classify;
pub mod digraph;
pub mod error;
pub mod group;
pub mod harness;
pub mod io;
pub mod perm;
pub mod products;
pub mod symmetry;

pub use digraph::{dcyc, directed_cycle, Dart, Digraph, Walk};
pub use error::{Error, Result};
pub use group::{Action, PermGroup};
pub use perm::Perm;
