//! Supersingular L-isogeny graphs over small prime fields: exact graph
//! construction from modular polynomials, three independent counts of
//! principal isogeny cycles (Brandt matrices, Hurwitz class numbers, and
//! ideal-theoretic class-group sums), canonical decomposition of isogeny
//! walks, and spectral/greedy searches for low edge-expansion cuts.
//!
//! See the `examples/` directory for one runnable example per capability;
//! the `isograph` binary wires the same functionality into subcommands.

pub mod algebra;
pub mod brandt;
pub mod classnum;
pub mod cli;
pub mod curves;
pub mod cuts;
pub mod decomp;
pub mod error;
pub mod graph;
pub mod modpoly;

pub use error::{Error, Result};
