//! Exact combinatorial machinery around tight cycles in 3-uniform
//! hypergraphs: orientability with tournament witnesses or bottle
//! certificates, cyclic-triangle counting, tight-walk detection in a derived
//! pair digraph, the iterated blow-up construction, desk-scale exact Turán
//! search, and the planar almost-similar-triangle reduction with exact
//! arithmetic.
//!
//! Every decision procedure here either verifies its own output or is paired
//! with an independent brute-force oracle in the test suite. The `turanlab`
//! binary exposes each operation as a subcommand; see the book under `book/`
//! for a guided tour.

pub mod constructions;
pub mod error;
pub mod guide;
pub mod hypergraph;
pub mod manifest;
pub mod orientation;
pub mod plane;
pub mod search;
pub mod tournament;
pub mod walks;

pub use error::{Error, Result};
pub use hypergraph::{cycle_minus_one, k4_minus, tight_cycle, Hypergraph3, Partition3};
pub use orientation::{BottleCertificate, OrientationOutcome};
pub use tournament::Tournament;

/// Materialization guard used by blow-ups and the iterated construction,
/// configurable through the `TURANLAB_MAX_EDGES` environment variable.
pub fn max_edges_cap() -> usize {
    std::env::var("TURANLAB_MAX_EDGES")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(10_000_000)
}
