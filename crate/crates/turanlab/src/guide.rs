//! The book under `book/src`, included chapter by chapter so that every
//! code snippet compiles and runs under `cargo test --doc`. One module per
//! chapter keeps doc-test failures attributable to their source file.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/hypergraphs.md")]
pub mod hypergraphs {}

#[doc = include_str!("../../../book/src/tournaments.md")]
pub mod tournaments {}

#[doc = include_str!("../../../book/src/orientability.md")]
pub mod orientability {}

#[doc = include_str!("../../../book/src/tight-walks.md")]
pub mod tight_walks {}

#[doc = include_str!("../../../book/src/extremal.md")]
pub mod extremal {}

#[doc = include_str!("../../../book/src/plane.md")]
pub mod plane_geometry {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
