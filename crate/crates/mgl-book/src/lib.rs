//! The book under `book/` explains the measure-geometric calculus with
//! runnable snippets. mdbook cannot execute examples against a local crate,
//! so each chapter is included here as a doc comment and
//! `cargo test --doc -p mgl-book` runs every fenced Rust block.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/measures.md")]
pub mod measures {}

#[doc = include_str!("../../../book/src/calculus.md")]
pub mod calculus {}

#[doc = include_str!("../../../book/src/closed_forms.md")]
pub mod closed_forms {}

#[doc = include_str!("../../../book/src/transfer_matrix.md")]
pub mod transfer_matrix {}

#[doc = include_str!("../../../book/src/oracle.md")]
pub mod oracle {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
