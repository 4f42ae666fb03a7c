//! Functional graphs of power maps `g -> g^t` on finite groups.
//!
//! Closed-form descriptions for cyclic, abelian and flower groups are built
//! in [`structural`] and checked against brute-force enumeration in
//! [`oracle`].

pub mod arith;
pub mod cli;
pub mod error;
pub mod fgraph;
pub mod groups;
pub mod notation;
pub mod oracle;
pub mod selftest;
pub mod structural;
pub mod tree;

pub use error::{Error, Result};
