//! Construction and analysis of extended 1-perfect binary codes of length 16.
//!
//! The crate builds such codes by doubling a pair of extended 1-perfect
//! partitions of length 8 through a class permutation, computes their kernel
//! and rank invariants, forms the minimum-distance graph of the kernel
//! quotient together with the Steiner quadruple systems sitting on its
//! vertices and edges, classifies the derived Steiner triple systems by their
//! Pasch-configuration signatures, and mechanically checks the expected
//! quotient-graph structure for every kernel dimension the doubling can
//! produce.

pub mod bitcode;
pub mod error;
pub mod fano;
pub mod io;
pub mod partitions;
pub mod sqsgraph;
pub mod ststype;
pub mod verify;

pub use bitcode::{Code, Quadruple, Subspace, Triple, Word};
pub use error::{Error, Result};
