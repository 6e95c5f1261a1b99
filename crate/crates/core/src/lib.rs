//! Computations with right-angled Artin groups: normal forms, Whitehead
//! automorphisms, symplectic structures and generating sets for their
//! stabilizers.

pub mod automorphism;
pub mod catalog;
pub mod error;
pub mod genset;
pub mod graph;
pub mod ia_kernel;
pub mod io;
pub mod matrix;
pub mod q_reduce;
pub mod stabilizer;
pub mod symplectic;
pub mod whitehead;
pub mod words;

pub use automorphism::{Automorphism, Factor};
pub use error::{Caps, Error, Result};
pub use graph::{Graph, Letter, LetterSet, VertexSet};
pub use matrix::IntMatrix;
pub use whitehead::WhiteheadAuto;
pub use words::{CyclicWord, GroupElement};
