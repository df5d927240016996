//! Kings, kernels and quasi-kernels of semicomplete digraph compositions.
//!
//! The crate is organised bottom-up:
//!
//! * [`digraph`]: adjacency-list digraphs, BFS distances, strong components.
//! * [`composition`]: `T[H_1, ..., H_t]` and its flattening.
//! * [`kings`]: k-kings, composition-level characterizations, establishment.
//! * [`kernels`]: quasi-kernels, k-kernels, the brute-force oracle, and the
//!   `C_3[D, D, D]` reduction gadget.
//! * [`gen`]: seeded generators and fixed instances.
//! * [`format`]: the text and JSON file formats.
//! * [`experiments`]: corpus runs that check each structural result against brute force.

pub mod composition;
pub mod digraph;
pub mod error;
pub mod experiments;
pub mod format;
pub mod gen;
pub mod kernels;
pub mod kings;

pub use composition::{Composition, CompositionVertex, OuterReport};
pub use digraph::{DigraphClass, Digraph, Distance, DistanceMatrix, StrongDecomposition};
pub use error::{Error, Result};
pub use gen::{Constraint, GenKind, GenSpec};
pub use kernels::{CertificateKind, KernelCertificate};
pub use kings::{FactorFlag, FactorKingClassification, KingExistence, KingReason, KingReport};
