//! Streams over a discard prop: typed diagrams with delayed traces, their
//! compilation to regular stateful sequences, and finite approximation
//! semantics, over qubit channels, bit functions and integer linear maps.

pub mod approx;
pub mod backend;
pub mod classical;
pub mod cpm;
pub mod demos;
pub mod diagram;
pub mod dsl;
pub mod random;
pub mod rewrite;
pub mod stateful;
pub mod types;

pub use backend::{Backend, BackendError, Capabilities, Gens};
pub use diagram::{stratify, type_of, Diagram, DiagramError, Node};
pub use types::{degree, disjoint, profile_at, rise, types_equivalent, Color, StreamType, TypeError};
