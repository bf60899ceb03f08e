//! Combinatorics of nested sets on labelled diagrams.
//!
//! The crate enumerates the face poset of the graph associahedron `A_D`,
//! realises it as a convex polytope over exact rationals, computes its
//! oriented cellular chain complex and integer homology, builds the Dynkin
//! cochain complex for a coefficient system together with its embedding into
//! cellular cochains, and produces the symbolic associator/braid presentation
//! attached to the diagram.

pub mod coherence;
pub mod diagram;
pub mod dynkin;
pub mod error;
pub mod homology;
pub mod linalg;
pub mod lp;
pub mod nested;
pub mod polytope;
pub mod rational;

pub use diagram::{parse_diagram, Diagram, Label, Quotient, Subdiagram};
pub use error::{Error, Result};
pub use nested::{NestedSet, TwoFace};
