//! Exact computations on the Hamming space `[q]^n`: ball volumes and their
//! intersections, independent sets of the distance graph `G_{q,n,t}` (codes
//! correcting `t` errors), the graph container algorithm, supersaturation
//! checks, and classical bounds on code size.

pub mod bounds;
pub mod cli;
pub mod budget;
pub mod container;
pub mod error;
pub mod graph;
pub mod indep;
pub mod intersections;
pub mod numeric;
pub mod space;
pub mod supersat;
pub mod volumes;

pub use budget::Budget;
pub use error::{Error, Result};
pub use graph::{BitGraph, DistanceGraph, VertexSet};
pub use numeric::{CheckResult, Nat, Rat, Relation};
pub use space::{CodeParams, Word};
