//! Exact branch-and-price solver for the weighted list coloring problem
//! (WLCP) over its set covering formulation.

mod bitset;
pub mod branch;
pub mod colgen;
pub mod io;
pub mod lp;
pub mod master;
pub mod model;
pub mod oracle;
pub mod preprocess;
pub mod pricing;
pub mod reductions;
#[doc(hidden)]
pub mod testkit;

pub use model::{
    canonicalize, verify_coloring, CanonicalInstance, Color, Graph, Instance, ListColoring, Vertex,
};
