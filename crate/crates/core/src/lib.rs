//! Exact Bell-violation analysis of graph states under qubit loss.
//!
//! Bounds and post-loss expectation values are computed in closed form over
//! `Q[√2]`; an independent statevector oracle checks them numerically.

pub mod bell;
pub mod dense;
pub mod error;
pub mod exec;
pub mod families;
pub mod graph;
pub mod loss;
pub mod mixture;
pub mod oracle;
pub mod pauli;
pub mod quad;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};
pub use exec::Mode;
pub use graph::{Graph, Relabeling, VertexSet};
pub use loss::{BoundMode, LossSet};
pub use quad::{Quad, Rational};
