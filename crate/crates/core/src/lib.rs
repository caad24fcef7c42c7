//! Tree decision diagrams: construction, transformations, canonical
//! minimization, bottom-up compilation, exact learning and OBDD conversion.

pub mod bench;
pub mod circuit;
pub mod compile;
pub mod convert;
pub mod diagram;
pub mod cnf;
pub mod error;
pub mod format;
pub mod graph;
pub mod learn;
pub mod minimize;
pub mod oracle;
pub mod par;
pub mod transform;
pub mod var;
pub mod vtree;

pub use error::{Error, Result};
pub use var::{Assignment, Lit, Var};
