//! Dependent type theory kernel with Π and Σ types, and a computational
//! semantics lab in finite groupoids and truncated simplicial sets.

pub mod gpd;
pub mod kernel;
pub mod label;
pub mod modelcheck;
pub mod semantics;
pub mod sset;
pub mod syntax;
pub mod cli;

pub use label::Label;
