//! Small shared helpers: dense bit sets and strongly connected components.

mod bitset;
mod scc;

pub use bitset::BitSet;
pub use scc::{sccs, Scc};
