//! Decide when limits and colimits over a finite category agree.
//!
//! Given a finite category `I`, this crate decides whether the limit and
//! colimit functors `C^I → C` are naturally isomorphic, for `C = Set` and for
//! `C` a category of modules over `Z`, `Q`, `Z/n` or `F_p`. Every verdict comes
//! with a certificate, and brute-force limit/colimit oracles over finite sets
//! and `F_p`-vector spaces re-check those certificates.

pub mod category;
pub mod corpus;
pub mod decision;
pub mod invariant;
pub mod linalg;
pub mod mod_oracle;
pub mod rng;
pub mod set_oracle;
mod union_find;

pub use category::{
    CategoryError, ComponentPartition, Embedding, FinCategory, Morphism, ParseError,
    StrongConnectivity, ValidationReport, Violation,
};
pub use union_find::UnionFind;
