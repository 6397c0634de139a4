//! Underspecified DRS construction for a small German fragment.

pub mod disambig;
pub mod interface;
pub mod lexicon;
pub mod modeleval;
pub mod pipeline;
pub mod syntax;
pub mod udrs;
