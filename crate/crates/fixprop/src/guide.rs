//! The long-form guide, rendered by mdbook from `book/` at the repository
//! root. mdbook cannot execute Rust code fences, so every chapter is also
//! attached here as module documentation: `cargo test --doc` compiles and
//! runs each snippet against the public API. One module per chapter keeps a
//! failing doctest traceable to its markdown source.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/instances.md")]
pub mod instances {}

#[doc = include_str!("../../../book/src/first-order-lp.md")]
pub mod first_order_lp {}

#[doc = include_str!("../../../book/src/propagation.md")]
pub mod propagation {}

#[doc = include_str!("../../../book/src/search.md")]
pub mod search {}

#[doc = include_str!("../../../book/src/benchmarking.md")]
pub mod benchmarking {}
