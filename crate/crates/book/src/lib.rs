//! Guide chapters, compiled here so `cargo test` runs their listings.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/model.md")]
pub mod model {}
#[doc = include_str!("../../../book/src/simulation.md")]
pub mod simulation {}
#[doc = include_str!("../../../book/src/reproduction-number.md")]
pub mod reproduction_number {}
#[doc = include_str!("../../../book/src/optimal-control.md")]
pub mod optimal_control {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
