//! The guide in `book/src`, compiled so its examples run under `cargo test`.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/exact.md")]
pub mod exact {}

#[doc = include_str!("../../../book/src/transforms.md")]
pub mod transforms {}

#[doc = include_str!("../../../book/src/systems.md")]
pub mod systems {}

#[doc = include_str!("../../../book/src/automata.md")]
pub mod automata {}

#[doc = include_str!("../../../book/src/purity.md")]
pub mod purity {}

#[doc = include_str!("../../../book/src/probe.md")]
pub mod probe {}

// shell sessions are `text` blocks; only the library snippet runs
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
