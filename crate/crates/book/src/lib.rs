//! The guide in `book/`, compiled so that every listing runs as a doctest.
//! One module per chapter keeps failures traceable to their file.

#[doc = include_str!("../../../book/src/intro.md")]
pub mod intro {}
#[doc = include_str!("../../../book/src/primal-dual.md")]
pub mod primal_dual {}
#[doc = include_str!("../../../book/src/set-cover.md")]
pub mod set_cover {}
#[doc = include_str!("../../../book/src/ski-rental.md")]
pub mod ski_rental {}
#[doc = include_str!("../../../book/src/bahncard.md")]
pub mod bahncard {}
#[doc = include_str!("../../../book/src/tcp.md")]
pub mod tcp {}
#[doc = include_str!("../../../book/src/experiments.md")]
pub mod experiments {}
#[doc = include_str!("../../../book/src/verification.md")]
pub mod verification {}
