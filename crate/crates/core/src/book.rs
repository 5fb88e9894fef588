//! Runs every code snippet in the narrative guide as a doc-test, so the
//! book cannot drift from the library. One module per chapter keeps test
//! failures attributable to a file.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/hard-thresholding.md")]
pub mod hard_thresholding {}

#[doc = include_str!("../../../book/src/objectives.md")]
pub mod objectives {}

#[doc = include_str!("../../../book/src/smoothness.md")]
pub mod smoothness {}

#[doc = include_str!("../../../book/src/iht.md")]
pub mod iht {}

#[doc = include_str!("../../../book/src/experiments.md")]
pub mod experiments {}
