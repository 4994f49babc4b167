//! Compiles every code snippet in the guide as a doc-test, so the book in
//! `book/` can never drift from the library it documents.

#[doc = include_str!("../../../book/src/exact-arithmetic.md")]
mod exact_arithmetic {}

#[doc = include_str!("../../../book/src/lie-algebras.md")]
mod lie_algebras {}

#[doc = include_str!("../../../book/src/connection-and-curvature.md")]
mod connection_and_curvature {}

#[doc = include_str!("../../../book/src/circulant-structures.md")]
mod circulant_structures {}

#[doc = include_str!("../../../book/src/constraint-sets.md")]
mod constraint_sets {}

#[doc = include_str!("../../../book/src/command-line.md")]
mod command_line {}
