//! The songbird knowledge base and corpus used throughout the tests and the
//! command-line examples.

/// Knowledge base in `.kos` form.
pub const SONGBIRD_KOS: &str = include_str!("../fixtures/songbird.kos");

/// Four documents indexed against [`SONGBIRD_KOS`].
pub const SONGBIRD_DOCS: &str = include_str!("../fixtures/songbird.docs");
