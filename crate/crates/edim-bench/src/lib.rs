//! Placeholder crate root; the content of this crate is its benches.
