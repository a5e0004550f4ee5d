//! File formats, fingerprint digests and the cross-validation harness built
//! on `graphon-wl-core`.

pub mod digest;
pub mod format;
pub mod harness;
pub mod pairs;
pub mod sexpr;
