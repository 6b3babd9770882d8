//! Benchmark-only crate; see `benches/channels.rs`.
