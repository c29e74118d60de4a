//! Criterion benchmarks live in `benches/tropical.rs`.
