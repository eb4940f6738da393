//! Benchmark-only crate; the benchmarks live in `benches/main.rs`.
