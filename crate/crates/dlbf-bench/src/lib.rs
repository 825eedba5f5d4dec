//! Benchmark-only crate. The benchmarks live in `benches/`; run them with
//! `cargo bench -p dlbf-bench`.
