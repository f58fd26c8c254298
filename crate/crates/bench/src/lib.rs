//! Criterion benchmarks for the cipher and the analysis harness; see `benches/`.
