//! Criterion benchmarks for the dissecta kernels; see `benches/`.
