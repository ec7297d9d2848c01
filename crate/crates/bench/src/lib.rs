//! Criterion benchmarks for ggt-core; see `benches/`.
