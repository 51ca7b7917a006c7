//! Criterion benchmarks for kacfusion-core; see `benches/`.
