//! Criterion benchmarks for scissor-core live under `benches/`.
