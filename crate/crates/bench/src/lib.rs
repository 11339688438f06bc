//! Benchmarks for the surfval core; see `benches/`.
