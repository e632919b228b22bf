//! Benchmarks for hpmon-core; see `benches/`.
