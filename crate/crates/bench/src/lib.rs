//! Criterion benchmarks for `qnull`; see `benches/`.
