//! Criterion benchmarks for the core crate.
