//! Benchmarks for the main kernels live in `benches/`.
