//! Criterion benchmarks for `hgstate`; run with `cargo bench -p hgstate-bench`.
