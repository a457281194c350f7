//! Benchmark-only crate. The measurements live in `benches/engine.rs`; run
//! them with `cargo bench -p qcong-bench` (or `-- --test` for a quick smoke
//! pass).

#![forbid(unsafe_code)]
