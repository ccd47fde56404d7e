//! Criterion micro-benchmarks for the convolution kernels and solvers
//! live under `benches/`; this crate has no library surface of its own.
//! The reproducible, checksum-verified macro benchmarks are the `knap
//! bench` subcommand of the CLI.
