//! Library half of the `knap` command line tool: file formats, seeded
//! instance generators, and the timed benchmark harness. The binary in
//! `main.rs` is a thin argument-parsing layer over these modules and
//! the `knap-core` solvers.

pub mod bench;
pub mod formats;
pub mod gen;
