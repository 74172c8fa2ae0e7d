//! Exact tooling for the triple and quadruple Roman domination problems:
//! graph generation, labeling validators, a brute-force oracle, integer
//! programming formulations, a 0/1 branch-and-bound solver and a benchmark
//! harness.

pub mod bench;
pub mod graph;
pub mod labeling;
pub mod model;
pub mod oracle;
pub mod solver;
