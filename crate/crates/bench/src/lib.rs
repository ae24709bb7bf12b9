//! Criterion benchmarks for the topology builders and the trial loop; see
//! `benches/topology.rs`.
