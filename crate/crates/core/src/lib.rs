//! Wireless sensor network topologies built from neighbor rank: symmetric
//! k-NN, symmetric (k,j)-NN, the random geometric graph, and the composite
//! (k,j)-NN-RGG, together with a seeded Monte Carlo harness that measures
//! connectivity probability and degree statistics over node-count sweeps.
//!
//! ```
//! use kjnn_core::{pairwise_rankings, sample_uniform_points, build_symmetric_kj, is_connected, TopologyParams};
//!
//! let cloud = sample_uniform_points(200, 7).unwrap();
//! let ranking = pairwise_rankings(&cloud);
//! let graph = build_symmetric_kj(&ranking, TopologyParams::new(5, 3).unwrap()).unwrap();
//! assert!(graph.degrees().iter().all(|&d| d >= 3));
//! let _ = is_connected(&graph);
//! ```

pub mod error;
pub mod experiment;
pub mod geometry;
pub mod graph;
pub mod io;
pub mod svg;
pub mod topology;

pub use error::{Error, Result};
pub use experiment::{
    aggregate, degree_distribution, link_gain, run_experiment, run_experiment_serial, run_paired,
    run_paired_trials, run_trial, run_trials, sweep_mean, trial_cloud, trial_seed, AggregateResult,
    ExperimentConfig, RadiusMode, TopologyKind, TrialResult,
};
pub use geometry::{pairwise_rankings, sample_uniform_points, NeighborRanking, NodeId, Point, PointCloud};
pub use graph::{connected_components, degree_stats, is_connected, DegreeStats, DisjointSet, UndirectedGraph};
pub use topology::{
    build_composite, build_rgg, build_symmetric_kj, build_symmetric_knn, critical_radius, PruneRule,
    RadiusParams, TopologyParams,
};
