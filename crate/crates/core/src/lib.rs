//! Competitive search on rooted metric networks.
//!
//! A hider sits at an unknown point of a network; a searcher starting at the
//! root either moves along arcs at unit speed (pathwise search) or extends a
//! connected searched region at unit rate of measure (expanding search). The
//! crate computes optimal deterministic ratios, builds and samples
//! randomized strategies, and certifies lower and upper bounds on the
//! randomized search ratio.

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod cli;
pub mod error;
pub mod expanding;
pub mod generate;
pub mod manifest;
pub mod network;
pub mod pathwise;
pub mod profile;
pub mod sim;
pub mod subnet;
pub mod ynet;

pub use error::{Error, Result};
pub use network::{ArcId, MetricNetwork, PointRef, Probe, VertexId, EPS};
