//! Core pipeline for learning covert per-node transmission radii.
//!
//! The crate models a planar ad-hoc network whose nodes pick individual
//! communication radii. Smaller radii shrink the region in which the network
//! is detectable, but the link graph the radii induce must stay connected.
//! The modules cover the full span from geometry to learned predictors:
//!
//! * [`geometry`]: distances, link predicates, union-of-disks coverage areas.
//! * [`oracle`]: connectivity-preserving radius assignments that minimise
//!   coverage area (exhaustive, tree-based, local search).
//! * [`dataset`]: seeded topology generation, labelling, splits, partitions.
//! * [`tensor`]: small dense tensors with reverse-mode differentiation and
//!   first-order optimisers.
//! * [`gnn`]: graph-convolution and graph-attention models for per-node
//!   radius regression, plus standalone training.
//! * [`fed`]: federated simulation that averages worker models each round.
//! * [`prune`]: magnitude pruning and sparsity sweeps over trained models.
//! * [`metrics`]: error metrics and area-based evaluation reports.
//!
//! Everything is deterministic given explicit seeds; no global state, no
//! filesystem access. The crate is `no_std` (with `alloc`), so hosts provide
//! their own IO.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod dataset;
pub mod error;
pub mod fed;
pub mod geometry;
pub mod gnn;
pub mod metrics;
pub mod oracle;
pub mod seeds;
pub mod tensor;

mod math;

pub use error::{Error, Result};
