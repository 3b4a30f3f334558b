//! Simple-graph generators for preferential attachment with arbitrary
//! (non-linear) attachment weights.
//!
//! * [`seq`]: sequential generator driven by a dynamic proposal list.
//! * [`par`]: batch-parallel generator for polynomial weights.
//! * [`em`]: two-phase generator that samples host degrees first and resolves
//!   them to concrete nodes through priority queues.
//! * [`verify`]: exact reference sampler and statistical checks.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod em;
pub mod error;
pub mod graph;
pub mod io;
pub mod par;
pub mod proposal;
pub mod rng;
pub mod seq;
pub mod verify;
pub mod weight;

pub use config::GenConfig;
pub use error::{Error, Result};
pub use graph::{degree_histogram, make_seed_graph, Graph, NodeId, SeedSpec};
pub use io::{read_edges, write_edges, EdgeFormat};
pub use proposal::{EntryLayout, ProposalList, ProposalStats};
pub use rng::RandomSource;
pub use weight::{TailRule, WeightFunction};
