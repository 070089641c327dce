//! Covering the small cuts of a multigraph with links.
//!
//! A cut is a proper nonempty node subset `S`; it is *small* when fewer than
//! `k` graph edges leave it. Given a set of costed links, the goal is a
//! cheapest link subset crossing every small cut. This crate provides:
//!
//! * [`multigraph`]: folded-multiplicity graphs, cut degrees and Stoer–Wagner.
//! * [`covering`]: feasibility (min-cut and enumeration routes) and cores.
//! * [`wgmv`]: the two-phase primal-dual algorithm with exact rational duals.
//! * [`tightgen`]: the gadget family on which the algorithm pays `5p/(p+2)`
//!   times the optimum.
//! * [`oracle`]: exhaustive optimum, structural verifiers and gap experiments.
//! * [`cli`]: the `scc` command line tool and its JSON/DOT formats.

pub mod cli;
pub mod covering;
pub mod error;
pub mod multigraph;
pub mod oracle;
pub mod rational;
pub mod tightgen;
pub mod wgmv;

pub use covering::{Instance, Link, LinkTag};
pub use error::{Error, Result};
pub use multigraph::{Cut, MultiGraph, NodeId};
pub use rational::Rational;
