//! Attack-tolerance toolkit for the wrap-around butterfly.
//!
//! The crate is `no_std` and only needs `alloc`. It provides:
//!
//! * [`topology`]: the directed wrap-around butterfly `WBF(m)`, its undirected
//!   view, vertex-transitive relabelling, and generic undirected graphs.
//! * [`trust`]: trusted neighborhoods, trust boundaries and the effective
//!   redundancy of a node pair, computed as a vertex max-flow after the two
//!   trusted neighborhoods are collapsed.
//! * [`routing`]: unipath routing and the staged multipath construction that
//!   yields `2^h` routes whose pairwise intersections stay inside the trusted
//!   neighborhoods.
//! * [`faultsim`]: the redundant-channel failure model, its closed form and
//!   asymptotic approximation, receiver-side detection, and seeded Monte
//!   Carlo simulation at both channel and network level.
//!
//! Bit convention: bit `i` of a place-within-level is the coefficient of
//! `2^i`, and textual node literals print it rightmost, e.g. `(6,0110111)`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod faultsim;
pub mod routing;
pub mod topology;
pub mod trust;

pub use topology::{Butterfly, ButterflyParams, EdgeKind, GenericGraph, Graph, NodeId};
pub use trust::TrustRadius;

