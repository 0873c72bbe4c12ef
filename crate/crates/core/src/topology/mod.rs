//! Graph construction and queries.
//!
//! Every graph is addressed through dense `usize` indices by the [`Graph`]
//! trait, which is all the distance and flow code needs. The butterfly
//! computes its adjacency arithmetically and never stores edge lists.

mod butterfly;
mod generic;

use alloc::collections::VecDeque;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

pub use butterfly::{Automorphism, Butterfly, ButterflyParams, EdgeKind, NodeId, NodeLabel, MAX_DIMENSION};
pub use generic::GenericGraph;

/// Marker for an unreachable node in a distance table.
pub const UNREACHABLE: u32 = u32::MAX;

/// Undirected view of a graph over dense node indices `0..node_count()`.
///
/// `for_each_neighbor` may report a neighbor more than once (the
/// butterfly of dimension 2 has coinciding edges); callers must tolerate
/// repeats.
pub trait Graph {
    fn node_count(&self) -> usize;

    fn for_each_neighbor<F: FnMut(usize)>(&self, u: usize, f: F);

    /// Short human-readable name of a node, used in reports.
    fn label(&self, u: usize) -> String;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TopologyError {
    DimensionOutOfRange { m: u32 },
    NodeOutOfRange { level: u32, place: u64, m: u32 },
    IndexOutOfRange { index: usize, node_count: usize },
    SelfLoop { label: String },
    BadNodeLiteral { input: String },
}

impl fmt::Display for TopologyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TopologyError::DimensionOutOfRange { m } => {
                write!(f, "butterfly dimension m={m} is outside 2..={MAX_DIMENSION}")
            }
            TopologyError::NodeOutOfRange { level, place, m } => write!(
                f,
                "node (level {level}, place {place:#b}) is not a vertex of WBF({m})"
            ),
            TopologyError::IndexOutOfRange { index, node_count } => {
                write!(f, "node index {index} out of range (graph has {node_count} nodes)")
            }
            TopologyError::SelfLoop { label } => write!(f, "self-loop on node `{label}`"),
            TopologyError::BadNodeLiteral { input } => {
                write!(f, "cannot parse node literal `{input}`, expected `(level,binary)`")
            }
        }
    }
}

impl core::error::Error for TopologyError {}

/// Breadth-first search distances from `source` on the undirected view.
/// Unreachable nodes hold [`UNREACHABLE`].
pub fn bfs_distances<G: Graph>(g: &G, source: usize) -> Vec<u32> {
    bfs_tree(g, source).0
}

/// Distances plus a BFS parent for every reached node (`usize::MAX` for the
/// source and unreached nodes). Following parents from any node walks a
/// shortest path back to `source`.
pub fn bfs_tree<G: Graph>(g: &G, source: usize) -> (Vec<u32>, Vec<usize>) {
    let n = g.node_count();
    let mut dist = vec![UNREACHABLE; n];
    let mut parent = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    dist[source] = 0;
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        let du = dist[u];
        g.for_each_neighbor(u, |x| {
            if dist[x] == UNREACHABLE {
                dist[x] = du + 1;
                parent[x] = u;
                queue.push_back(x);
            }
        });
    }
    (dist, parent)
}

/// Exact hop distance between `u` and `v`, or `None` when they lie in
/// different components.
pub fn distance<G: Graph>(g: &G, u: usize, v: usize) -> Option<u32> {
    if u == v {
        return Some(0);
    }
    let d = bfs_distances(g, u)[v];
    (d != UNREACHABLE).then_some(d)
}

/// Component id for every node; ids are assigned in order of the smallest
/// node index in each component.
pub fn connected_components<G: Graph>(g: &G) -> Vec<usize> {
    let n = g.node_count();
    let mut comp = vec![usize::MAX; n];
    let mut next = 0;
    let mut stack = Vec::new();
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        comp[start] = next;
        stack.push(start);
        while let Some(u) = stack.pop() {
            g.for_each_neighbor(u, |x| {
                if comp[x] == usize::MAX {
                    comp[x] = next;
                    stack.push(x);
                }
            });
        }
        next += 1;
    }
    comp
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> GenericGraph {
        let mut g = GenericGraph::new();
        for i in 1..n {
            g.add_edge_by_label(&alloc::format!("n{}", i - 1), &alloc::format!("n{i}")).unwrap();
        }
        g
    }

    #[test]
    fn path_distances() {
        let g = path(5);
        let d = bfs_distances(&g, 0);
        assert_eq!(d, vec![0, 1, 2, 3, 4]);
        assert_eq!(distance(&g, 4, 1), Some(3));
        assert_eq!(distance(&g, 2, 2), Some(0));
    }

    #[test]
    fn disconnected_pair() {
        let mut g = path(3);
        g.add_edge_by_label("x", "y").unwrap();
        let x = g.index_of("x").unwrap();
        assert_eq!(distance(&g, 0, x), None);
        let comp = connected_components(&g);
        assert_eq!(comp[0], comp[2]);
        assert_ne!(comp[0], comp[x]);
        assert_eq!(comp[x], comp[g.index_of("y").unwrap()]);
    }

    #[test]
    fn bfs_parents_walk_back_to_source() {
        let b = Butterfly::new(ButterflyParams::new(4).unwrap());
        let (dist, parent) = bfs_tree(&b, 0);
        for u in 1..b.node_count() {
            let mut steps = 0;
            let mut x = u;
            while x != 0 {
                x = parent[x];
                steps += 1;
            }
            assert_eq!(steps, dist[u]);
        }
    }
}
