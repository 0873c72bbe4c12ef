use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use super::{Graph, TopologyError};

/// Simple undirected graph with opaque string labels mapped to dense ids
/// in insertion order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GenericGraph {
    labels: Vec<String>,
    index: BTreeMap<String, usize>,
    adjacency: Vec<Vec<usize>>,
}

impl GenericGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Id of `label`, inserting it as an isolated node if it is new.
    pub fn add_node(&mut self, label: &str) -> usize {
        if let Some(&i) = self.index.get(label) {
            return i;
        }
        let i = self.labels.len();
        self.labels.push(String::from(label));
        self.index.insert(String::from(label), i);
        self.adjacency.push(Vec::new());
        i
    }

    /// Adds the undirected edge `{a, b}`. Returns `false` when it was
    /// already present.
    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<bool, TopologyError> {
        let n = self.labels.len();
        for x in [a, b] {
            if x >= n {
                return Err(TopologyError::IndexOutOfRange { index: x, node_count: n });
            }
        }
        if a == b {
            return Err(TopologyError::SelfLoop { label: self.labels[a].clone() });
        }
        match self.adjacency[a].binary_search(&b) {
            Ok(_) => Ok(false),
            Err(pos) => {
                self.adjacency[a].insert(pos, b);
                let pos = self.adjacency[b].binary_search(&a).unwrap_err();
                self.adjacency[b].insert(pos, a);
                Ok(true)
            }
        }
    }

    pub fn add_edge_by_label(&mut self, a: &str, b: &str) -> Result<bool, TopologyError> {
        if a == b {
            return Err(TopologyError::SelfLoop { label: String::from(a) });
        }
        let (a, b) = (self.add_node(a), self.add_node(b));
        self.add_edge(a, b)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn label_str(&self, u: usize) -> &str {
        &self.labels[u]
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adjacency[u]
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Edges `(a, b)` with `a < b`, in id order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(a, ns)| ns.iter().copied().filter(move |&b| a < b).map(move |b| (a, b)))
    }
}

impl Graph for GenericGraph {
    fn node_count(&self) -> usize {
        self.labels.len()
    }

    fn for_each_neighbor<F: FnMut(usize)>(&self, u: usize, f: F) {
        self.adjacency[u].iter().copied().for_each(f);
    }

    fn label(&self, u: usize) -> String {
        self.labels[u].clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_edges_collapse() {
        let mut g = GenericGraph::new();
        assert!(g.add_edge_by_label("a", "b").unwrap());
        assert!(!g.add_edge_by_label("b", "a").unwrap());
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn self_loop_rejected() {
        let mut g = GenericGraph::new();
        assert_eq!(
            g.add_edge_by_label("a", "a"),
            Err(TopologyError::SelfLoop { label: String::from("a") })
        );
        let a = g.add_node("a");
        assert!(g.add_edge(a, a).is_err());
        assert!(g.add_edge(a, 9).is_err());
    }

    #[test]
    fn ids_follow_insertion_order() {
        let mut g = GenericGraph::new();
        g.add_edge_by_label("z", "y").unwrap();
        g.add_edge_by_label("y", "x").unwrap();
        assert_eq!(g.index_of("z"), Some(0));
        assert_eq!(g.index_of("x"), Some(2));
        assert_eq!(g.neighbors(1), &[0, 2]);
        assert_eq!(g.edges().collect::<Vec<_>>(), alloc::vec![(0, 1), (1, 2)]);
    }
}
