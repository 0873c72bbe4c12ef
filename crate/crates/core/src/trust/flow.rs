//! Unit-capacity vertex max-flow on the node-split network.
//!
//! Each free node `u` becomes `u_in -> u_out` with capacity 1; every
//! undirected edge `{a, b}` becomes `a_out -> b_in` and `b_out -> a_in` with
//! unbounded capacity. Source-side nodes collapse into one super-source and
//! sink-side nodes into one super-sink. Augmentation uses shortest
//! (BFS) augmenting paths.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::topology::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Source,
    Sink,
    Free,
}

/// Outcome of a vertex max-flow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexCut {
    /// Max-flow value, equal to `cut.len()`.
    pub value: u32,
    /// Free nodes whose removal separates the two sides. Taken from the
    /// source-side reachability frontier of the final residual graph.
    pub cut: Vec<usize>,
    /// One walk per unit of flow, `[a, u_1, .., u_k, b]` with `a` on the
    /// source side, `b` on the sink side and every `u_i` free. Walks share
    /// no free node.
    pub segments: Vec<Vec<usize>>,
}

const INF: u32 = u32::MAX / 2;
const SOURCE: usize = 0;
const SINK: usize = 1;
const NO_EDGE: usize = usize::MAX;

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    cap: u32,
    rev: usize,
    forward: bool,
    // original edge endpoints for edge arcs, NO_EDGE for split arcs
    from_node: usize,
    to_node: usize,
}

struct Network {
    arcs: Vec<Vec<Arc>>,
}

impl Network {
    fn add_arc(&mut self, a: usize, b: usize, cap: u32, from_node: usize, to_node: usize) {
        let ra = self.arcs[b].len();
        let rb = self.arcs[a].len();
        self.arcs[a].push(Arc { to: b, cap, rev: ra, forward: true, from_node, to_node });
        self.arcs[b].push(Arc { to: a, cap: 0, rev: rb, forward: false, from_node, to_node });
    }

    fn residual_bfs(&self) -> Vec<(usize, usize)> {
        // parent (vertex, arc index) per vertex; (NO_EDGE, _) when unreached
        let mut parent = vec![(NO_EDGE, 0); self.arcs.len()];
        parent[SOURCE] = (SOURCE, 0);
        let mut queue = VecDeque::from([SOURCE]);
        while let Some(x) = queue.pop_front() {
            if x == SINK {
                break;
            }
            for (i, arc) in self.arcs[x].iter().enumerate() {
                if arc.cap > 0 && parent[arc.to].0 == NO_EDGE {
                    parent[arc.to] = (x, i);
                    queue.push_back(arc.to);
                }
            }
        }
        parent
    }
}

/// Vertex max-flow between the `Source` and `Sink` sides of `side`.
///
/// Edges joining the two sides directly are ignored; callers that care
/// about them must detect them first.
pub fn separate<G: Graph>(g: &G, side: &[Side]) -> VertexCut {
    let n = g.node_count();
    assert_eq!(side.len(), n);
    let mut free_slot = vec![NO_EDGE; n];
    let mut free = Vec::new();
    for u in 0..n {
        if side[u] == Side::Free {
            free_slot[u] = free.len();
            free.push(u);
        }
    }
    let in_id = |u: usize| 2 + 2 * free_slot[u];
    let out_id = |u: usize| 3 + 2 * free_slot[u];
    let mut net = Network { arcs: vec![Vec::new(); 2 + 2 * free.len()] };
    for &u in &free {
        net.add_arc(in_id(u), out_id(u), 1, NO_EDGE, NO_EDGE);
    }
    for a in 0..n {
        let tail = match side[a] {
            Side::Source => SOURCE,
            Side::Sink => continue,
            Side::Free => out_id(a),
        };
        g.for_each_neighbor(a, |b| {
            let head = match side[b] {
                Side::Source => return,
                Side::Sink => {
                    if side[a] == Side::Source {
                        return;
                    }
                    SINK
                }
                Side::Free => in_id(b),
            };
            net.add_arc(tail, head, INF, a, b);
        });
    }

    let mut value = 0u32;
    loop {
        let parent = net.residual_bfs();
        if parent[SINK].0 == NO_EDGE {
            break;
        }
        let mut bottleneck = INF;
        let mut x = SINK;
        while x != SOURCE {
            let (p, i) = parent[x];
            bottleneck = bottleneck.min(net.arcs[p][i].cap);
            x = p;
        }
        let mut x = SINK;
        while x != SOURCE {
            let (p, i) = parent[x];
            let rev = net.arcs[p][i].rev;
            net.arcs[p][i].cap -= bottleneck;
            net.arcs[x][rev].cap += bottleneck;
            x = p;
        }
        value += bottleneck;
    }

    let reach = net.residual_bfs();
    let reached = |x: usize| reach[x].0 != NO_EDGE;
    let cut: Vec<usize> = free.iter().copied().filter(|&u| reached(in_id(u)) && !reached(out_id(u))).collect();

    // Flow decomposition: flow on a forward arc is the capacity now held by
    // its reverse arc.
    let mut flow: Vec<Vec<u32>> = net
        .arcs
        .iter()
        .map(|arcs| arcs.iter().map(|a| if a.forward { net.arcs[a.to][a.rev].cap } else { 0 }).collect())
        .collect();
    let mut segments = Vec::with_capacity(value as usize);
    for _ in 0..value {
        let mut walk = Vec::new();
        let mut x = SOURCE;
        while x != SINK {
            let i = flow[x].iter().position(|&f| f > 0).expect("flow conservation");
            flow[x][i] -= 1;
            let arc = &net.arcs[x][i];
            if arc.from_node != NO_EDGE {
                if walk.is_empty() {
                    walk.push(arc.from_node);
                }
                walk.push(arc.to_node);
            }
            x = arc.to;
        }
        segments.push(walk);
    }

    debug_assert_eq!(cut.len(), value as usize);
    VertexCut { value, cut, segments }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::GenericGraph;

    fn graph(edges: &[(&str, &str)]) -> GenericGraph {
        let mut g = GenericGraph::new();
        for (a, b) in edges {
            g.add_edge_by_label(a, b).unwrap();
        }
        g
    }

    fn sides(g: &GenericGraph, src: &[&str], dst: &[&str]) -> Vec<Side> {
        let mut s = vec![Side::Free; g.node_count()];
        for l in src {
            s[g.index_of(l).unwrap()] = Side::Source;
        }
        for l in dst {
            s[g.index_of(l).unwrap()] = Side::Sink;
        }
        s
    }

    #[test]
    fn path_has_unit_flow() {
        let g = graph(&[("v", "a"), ("a", "b"), ("b", "w")]);
        let r = separate(&g, &sides(&g, &["v"], &["w"]));
        assert_eq!(r.value, 1);
        assert_eq!(r.cut.len(), 1);
        assert_eq!(r.segments, vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn theta_graph_has_three_paths() {
        let g = graph(&[("s", "a"), ("a", "t"), ("s", "b"), ("b", "c"), ("c", "t"), ("s", "d"), ("d", "t")]);
        let r = separate(&g, &sides(&g, &["s"], &["t"]));
        assert_eq!(r.value, 3);
        assert_eq!(r.segments.len(), 3);
    }

    #[test]
    fn shared_middle_vertex_limits_flow() {
        // two routes forced through x
        let g = graph(&[("s", "a"), ("s", "b"), ("a", "x"), ("b", "x"), ("x", "c"), ("x", "d"), ("c", "t"), ("d", "t")]);
        let r = separate(&g, &sides(&g, &["s"], &["t"]));
        assert_eq!(r.value, 1);
        assert_eq!(r.cut, vec![g.index_of("x").unwrap()]);
    }

    #[test]
    fn no_free_vertices() {
        let g = graph(&[("s", "x")]);
        let r = separate(&g, &sides(&g, &["s"], &[]));
        assert_eq!(r.value, 0);
        assert!(r.cut.is_empty());
    }
}
