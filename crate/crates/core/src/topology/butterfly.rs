use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::{Graph, TopologyError};

/// Largest supported dimension. Places are stored in a `u32` and the node
/// count `m * 2^m` must stay addressable.
pub const MAX_DIMENSION: u32 = 24;

/// Dimension of a wrap-around butterfly, `2 <= m <= MAX_DIMENSION`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ButterflyParams {
    m: u32,
}

impl ButterflyParams {
    pub fn new(m: u32) -> Result<Self, TopologyError> {
        if !(2..=MAX_DIMENSION).contains(&m) {
            return Err(TopologyError::DimensionOutOfRange { m });
        }
        Ok(Self { m })
    }

    pub fn m(self) -> u32 {
        self.m
    }
}

/// A butterfly vertex: a level in `0..m` and an `m`-bit place-within-level.
///
/// A `NodeId` is only meaningful relative to a [`Butterfly`]; use
/// [`Butterfly::node`] to build a checked one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId {
    pub level: u32,
    pub place: u32,
}

impl NodeId {
    pub const fn new(level: u32, place: u32) -> Self {
        Self { level, place }
    }

    /// Bit `i` of the place (coefficient of `2^i`).
    pub fn bit(self, i: u32) -> bool {
        (self.place >> i) & 1 == 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    /// `(l, z) -> (l+1, z)`
    Down,
    /// `(l, z) -> (l+1, z xor 1_l)`
    DownRight,
}

/// The directed wrap-around butterfly `WBF(m)`.
///
/// Adjacency is computed on demand. The [`Graph`] impl exposes the
/// undirected view (out- and in-neighbors), which is what distances and
/// trust are defined on; routing only ever follows directed edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Butterfly {
    params: ButterflyParams,
}

impl Butterfly {
    pub fn new(params: ButterflyParams) -> Self {
        Self { params }
    }

    /// Shorthand for `Butterfly::new(ButterflyParams::new(m)?)`.
    pub fn with_dimension(m: u32) -> Result<Self, TopologyError> {
        ButterflyParams::new(m).map(Self::new)
    }

    pub fn params(&self) -> ButterflyParams {
        self.params
    }

    pub fn m(&self) -> u32 {
        self.params.m
    }

    pub fn places(&self) -> u32 {
        1 << self.m()
    }

    pub fn place_mask(&self) -> u32 {
        self.places() - 1
    }

    /// `m * 2^m`
    pub fn node_total(&self) -> usize {
        self.m() as usize * self.places() as usize
    }

    /// Directed edge count, two per node.
    pub fn edge_total(&self) -> usize {
        2 * self.node_total()
    }

    pub fn node(&self, level: u32, place: u64) -> Result<NodeId, TopologyError> {
        if level >= self.m() || place >= u64::from(self.places()) {
            return Err(TopologyError::NodeOutOfRange { level, place, m: self.m() });
        }
        Ok(NodeId::new(level, place as u32))
    }

    pub fn contains(&self, u: NodeId) -> bool {
        u.level < self.m() && u.place < self.places()
    }

    pub fn check(&self, u: NodeId) -> Result<NodeId, TopologyError> {
        self.node(u.level, u64::from(u.place))
    }

    pub fn index_of(&self, u: NodeId) -> usize {
        debug_assert!(self.contains(u));
        u.level as usize * self.places() as usize + u.place as usize
    }

    pub fn node_at(&self, index: usize) -> NodeId {
        let p = self.places() as usize;
        NodeId::new((index / p) as u32, (index % p) as u32)
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.node_total()).map(move |i| self.node_at(i))
    }

    fn next_level(&self, l: u32) -> u32 {
        if l + 1 == self.m() {
            0
        } else {
            l + 1
        }
    }

    fn prev_level(&self, l: u32) -> u32 {
        if l == 0 {
            self.m() - 1
        } else {
            l - 1
        }
    }

    /// `(down, downright)` successors of `u`.
    pub fn out_neighbors(&self, u: NodeId) -> (NodeId, NodeId) {
        let l = self.next_level(u.level);
        (NodeId::new(l, u.place), NodeId::new(l, u.place ^ (1 << u.level)))
    }

    /// `(down, downright)` predecessors of `u`, i.e. the nodes whose down
    /// (resp. down-right) edge ends at `u`.
    pub fn in_neighbors(&self, u: NodeId) -> (NodeId, NodeId) {
        let l = self.prev_level(u.level);
        (NodeId::new(l, u.place), NodeId::new(l, u.place ^ (1 << l)))
    }

    pub fn follow(&self, u: NodeId, kind: EdgeKind) -> NodeId {
        let (down, right) = self.out_neighbors(u);
        match kind {
            EdgeKind::Down => down,
            EdgeKind::DownRight => right,
        }
    }

    /// Kind of the directed edge `a -> b`, if there is one. On `WBF(2)`
    /// no pair is joined by both kinds, so the answer is unique.
    pub fn edge_kind(&self, a: NodeId, b: NodeId) -> Option<EdgeKind> {
        if !self.contains(a) || !self.contains(b) {
            return None;
        }
        let (down, right) = self.out_neighbors(a);
        if b == down {
            Some(EdgeKind::Down)
        } else if b == right {
            Some(EdgeKind::DownRight)
        } else {
            None
        }
    }

    /// Distinct neighbors of `u` in the undirected view, sorted.
    pub fn undirected_neighbors(&self, u: NodeId) -> Vec<NodeId> {
        let (a, b) = self.out_neighbors(u);
        let (c, d) = self.in_neighbors(u);
        let mut v = alloc::vec![a, b, c, d];
        v.sort_unstable();
        v.dedup();
        v
    }

    /// All directed edges in index order of their tail.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, EdgeKind)> + '_ {
        self.nodes().flat_map(move |u| {
            let (down, right) = self.out_neighbors(u);
            [(u, down, EdgeKind::Down), (u, right, EdgeKind::DownRight)]
        })
    }

    /// Textual form `(l,z)` with `z` as an `m`-digit binary literal, bit 0
    /// rightmost.
    pub fn label_of(&self, u: NodeId) -> NodeLabel {
        NodeLabel { node: u, m: self.m() }
    }

    /// Parses `(l,z)` (parentheses and spaces optional) where `z` is an
    /// `m`-digit binary literal with bit 0 rightmost.
    pub fn parse_node(&self, input: &str) -> Result<NodeId, TopologyError> {
        let bad = || TopologyError::BadNodeLiteral { input: String::from(input) };
        let s = input.trim();
        let s = s.strip_prefix('(').map(|r| r.strip_suffix(')')).unwrap_or(Some(s)).ok_or_else(bad)?;
        let (level, bits) = s.split_once(',').ok_or_else(bad)?;
        let level: u32 = level.trim().parse().map_err(|_| bad())?;
        let bits = bits.trim();
        if bits.len() != self.m() as usize || !bits.bytes().all(|c| c == b'0' || c == b'1') {
            return Err(bad());
        }
        let place = u64::from_str_radix(bits, 2).map_err(|_| bad())?;
        self.node(level, place)
    }

    /// Relabels the graph so that `v` becomes `(0, 0...0)` and returns the
    /// image of `w` together with the relabelling.
    pub fn canonicalize(&self, v: NodeId, w: NodeId) -> (NodeId, Automorphism) {
        let a = Automorphism::sending_to_origin(self.m(), v);
        (a.apply(w), a)
    }
}

impl Graph for Butterfly {
    fn node_count(&self) -> usize {
        self.node_total()
    }

    fn for_each_neighbor<F: FnMut(usize)>(&self, u: usize, mut f: F) {
        let u = self.node_at(u);
        let (a, b) = self.out_neighbors(u);
        let (c, d) = self.in_neighbors(u);
        for x in [a, b, c, d] {
            f(self.index_of(x));
        }
    }

    fn label(&self, u: usize) -> String {
        format!("{}", self.label_of(self.node_at(u)))
    }
}

/// Display adaptor for a butterfly node.
#[derive(Debug, Clone, Copy)]
pub struct NodeLabel {
    node: NodeId,
    m: u32,
}

impl fmt::Display for NodeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{:0width$b})", self.node.level, self.node.place, width = self.m as usize)
    }
}

/// Butterfly automorphism composed of an XOR of every place with a fixed
/// mask followed by a level shift with the matching cyclic rotation of bit
/// indices. Both parts preserve edges and their kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Automorphism {
    m: u32,
    shift: u32,
    mask: u32,
}

impl Automorphism {
    pub fn identity(m: u32) -> Self {
        Self { m, shift: 0, mask: 0 }
    }

    /// The automorphism that sends `v` to `(0, 0...0)`.
    pub fn sending_to_origin(m: u32, v: NodeId) -> Self {
        Self { m, shift: v.level, mask: v.place }
    }

    pub fn is_identity(&self) -> bool {
        self.shift == 0 && self.mask == 0
    }

    fn rotate_down(&self, p: u32, k: u32) -> u32 {
        // bit i moves to bit (i - k) mod m
        if k == 0 {
            return p;
        }
        let p = u64::from(p);
        let mask = (1u64 << self.m) - 1;
        (((p >> k) | (p << (self.m - k))) & mask) as u32
    }

    fn rotate_up(&self, p: u32, k: u32) -> u32 {
        if k == 0 {
            p
        } else {
            self.rotate_down(p, self.m - k)
        }
    }

    /// Original frame -> canonical frame.
    pub fn apply(&self, u: NodeId) -> NodeId {
        let level = (u.level + self.m - self.shift) % self.m;
        NodeId::new(level, self.rotate_down(u.place ^ self.mask, self.shift))
    }

    /// Canonical frame -> original frame.
    pub fn invert(&self, u: NodeId) -> NodeId {
        let level = (u.level + self.shift) % self.m;
        NodeId::new(level, self.rotate_up(u.place, self.shift) ^ self.mask)
    }
}
