//! Generalized Petersen graphs and the index arithmetic the colorers rely on.
//!
//! `GP(n, k)` has outer vertices `u_0..u_{n-1}`, inner vertices
//! `v_0..v_{n-1}`, outer edges `u_i u_{i+1}`, inner edges `v_i v_{i+k}` and
//! spokes `u_i v_i` (indices mod `n`). Writing `d = gcd(n, k)`, the inner
//! vertices split into `d` disjoint cycles `C^1..C^d` of length `n/d`
//! (single edges when `n = 2k`), and the outer cycle is `C^0`. Every other
//! quantity used here (`t`, `ell`, the double indices `v^i_r`, connector
//! edges) is a computed view over that structure.

use std::collections::BTreeMap;

use thiserror::Error;

/// Flat vertex id: outer `u_j` is `j`, inner `v_j` is `n + j`.
pub type VertexId = usize;
/// Index into [`GpGraph::edges`] (canonical sorted order).
pub type EdgeId = usize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("GP(n,k) requires n >= 3, got n = {0}")]
    TooSmall(usize),
    #[error("GP(n,k) requires k >= 1")]
    ZeroStep,
    #[error("GP(n,k) requires n >= 2k, got n = {n}, k = {k}")]
    StepTooLarge { n: usize, k: usize },
    #[error("index out of range: {0}")]
    IndexRange(String),
    #[error("connector queries require d >= 2, but gcd(n,k) = 1")]
    NoConnectors,
}

/// Structural category of an edge of `GP(n, k)`.
///
/// `Connector` is the sub-category of outer edges `u_{rd-1} u_{rd}`; every
/// connector lies on `C^0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeKind {
    Outer,
    Connector,
    /// Inner cycle `C^i`, `1 <= i <= d`.
    Inner(usize),
    /// Spoke `s^i_r` joining `v^i_r` to `u_{i-1+rk}`.
    Spoke { cycle: usize, slot: usize },
}

impl EdgeKind {
    /// True for both plain outer edges and connectors.
    pub fn on_outer_cycle(&self) -> bool {
        matches!(self, EdgeKind::Outer | EdgeKind::Connector)
    }

    pub fn is_spoke(&self) -> bool {
        matches!(self, EdgeKind::Spoke { .. })
    }
}

/// An edge with endpoints normalized so `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub kind: EdgeKind,
}

/// Minimal graph access used by the verifier, the exact solver and the
/// segment toolbox. Implemented by [`GpGraph`] and [`SimpleGraph`].
pub trait EdgeGraph {
    fn vertex_count(&self) -> usize;
    fn edge_count(&self) -> usize;
    fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId);
    /// Edge ids incident to `v`, in ascending order.
    fn incident_edges(&self, v: VertexId) -> &[EdgeId];

    fn other_endpoint(&self, e: EdgeId, v: VertexId) -> VertexId {
        let (a, b) = self.endpoints(e);
        if v == a {
            b
        } else {
            debug_assert_eq!(v, b);
            a
        }
    }
}

/// `GP(n, k)` with all derived index arithmetic precomputed.
///
/// Immutable after construction; safe to share across threads.
#[derive(Debug, Clone)]
pub struct GpGraph {
    n: usize,
    k: usize,
    d: usize,
    t: usize,
    ell: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<EdgeId>>,
    index: BTreeMap<(VertexId, VertexId), EdgeId>,
}

impl GpGraph {
    /// Builds `GP(n, k)`.
    ///
    /// Accepts every `n >= 3`, `1 <= k <= n/2`. Parallel inner edges in the
    /// `n = 2k` case are deduplicated, so each inner pair `{v_j, v_{j+k}}`
    /// yields one edge.
    pub fn build(n: usize, k: usize) -> Result<Self, GraphError> {
        if n < 3 {
            return Err(GraphError::TooSmall(n));
        }
        if k == 0 {
            return Err(GraphError::ZeroStep);
        }
        if n < 2 * k {
            return Err(GraphError::StepTooLarge { n, k });
        }

        let d = gcd(n, k);
        let m = n / d;
        // Minimum positive t with t*k = d (mod n); exists because d = gcd.
        let t = (1..=m)
            .find(|t| (t * k) % n == d)
            .expect("t*k = d (mod n) is solvable for t in 1..=n/d");
        let ell = (k * (m - 1)) % n;

        let mut keyed: BTreeMap<(VertexId, VertexId), EdgeKind> = BTreeMap::new();
        for j in 0..n {
            let kind = if (j + 1) % d == 0 {
                EdgeKind::Connector
            } else {
                EdgeKind::Outer
            };
            keyed.insert(norm(j, (j + 1) % n), kind);
        }
        for j in 0..n {
            let cycle = (j % d) + 1;
            keyed
                .entry(norm(n + j, n + (j + k) % n))
                .or_insert(EdgeKind::Inner(cycle));
        }
        for j in 0..n {
            let cycle = (j % d) + 1;
            let slot = (j / d * t) % m;
            keyed.insert(norm(j, n + j), EdgeKind::Spoke { cycle, slot });
        }

        let edges: Vec<Edge> = keyed
            .iter()
            .map(|(&(u, v), &kind)| Edge { u, v, kind })
            .collect();
        let mut index = BTreeMap::new();
        let mut adj = vec![Vec::new(); 2 * n];
        for (id, e) in edges.iter().enumerate() {
            index.insert((e.u, e.v), id);
            adj[e.u].push(id);
            adj[e.v].push(id);
        }

        Ok(GpGraph {
            n,
            k,
            d,
            t,
            ell,
            edges,
            adj,
            index,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `gcd(n, k)`: the number of inner cycles.
    pub fn d(&self) -> usize {
        self.d
    }

    /// Minimum positive `t` with `t*k = d (mod n)`.
    pub fn t(&self) -> usize {
        self.t
    }

    /// `k * (n/d - 1) mod n`: the outer index where spoke `s^1_{n/d-1}` lands.
    pub fn ell(&self) -> usize {
        self.ell
    }

    /// Inner cycle length `n/d` (2 means the inner "cycles" are single edges).
    pub fn cycle_len(&self) -> usize {
        self.n / self.d
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn kind(&self, e: EdgeId) -> EdgeKind {
        self.edges[e].kind
    }

    /// Outer vertex `u_j` (index taken mod n).
    pub fn outer_vertex(&self, j: usize) -> VertexId {
        j % self.n
    }

    /// Inner vertex `v_j` as a flat id (index taken mod n).
    pub fn inner_vertex_flat(&self, j: usize) -> VertexId {
        self.n + j % self.n
    }

    /// `v^i_r` as a flat id, for `1 <= i <= d`, `0 <= r < n/d`.
    pub fn inner_vertex(&self, i: usize, r: usize) -> VertexId {
        debug_assert!((1..=self.d).contains(&i));
        self.inner_vertex_flat(i - 1 + r % self.cycle_len() * self.k)
    }

    fn edge_between(&self, a: VertexId, b: VertexId) -> EdgeId {
        let key = norm(a, b);
        *self
            .index
            .get(&key)
            .unwrap_or_else(|| panic!("no edge between {a} and {b}"))
    }

    /// Outer edge `u_j u_{j+1}` (index taken mod n).
    pub fn outer_edge(&self, j: usize) -> EdgeId {
        let j = j % self.n;
        self.edge_between(j, (j + 1) % self.n)
    }

    /// Spoke `s^i_r = u_{i-1+rk} v^i_r`.
    pub fn spoke_edge(&self, i: usize, r: usize) -> EdgeId {
        let j = (i - 1 + r % self.cycle_len() * self.k) % self.n;
        self.edge_between(j, self.n + j)
    }

    /// Inner edge `v^i_r v^i_{r+1}`; for `n = 2k` both slots yield the
    /// single inner edge of `C^i`.
    pub fn inner_edge(&self, i: usize, r: usize) -> EdgeId {
        let a = self.inner_vertex(i, r);
        let b = self.inner_vertex(i, (r + 1) % self.cycle_len());
        self.edge_between(a, b)
    }

    /// The spoke incident to outer vertex `u_j`.
    pub fn spoke_at(&self, j: usize) -> EdgeId {
        let j = j % self.n;
        self.edge_between(j, self.n + j)
    }

    /// The double-index view of spoke `s^i_r`: `(v^i_r, u_{i-1+rk mod n})`.
    pub fn double_index(&self, i: usize, r: usize) -> Result<(VertexId, VertexId), GraphError> {
        if !(1..=self.d).contains(&i) {
            return Err(GraphError::IndexRange(format!(
                "cycle index i = {i} not in 1..={}",
                self.d
            )));
        }
        let m = self.cycle_len();
        if r >= m {
            return Err(GraphError::IndexRange(format!(
                "slot r = {r} not in 0..{m}"
            )));
        }
        let outer = (i - 1 + r * self.k) % self.n;
        Ok((self.inner_vertex(i, r), outer))
    }

    /// The connector `u_{rk-1} u_{rk}` together with its two adjacent
    /// spokes `s^1_r` and `s^d_{r-t}`.
    pub fn connector_for_spoke_pair(
        &self,
        r: usize,
    ) -> Result<(EdgeId, EdgeId, EdgeId), GraphError> {
        if self.d < 2 {
            return Err(GraphError::NoConnectors);
        }
        let m = self.cycle_len();
        if r >= m {
            return Err(GraphError::IndexRange(format!(
                "connector index r = {r} not in 0..{m}"
            )));
        }
        let pos = (r * self.k + self.n - 1) % self.n;
        let conn = self.outer_edge(pos);
        let s1 = self.spoke_edge(1, r);
        let sd = self.spoke_edge(self.d, (r + m - self.t) % m);
        Ok((conn, s1, sd))
    }

    /// Edge ids of `C^0` in cyclic order: entry `j` is `u_j u_{j+1}`.
    pub fn outer_cycle_edges(&self) -> Vec<EdgeId> {
        (0..self.n).map(|j| self.outer_edge(j)).collect()
    }

    /// Edge ids of `C^i` in cyclic order: entry `r` is `v^i_r v^i_{r+1}`.
    /// For `n = 2k` the single edge is returned once.
    pub fn inner_cycle_edges(&self, i: usize) -> Vec<EdgeId> {
        let m = self.cycle_len();
        if m == 2 {
            vec![self.inner_edge(i, 0)]
        } else {
            (0..m).map(|r| self.inner_edge(i, r)).collect()
        }
    }
}

impl EdgeGraph for GpGraph {
    fn vertex_count(&self) -> usize {
        2 * self.n
    }

    fn edge_count(&self) -> usize {
        self.edges.len()
    }

    fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        (self.edges[e].u, self.edges[e].v)
    }

    fn incident_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.adj[v]
    }
}

/// A small explicit graph; used for segment instances (paths, cycles) and
/// as the oracle substrate in tests.
#[derive(Debug, Clone)]
pub struct SimpleGraph {
    edges: Vec<(VertexId, VertexId)>,
    adj: Vec<Vec<EdgeId>>,
}

impl SimpleGraph {
    pub fn new(vertices: usize, edges: Vec<(VertexId, VertexId)>) -> Self {
        let mut adj = vec![Vec::new(); vertices];
        for (id, &(a, b)) in edges.iter().enumerate() {
            assert!(a < vertices && b < vertices && a != b);
            adj[a].push(id);
            adj[b].push(id);
        }
        SimpleGraph { edges, adj }
    }

    /// Path with `len` edges; edge `i` joins vertices `i` and `i+1`.
    pub fn path(len: usize) -> Self {
        Self::new(len + 1, (0..len).map(|i| (i, i + 1)).collect())
    }

    /// Cycle with `len` edges; edge `i` joins vertices `i` and `(i+1) % len`.
    pub fn cycle(len: usize) -> Self {
        assert!(len >= 3);
        Self::new(len, (0..len).map(|i| (i, (i + 1) % len)).collect())
    }
}

impl EdgeGraph for SimpleGraph {
    fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    fn edge_count(&self) -> usize {
        self.edges.len()
    }

    fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e]
    }

    fn incident_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.adj[v]
    }
}

fn norm(a: VertexId, b: VertexId) -> (VertexId, VertexId) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
