//! Simple and weighted undirected graphs.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::ratmath::{RatMatrix, Rational};

/// Simple undirected graph: no loops, no multi-edges. Edges are stored as
/// `(u, v)` with `u < v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: BTreeSet::new(),
        }
    }

    /// Panics on a loop or an out-of-range endpoint.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v, "loop at vertex {u}");
        assert!(u < self.n && v < self.n, "edge ({u},{v}) out of range for n = {}", self.n);
        self.edges.insert((u.min(v), u.max(v)));
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let adj = self.neighbors();
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == self.n
    }

    /// Proper 2-coloring with the lowest vertex of every component colored 0,
    /// or `None` if the graph has an odd cycle.
    pub fn two_coloring(&self) -> Option<Vec<u8>> {
        let adj = self.neighbors();
        let mut color: Vec<Option<u8>> = vec![None; self.n];
        for start in 0..self.n {
            if color[start].is_some() {
                continue;
            }
            color[start] = Some(0);
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                let cu = color[u].unwrap();
                for &v in &adj[u] {
                    match color[v] {
                        None => {
                            color[v] = Some(1 - cu);
                            queue.push_back(v);
                        }
                        Some(cv) if cv == cu => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(color.into_iter().map(Option::unwrap).collect())
    }

    pub fn is_bipartite(&self) -> bool {
        self.two_coloring().is_some()
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        Graph::from_edges(self.n, self.edges().map(|(u, v)| (perm[u], perm[v])))
    }

    /// Symmetric 0/1 adjacency matrix with zero diagonal.
    pub fn adjacency(&self) -> RatMatrix {
        let mut m = RatMatrix::zeros(self.n, self.n);
        for &(u, v) in &self.edges {
            m.set(u, v, Rational::one());
            m.set(v, u, Rational::one());
        }
        m
    }

    /// The graph of a symmetric 0/1 matrix with zero diagonal.
    pub fn from_adjacency(a: &RatMatrix) -> Result<Graph, NotAGraph> {
        if !a.is_square() {
            return Err(NotAGraph(format!("{}x{} matrix is not square", a.rows(), a.cols())));
        }
        let n = a.rows();
        let mut g = Graph::empty(n);
        for i in 0..n {
            if !a.get(i, i).is_zero() {
                return Err(NotAGraph(format!("nonzero diagonal entry at {i}")));
            }
            for j in i + 1..n {
                let x = a.get(i, j);
                if x != a.get(j, i) {
                    return Err(NotAGraph(format!("asymmetric at ({i},{j})")));
                }
                if x.is_one() {
                    g.add_edge(i, j);
                } else if !x.is_zero() {
                    return Err(NotAGraph(format!("entry {x} at ({i},{j}) is not 0/1")));
                }
            }
        }
        Ok(g)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("not a simple graph: {0}")]
pub struct NotAGraph(pub String);

/// Undirected graph with nonzero rational weights on edges and loops.
/// Keys are stored as `(u, v)` with `u <= v`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct WeightedGraph {
    n: usize,
    weights: BTreeMap<(usize, usize), Rational>,
}

impl WeightedGraph {
    pub fn empty(n: usize) -> Self {
        WeightedGraph {
            n,
            weights: BTreeMap::new(),
        }
    }

    /// Reads the upper triangle (diagonal included) of a symmetric matrix;
    /// zero entries are not edges.
    pub fn from_symmetric(m: &RatMatrix) -> Self {
        debug_assert!(m.is_symmetric());
        let n = m.rows();
        let mut weights = BTreeMap::new();
        for i in 0..n {
            for j in i..n {
                let w = m.get(i, j);
                if !w.is_zero() {
                    weights.insert((i, j), w.clone());
                }
            }
        }
        WeightedGraph { n, weights }
    }

    /// Setting a zero weight removes the edge.
    pub fn set_weight(&mut self, u: usize, v: usize, w: Rational) {
        let key = (u.min(v), u.max(v));
        if w.is_zero() {
            self.weights.remove(&key);
        } else {
            self.weights.insert(key, w);
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<&Rational> {
        self.weights.get(&(u.min(v), u.max(v)))
    }

    /// Entries sorted by `(u, v)`.
    pub fn weights(&self) -> impl Iterator<Item = ((usize, usize), &Rational)> + '_ {
        self.weights.iter().map(|(&k, w)| (k, w))
    }

    pub fn edge_count(&self) -> usize {
        self.weights.len()
    }

    pub fn has_loops(&self) -> bool {
        self.weights.keys().any(|&(u, v)| u == v)
    }

    pub fn adjacency(&self) -> RatMatrix {
        let mut m = RatMatrix::zeros(self.n, self.n);
        for (&(u, v), w) in &self.weights {
            m.set(u, v, w.clone());
            m.set(v, u, w.clone());
        }
        m
    }

    /// Unweighted skeleton, `None` if any loop is present.
    pub fn support(&self) -> Option<Graph> {
        if self.has_loops() {
            return None;
        }
        Some(Graph::from_edges(self.n, self.weights.keys().copied()))
    }

    pub fn is_connected(&self) -> bool {
        Graph::from_edges(
            self.n,
            self.weights.keys().copied().filter(|&(u, v)| u != v),
        )
        .is_connected()
    }
}

/// Whether two simple graphs are isomorphic.
///
/// Backtracking over vertex assignments, pruned by degree and by the sorted
/// neighbor-degree signature of each vertex; every partial map is checked
/// against all previously mapped vertices. Intended for graphs up to a few
/// dozen vertices.
pub fn is_isomorphic(g: &Graph, h: &Graph) -> bool {
    if g.order() != h.order() || g.size() != h.size() {
        return false;
    }
    let n = g.order();
    let signature = |graph: &Graph| -> Vec<(usize, Vec<usize>)> {
        let deg = graph.degrees();
        graph
            .neighbors()
            .iter()
            .enumerate()
            .map(|(v, nb)| {
                let mut s: Vec<usize> = nb.iter().map(|&u| deg[u]).collect();
                s.sort_unstable();
                (deg[v], s)
            })
            .collect()
    };
    let sig_g = signature(g);
    let sig_h = signature(h);
    let mut sorted_g = sig_g.clone();
    let mut sorted_h = sig_h.clone();
    sorted_g.sort();
    sorted_h.sort();
    if sorted_g != sorted_h {
        return false;
    }

    // Map g's vertices in an order that keeps the mapped set connected where
    // possible so adjacency checks prune early.
    let adj_g = g.neighbors();
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    while order.len() < n {
        let start = (0..n)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| sig_g[v].0)
            .unwrap();
        placed[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &v in &adj_g[u] {
                if !placed[v] {
                    placed[v] = true;
                    queue.push_back(v);
                }
            }
        }
    }

    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn extend(
        depth: usize,
        order: &[usize],
        g: &Graph,
        h: &Graph,
        sig_g: &[(usize, Vec<usize>)],
        sig_h: &[(usize, Vec<usize>)],
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let v = order[depth];
        for w in 0..h.order() {
            if used[w] || sig_g[v] != sig_h[w] {
                continue;
            }
            let consistent = order[..depth]
                .iter()
                .all(|&u| g.has_edge(u, v) == h.has_edge(map[u], w));
            if !consistent {
                continue;
            }
            map[v] = w;
            used[w] = true;
            if extend(depth + 1, order, g, h, sig_g, sig_h, map, used) {
                return true;
            }
            used[w] = false;
            map[v] = usize::MAX;
        }
        false
    }
    extend(0, &order, g, h, &sig_g, &sig_h, &mut map, &mut used)
}
