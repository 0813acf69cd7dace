//! Primal/dual/incidence graph extraction and exact tree-depth with
//! witness forests. Graphs are simple and loopless; zero rows and columns of
//! a matrix produce isolated vertices and are never dropped.

use crate::matrix::RatMatrix;
use num_traits::Zero;
use std::collections::{BTreeSet, HashMap};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("forest vertex set does not match graph vertex set")]
    VertexMismatch,
    #[error("parse error: {0}")]
    Parse(String),
}

/// Simple loopless graph on vertices 0..n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { n, edges: BTreeSet::new() }
    }

    pub fn with_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u < self.n && v < self.n && u != v, "edge endpoints must be distinct vertices");
        self.edges.insert((u.min(v), u.max(v)));
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn neighbors(&self, u: usize) -> Vec<usize> {
        (0..self.n).filter(|&v| v != u && self.has_edge(u, v)).collect()
    }

    /// Connected components as sorted vertex lists.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            let mut stack = vec![s];
            let mut comp = Vec::new();
            seen[s] = true;
            while let Some(u) = stack.pop() {
                comp.push(u);
                for v in self.neighbors(u) {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// .gr text format: "n m" then m lines "u v".
    pub fn parse_gr(text: &str) -> Result<Graph, GraphError> {
        let mut toks = text.split_whitespace();
        let n: usize = toks
            .next()
            .ok_or_else(|| GraphError::Parse("missing vertex count".into()))?
            .parse()
            .map_err(|e| GraphError::Parse(format!("bad vertex count: {e}")))?;
        let m: usize = toks
            .next()
            .ok_or_else(|| GraphError::Parse("missing edge count".into()))?
            .parse()
            .map_err(|e| GraphError::Parse(format!("bad edge count: {e}")))?;
        let mut g = Graph::new(n);
        for _ in 0..m {
            let u: usize = toks
                .next()
                .ok_or_else(|| GraphError::Parse("too few edges".into()))?
                .parse()
                .map_err(|e| GraphError::Parse(format!("bad endpoint: {e}")))?;
            let v: usize = toks
                .next()
                .ok_or_else(|| GraphError::Parse("too few edges".into()))?
                .parse()
                .map_err(|e| GraphError::Parse(format!("bad endpoint: {e}")))?;
            if u >= n || v >= n || u == v {
                return Err(GraphError::Parse(format!("bad edge {u} {v}")));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    pub fn to_gr(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for (u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

/// Rooted forest over the vertices of a graph; parent map, roots have no
/// parent. Height counts vertices on a root-to-leaf path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedForest {
    parent: Vec<Option<usize>>,
}

impl RootedForest {
    pub fn new(parent: Vec<Option<usize>>) -> Self {
        RootedForest { parent }
    }

    pub fn n(&self) -> usize {
        self.parent.len()
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn depth_of(&self, v: usize) -> usize {
        let mut d = 1;
        let mut u = v;
        while let Some(p) = self.parent[u] {
            u = p;
            d += 1;
        }
        d
    }

    pub fn height(&self) -> usize {
        (0..self.parent.len()).map(|v| self.depth_of(v)).max().unwrap_or(0)
    }

    /// True iff u is an ancestor of v (or u == v).
    pub fn is_ancestor(&self, u: usize, v: usize) -> bool {
        let mut w = v;
        loop {
            if w == u {
                return true;
            }
            match self.parent[w] {
                Some(p) => w = p,
                None => return false,
            }
        }
    }
}

pub fn primal_graph(a: &RatMatrix) -> Graph {
    let mut g = Graph::new(a.cols());
    for i in 0..a.rows() {
        let support: Vec<usize> = (0..a.cols()).filter(|&j| !a.at(i, j).is_zero()).collect();
        for x in 0..support.len() {
            for y in x + 1..support.len() {
                g.add_edge(support[x], support[y]);
            }
        }
    }
    g
}

pub fn dual_graph(a: &RatMatrix) -> Graph {
    let mut g = Graph::new(a.rows());
    for j in 0..a.cols() {
        let support: Vec<usize> = (0..a.rows()).filter(|&i| !a.at(i, j).is_zero()).collect();
        for x in 0..support.len() {
            for y in x + 1..support.len() {
                g.add_edge(support[x], support[y]);
            }
        }
    }
    g
}

/// Bipartite row/column incidence graph: vertices 0..rows are rows,
/// rows..rows+cols are columns.
pub fn incidence_graph(a: &RatMatrix) -> Graph {
    let mut g = Graph::new(a.rows() + a.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            if !a.at(i, j).is_zero() {
                g.add_edge(i, a.rows() + j);
            }
        }
    }
    g
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeDepth {
    Exact(usize, RootedForest),
    ExceedsBudget(usize),
}

impl TreeDepth {
    pub fn value(&self) -> Option<usize> {
        match self {
            TreeDepth::Exact(v, _) => Some(*v),
            TreeDepth::ExceedsBudget(_) => None,
        }
    }

    pub fn unwrap(self) -> (usize, RootedForest) {
        match self {
            TreeDepth::Exact(v, f) => (v, f),
            TreeDepth::ExceedsBudget(b) => panic!("tree-depth exceeds budget {b}"),
        }
    }
}

/// Exact tree-depth with a witness elimination forest. Memoized recursion
/// over vertex subsets (bitmask keys); intended for graphs up to ~20 vertices.
pub fn tree_depth(g: &Graph, budget: Option<usize>) -> TreeDepth {
    assert!(g.n() <= 63, "tree-depth search is limited to 63 vertices");
    let mut solver = TdSolver {
        adj: adjacency_masks(g),
        memo: HashMap::new(),
    };
    let full: u64 = if g.n() == 0 { 0 } else { (1u64 << g.n()) - 1 };
    let bound = budget.unwrap_or(g.n().max(1));
    match solver.solve(full, bound) {
        Some((v, elim)) => {
            let forest = elimination_to_forest(g, &elim);
            debug_assert_eq!(forest.height(), v.max(if g.n() == 0 { 0 } else { 1 }));
            TreeDepth::Exact(v, forest)
        }
        None => TreeDepth::ExceedsBudget(budget.unwrap_or(usize::MAX)),
    }
}

fn adjacency_masks(g: &Graph) -> Vec<u64> {
    let mut adj = vec![0u64; g.n()];
    for (u, v) in g.edges() {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    adj
}

struct TdSolver {
    adj: Vec<u64>,
    // subset -> (exact value, elimination order) or proven lower bound
    memo: HashMap<u64, MemoEntry>,
}

enum MemoEntry {
    Exact(usize, Vec<usize>),
    MoreThan(usize),
}

impl TdSolver {
    /// Returns td of the induced subgraph plus an elimination order
    /// (per connected component, root first), or None if > budget.
    fn solve(&mut self, mask: u64, budget: usize) -> Option<(usize, Vec<usize>)> {
        if mask == 0 {
            return Some((0, Vec::new()));
        }
        match self.memo.get(&mask) {
            Some(MemoEntry::Exact(v, e)) => {
                return if *v <= budget { Some((*v, e.clone())) } else { None };
            }
            Some(MemoEntry::MoreThan(b)) if *b >= budget => return None,
            _ => {}
        }
        let comps = self.mask_components(mask);
        if comps.len() > 1 {
            let mut value = 0;
            let mut order = Vec::new();
            for c in comps {
                let (v, e) = self.solve(c, budget)?;
                value = value.max(v);
                order.extend(e);
            }
            self.memo.insert(mask, MemoEntry::Exact(value, order.clone()));
            return Some((value, order));
        }
        // connected subgraph
        if mask.count_ones() == 1 {
            let v = mask.trailing_zeros() as usize;
            self.memo.insert(mask, MemoEntry::Exact(1, vec![v]));
            return if budget >= 1 { Some((1, vec![v])) } else { None };
        }
        // a longest shortest path has diameter+1 vertices and tree-depth
        // ceil(log2(diameter+2)), a lower bound for the whole subgraph
        let diam = self.mask_diameter(mask);
        let lb = usize::BITS as usize - (diam + 1).leading_zeros() as usize;
        if lb > budget {
            self.memo.insert(mask, MemoEntry::MoreThan(budget));
            return None;
        }
        let mut best: Option<(usize, Vec<usize>)> = None;
        let mut limit = budget;
        let mut m = mask;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            if limit == 0 {
                break;
            }
            if let Some((sub, mut e)) = self.solve(mask & !(1 << v), limit - 1) {
                let val = sub + 1;
                let mut order = vec![v];
                order.append(&mut e);
                if best.as_ref().map_or(true, |(b, _)| val < *b) {
                    limit = val - 1;
                    best = Some((val, order));
                }
            }
        }
        match best {
            Some((v, e)) => {
                self.memo.insert(mask, MemoEntry::Exact(v, e.clone()));
                Some((v, e))
            }
            None => {
                self.memo.insert(mask, MemoEntry::MoreThan(budget));
                None
            }
        }
    }

    /// Diameter of the (connected) induced subgraph via BFS from every vertex.
    fn mask_diameter(&self, mask: u64) -> usize {
        let mut diam = 0;
        let mut m = mask;
        while m != 0 {
            let s = m.trailing_zeros() as usize;
            m &= m - 1;
            let mut dist = HashMap::new();
            dist.insert(s, 0usize);
            let mut frontier = vec![s];
            let mut d = 0;
            while !frontier.is_empty() {
                d += 1;
                let mut next = Vec::new();
                for &u in &frontier {
                    let mut nb = self.adj[u] & mask;
                    while nb != 0 {
                        let v = nb.trailing_zeros() as usize;
                        nb &= nb - 1;
                        if !dist.contains_key(&v) {
                            dist.insert(v, d);
                            next.push(v);
                        }
                    }
                }
                frontier = next;
            }
            diam = diam.max(dist.values().copied().max().unwrap_or(0));
        }
        diam
    }

    fn mask_components(&self, mask: u64) -> Vec<u64> {
        let mut rest = mask;
        let mut comps = Vec::new();
        while rest != 0 {
            let seed = 1u64 << rest.trailing_zeros();
            let mut comp = seed;
            loop {
                let mut grow = comp;
                let mut m = comp;
                while m != 0 {
                    let v = m.trailing_zeros() as usize;
                    m &= m - 1;
                    grow |= self.adj[v] & mask;
                }
                if grow == comp {
                    break;
                }
                comp = grow;
            }
            comps.push(comp);
            rest &= !comp;
        }
        comps
    }
}

/// Builds the witness forest from per-component elimination orders: each
/// eliminated vertex becomes the parent of the forests of the components it
/// leaves behind.
fn elimination_to_forest(g: &Graph, order: &[usize]) -> RootedForest {
    let mut parent = vec![None; g.n()];
    let all: Vec<usize> = (0..g.n()).collect();
    build_forest(g, &all, order, None, &mut parent);
    RootedForest::new(parent)
}

fn build_forest(
    g: &Graph,
    verts: &[usize],
    order: &[usize],
    above: Option<usize>,
    parent: &mut Vec<Option<usize>>,
) {
    if verts.is_empty() {
        return;
    }
    // split verts into connected components of the induced subgraph
    let set: BTreeSet<usize> = verts.iter().copied().collect();
    let mut seen: BTreeSet<usize> = BTreeSet::new();
    for &s in verts {
        if seen.contains(&s) {
            continue;
        }
        let mut stack = vec![s];
        let mut comp = vec![];
        seen.insert(s);
        while let Some(u) = stack.pop() {
            comp.push(u);
            for v in g.neighbors(u) {
                if set.contains(&v) && !seen.contains(&v) {
                    seen.insert(v);
                    stack.push(v);
                }
            }
        }
        // the first vertex of `order` inside this component is its root
        let root = *order
            .iter()
            .find(|v| comp.contains(v))
            .expect("elimination order covers every vertex");
        parent[root] = above;
        let rest: Vec<usize> = comp.into_iter().filter(|&v| v != root).collect();
        build_forest(g, &rest, order, Some(root), parent);
    }
}

/// True iff every edge of G joins an ancestor-descendant pair in F.
pub fn forest_certifies(g: &Graph, f: &RootedForest) -> Result<bool, GraphError> {
    if f.n() != g.n() {
        return Err(GraphError::VertexMismatch);
    }
    Ok(g.edges().all(|(u, v)| f.is_ancestor(u, v) || f.is_ancestor(v, u)))
}

/// Independent recursive oracle for tree-depth straight from the definition:
/// 1 + min over v of td(G-v) on connected G, max over components otherwise.
/// Test-grade; exponential without memoization.
pub fn tree_depth_oracle(g: &Graph) -> usize {
    fn go(g: &Graph, verts: &[usize]) -> usize {
        if verts.is_empty() {
            return 0;
        }
        let set: BTreeSet<usize> = verts.iter().copied().collect();
        let mut comps: Vec<Vec<usize>> = Vec::new();
        let mut seen = BTreeSet::new();
        for &s in verts {
            if seen.contains(&s) {
                continue;
            }
            let mut stack = vec![s];
            seen.insert(s);
            let mut comp = vec![];
            while let Some(u) = stack.pop() {
                comp.push(u);
                for v in g.neighbors(u) {
                    if set.contains(&v) && !seen.contains(&v) {
                        seen.insert(v);
                        stack.push(v);
                    }
                }
            }
            comps.push(comp);
        }
        if comps.len() > 1 {
            return comps.iter().map(|c| go(g, c)).max().unwrap();
        }
        let comp = &comps[0];
        if comp.len() == 1 {
            return 1;
        }
        comp.iter()
            .map(|&v| {
                let rest: Vec<usize> = comp.iter().copied().filter(|&u| u != v).collect();
                1 + go(g, &rest)
            })
            .min()
            .unwrap()
    }
    let all: Vec<usize> = (0..g.n()).collect();
    go(g, &all)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::RatMatrix;

    #[test]
    fn primal_of_identity_is_edgeless() {
        let g = primal_graph(&RatMatrix::identity(3));
        assert_eq!(g.m(), 0);
        assert_eq!(g.n(), 3);
    }

    #[test]
    fn primal_of_band_is_path() {
        let g = primal_graph(&RatMatrix::from_i64(&[&[1, 2, 0], &[0, 1, 2]]));
        assert_eq!(g.n(), 3);
        assert!(g.has_edge(0, 1) && g.has_edge(1, 2) && !g.has_edge(0, 2));
    }

    #[test]
    fn primal_of_all_ones_row_is_complete() {
        let g = primal_graph(&RatMatrix::from_i64(&[&[1, 1, 1, 1]]));
        assert_eq!(g.m(), 6);
    }

    #[test]
    fn dual_of_identity_is_edgeless() {
        assert_eq!(dual_graph(&RatMatrix::identity(4)).m(), 0);
    }

    #[test]
    fn incidence_small_cases() {
        assert_eq!(incidence_graph(&RatMatrix::zero(2, 2)).m(), 0);
        let g = incidence_graph(&RatMatrix::from_i64(&[&[1]]));
        assert_eq!((g.n(), g.m()), (2, 1));
    }

    #[test]
    fn tree_depth_basic() {
        let path3 = Graph::with_edges(3, &[(0, 1), (1, 2)]);
        let (v, f) = tree_depth(&path3, None).unwrap();
        assert_eq!(v, 2);
        assert!(forest_certifies(&path3, &f).unwrap());

        let k4 = Graph::with_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(tree_depth(&k4, None).value(), Some(4));

        let edgeless = Graph::new(5);
        assert_eq!(tree_depth(&edgeless, None).value(), Some(1));
    }

    #[test]
    fn tree_depth_budget() {
        let k4 = Graph::with_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(tree_depth(&k4, Some(3)), TreeDepth::ExceedsBudget(3));
        assert_eq!(tree_depth(&k4, Some(4)).value(), Some(4));
    }

    #[test]
    fn tree_depth_matches_oracle_on_small_graphs() {
        // all graphs on <= 5 vertices, a sample for 6-7
        for n in 1..=5usize {
            let pairs: Vec<(usize, usize)> =
                (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            for mask in 0..(1u32 << pairs.len()) {
                let edges: Vec<(usize, usize)> = pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &e)| e)
                    .collect();
                let g = Graph::with_edges(n, &edges);
                let (v, f) = tree_depth(&g, None).unwrap();
                assert_eq!(v, tree_depth_oracle(&g), "graph n={n} edges {edges:?}");
                assert!(forest_certifies(&g, &f).unwrap());
                assert_eq!(f.height(), v);
            }
        }
    }

    #[test]
    fn forest_certifies_examples() {
        let path = Graph::with_edges(3, &[(0, 1), (1, 2)]);
        // star rooted at 1
        let f = RootedForest::new(vec![Some(1), None, Some(1)]);
        assert!(forest_certifies(&path, &f).unwrap());
        // path 0 -> 1 -> 2 rooted at 0
        let f2 = RootedForest::new(vec![None, Some(0), Some(1)]);
        assert!(forest_certifies(&path, &f2).unwrap());
        // triangle vs height-2 star: leaf-leaf edge uncovered
        let tri = Graph::with_edges(3, &[(0, 1), (1, 2), (0, 2)]);
        assert!(!forest_certifies(&tri, &f).unwrap());
    }

    #[test]
    fn gr_round_trip() {
        let g = Graph::with_edges(4, &[(0, 1), (2, 3)]);
        assert_eq!(Graph::parse_gr(&g.to_gr()).unwrap(), g);
        assert!(Graph::parse_gr("2 1\n0 0\n").is_err());
    }
}
