//! Instance generators: the vertex-edge matroid M_F(G) of a graph, quotient
//! graphs G/A, hardness reductions from balanced independent sets, and the
//! G_n family whose contraction-depth grows quadratically in its largest
//! circuit.

use crate::graph::Graph;
use crate::matrix::{RatMatrix, Rational};
use crate::matroid::{FieldSpec, LinearMatroid, MatroidError};
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ForgeError {
    #[error("the supplied parts are not a bipartition of the graph")]
    NotBipartition,
    #[error(transparent)]
    Matroid(#[from] MatroidError),
}

/// How a matroid element arose from the source graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementTag {
    Vertex(usize),
    Edge(usize, usize),
}

/// M_F(G): one element e_w per vertex w and one element e_w − e_{w'} per
/// edge ww', over the chosen field.
#[derive(Debug, Clone)]
pub struct LabeledGraphMatroid {
    pub graph: Graph,
    pub tags: Vec<ElementTag>,
    pub matroid: LinearMatroid,
}

pub fn matroid_from_graph(
    g: &Graph,
    field: FieldSpec,
) -> Result<LabeledGraphMatroid, MatroidError> {
    let n = g.n();
    let mut cols: Vec<Vec<Rational>> = Vec::with_capacity(n + g.m());
    let mut tags = Vec::with_capacity(n + g.m());
    for w in 0..n {
        let mut c = vec![Rational::zero(); n];
        c[w] = Rational::one();
        cols.push(c);
        tags.push(ElementTag::Vertex(w));
    }
    for (u, v) in g.edges() {
        let mut c = vec![Rational::zero(); n];
        c[u] = Rational::one();
        c[v] = -Rational::one();
        cols.push(c);
        tags.push(ElementTag::Edge(u, v));
    }
    let a = RatMatrix::from_columns(n, &cols);
    let matroid = LinearMatroid::matroid_of(&a, field)?;
    Ok(LabeledGraphMatroid { graph: g.clone(), tags, matroid })
}

/// G ∪ K_X ∪ K_Y for a bipartite graph with parts X and Y.
pub fn bipartite_completion(g: &Graph, x: &[usize], y: &[usize]) -> Result<Graph, ForgeError> {
    check_bipartition(g, x, y)?;
    let mut out = g.clone();
    for part in [x, y] {
        for i in 0..part.len() {
            for j in i + 1..part.len() {
                out.add_edge(part[i], part[j]);
            }
        }
    }
    Ok(out)
}

fn check_bipartition(g: &Graph, x: &[usize], y: &[usize]) -> Result<(), ForgeError> {
    let mut seen = vec![false; g.n()];
    for &v in x.iter().chain(y) {
        if v >= g.n() || seen[v] {
            return Err(ForgeError::NotBipartition);
        }
        seen[v] = true;
    }
    if !seen.iter().all(|&s| s) {
        return Err(ForgeError::NotBipartition);
    }
    for part in [x, y] {
        for i in 0..part.len() {
            for j in i + 1..part.len() {
                if g.has_edge(part[i], part[j]) {
                    return Err(ForgeError::NotBipartition);
                }
            }
        }
    }
    Ok(())
}

/// G/A for a subspace A ⊆ ℚ^{V(G)} given by generators: delete the vertices
/// whose unit vector lies in A, contract a maximal acyclic subset (chosen
/// lexicographically) of the edges ww' with e_w + α·e_{w'} ∈ A, and drop the
/// remaining such edges as loops.
pub fn quotient_graph(g: &Graph, generators: &[Vec<Rational>]) -> Graph {
    let n = g.n();
    let b = RatMatrix::from_columns(n, generators);
    let rank_a = b.rank();
    let with = |extra: &[usize]| -> usize {
        let mut cols = generators.to_vec();
        for &w in extra {
            let mut u = vec![Rational::zero(); n];
            u[w] = Rational::one();
            cols.push(u);
        }
        RatMatrix::from_columns(n, &cols).rank()
    };
    let deleted: Vec<bool> = (0..n).map(|w| with(&[w]) == rank_a).collect();
    // union-find over surviving vertices; lexicographic spanning subset of F
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut Vec<usize>, mut v: usize) -> usize {
        while p[v] != v {
            p[v] = p[p[v]];
            v = p[v];
        }
        v
    }
    for (u, v) in g.edges() {
        if deleted[u] || deleted[v] {
            continue;
        }
        // e_u + α e_v ∈ A for some α ≠ 0 iff A meets span(e_u, e_v)
        // nontrivially; the meeting vector has both coordinates nonzero
        // because neither unit vector lies in A alone.
        if with(&[u, v]) < rank_a + 2 {
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru != rv {
                parent[rv] = ru;
            }
        }
    }
    let mut class_ids: Vec<usize> = Vec::new();
    let mut id_of = vec![usize::MAX; n];
    for v in 0..n {
        if !deleted[v] {
            let r = find(&mut parent, v);
            if id_of[r] == usize::MAX {
                id_of[r] = class_ids.len();
                class_ids.push(r);
            }
        }
    }
    let mut out = Graph::new(class_ids.len());
    for (u, v) in g.edges() {
        if deleted[u] || deleted[v] {
            continue;
        }
        let (cu, cv) = (id_of[find(&mut parent, u)], id_of[find(&mut parent, v)]);
        if cu != cv {
            out.add_edge(cu, cv);
        }
    }
    out
}

/// Does G have an independent set with k vertices in X and k in Y?
/// Brute force over subsets.
pub fn balanced_independent_set(
    g: &Graph,
    x: &[usize],
    y: &[usize],
    k: usize,
) -> Result<bool, ForgeError> {
    check_bipartition(g, x, y)?;
    if k == 0 {
        return Ok(true);
    }
    if k > x.len() || k > y.len() {
        return Ok(false);
    }
    let mut found = false;
    for_subsets(x, k, &mut |xs| {
        for_subsets(y, k, &mut |ys| {
            if !xs.iter().any(|&u| ys.iter().any(|&v| g.has_edge(u, v))) {
                found = true;
            }
        });
    });
    Ok(found)
}

fn for_subsets(items: &[usize], k: usize, f: &mut dyn FnMut(&[usize])) {
    fn go(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            go(items, k, i + 1, cur, f);
            cur.pop();
        }
    }
    go(items, k, 0, &mut Vec::new(), f);
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HardnessVariant {
    /// csd(M_F(G')) ≤ |X|+|Y|−k
    Cstar,
    /// cd(2·M_F(G')) ≤ |X|+|Y|−k+1
    Cd2M,
    /// cdd((|G'|+1)·M_F(G')) ≤ |X|+|Y|−k+1
    CddClone,
    /// csdd((|G'|+1)·M_F(G')) ≤ |X|+|Y|−k
    CsddClone,
    /// dd((2·M_F(G'))*) ≤ |X|+|Y|−k+1
    DdDual,
}

#[derive(Debug, Clone)]
pub struct HardnessInstance {
    pub completed_graph: Graph,
    pub matroid: LinearMatroid,
    /// The depth value that holds iff a balanced independent set of size k exists.
    pub threshold: usize,
}

pub fn hardness_instance(
    g: &Graph,
    x: &[usize],
    y: &[usize],
    k: usize,
    field: FieldSpec,
    which: HardnessVariant,
) -> Result<HardnessInstance, ForgeError> {
    let gp = bipartite_completion(g, x, y)?;
    let base = matroid_from_graph(&gp, field)?.matroid;
    let s = x.len() + y.len() - k;
    let clones = gp.n() + gp.m() + 1;
    let (matroid, threshold) = match which {
        HardnessVariant::Cstar => (base, s),
        HardnessVariant::Cd2M => (base.clone_k(2), s + 1),
        HardnessVariant::CddClone => (base.clone_k(clones), s + 1),
        HardnessVariant::CsddClone => (base.clone_k(clones), s),
        HardnessVariant::DdDual => (base.clone_k(2).dualize(), s + 1),
    };
    Ok(HardnessInstance { completed_graph: gp, matroid, threshold })
}

/// The G_n construction: a multigraph with distinguished vertices r and b
/// such that every r–b path has length in [n, 2n], every cycle has length
/// ≤ 4n, yet the contraction-depth of the cycle matroid is ≥ C(n,2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GnInstance {
    pub n: usize,
    pub vertices: usize,
    /// Edge list with parallel edges kept (G₁ is a doubled edge).
    pub edges: Vec<(usize, usize)>,
    pub r: usize,
    pub b: usize,
}

pub fn gn_family(n: usize) -> GnInstance {
    assert!(n >= 1);
    if n == 1 {
        return GnInstance { n: 1, vertices: 2, edges: vec![(0, 1), (0, 1)], r: 0, b: 1 };
    }
    let prev = gn_family(n - 1);
    let mut vertices = 2 * n;
    let mut edges: Vec<(usize, usize)> = (0..2 * n).map(|i| (i, (i + 1) % (2 * n))).collect();
    let (r, b) = (0, n);
    for _ in 0..n {
        let off = vertices;
        edges.extend(prev.edges.iter().map(|&(u, v)| (u + off, v + off)));
        edges.push((prev.r + off, r));
        edges.push((prev.b + off, b));
        vertices += prev.vertices;
    }
    GnInstance { n, vertices, edges, r, b }
}

impl GnInstance {
    /// The graphic (cycle) matroid: one column e_u − e_v per edge.
    pub fn cycle_matroid(&self, field: FieldSpec) -> Result<LinearMatroid, MatroidError> {
        let cols: Vec<Vec<Rational>> = self
            .edges
            .iter()
            .map(|&(u, v)| {
                let mut c = vec![Rational::zero(); self.vertices];
                c[u] = Rational::one();
                c[v] = -Rational::one();
                c
            })
            .collect();
        LinearMatroid::matroid_of(&RatMatrix::from_columns(self.vertices, &cols), field)
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for l in adj.iter_mut() {
            l.sort_unstable();
            l.dedup();
        }
        adj
    }

    /// Lengths of all simple r–b paths.
    pub fn path_lengths(&self) -> Vec<usize> {
        let adj = self.adjacency();
        let mut lens = Vec::new();
        let mut on_path = vec![false; self.vertices];
        on_path[self.r] = true;
        fn dfs(
            v: usize,
            target: usize,
            len: usize,
            adj: &[Vec<usize>],
            on_path: &mut Vec<bool>,
            lens: &mut Vec<usize>,
        ) {
            if v == target {
                lens.push(len);
                return;
            }
            for &w in &adj[v] {
                if !on_path[w] {
                    on_path[w] = true;
                    dfs(w, target, len + 1, adj, on_path, lens);
                    on_path[w] = false;
                }
            }
        }
        dfs(self.r, self.b, 0, &adj, &mut on_path, &mut lens);
        lens.sort_unstable();
        lens
    }

    /// Lengths of all cycles: parallel pairs contribute 2-cycles, longer
    /// cycles are enumerated as vertex-simple closed walks canonicalized by
    /// their smallest vertex and direction.
    pub fn cycle_lengths(&self) -> Vec<usize> {
        let mut lens = Vec::new();
        let mut sorted = self.edges.clone();
        for e in sorted.iter_mut() {
            *e = (e.0.min(e.1), e.0.max(e.1));
        }
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                lens.push(2);
            }
        }
        let adj = self.adjacency();
        let mut stack = Vec::new();
        let mut on_path = vec![false; self.vertices];
        fn dfs(
            v: usize,
            start: usize,
            adj: &[Vec<usize>],
            stack: &mut Vec<usize>,
            on_path: &mut Vec<bool>,
            lens: &mut Vec<usize>,
        ) {
            for &w in &adj[v] {
                if w == start && stack.len() >= 3 && stack[1] < *stack.last().unwrap() {
                    lens.push(stack.len());
                } else if w > start && !on_path[w] {
                    stack.push(w);
                    on_path[w] = true;
                    dfs(w, start, adj, stack, on_path, lens);
                    on_path[w] = false;
                    stack.pop();
                }
            }
        }
        for start in 0..self.vertices {
            stack.push(start);
            on_path[start] = true;
            dfs(start, start, &adj, &mut stack, &mut on_path, &mut lens);
            on_path[start] = false;
            stack.pop();
        }
        lens.sort_unstable();
        lens
    }
}

/// Components of positive rank; the quantity lm:A-contract compares against
/// the components of G/A (loops created by the contraction do not count).
pub fn positive_rank_components(m: &LinearMatroid) -> Result<usize, MatroidError> {
    let mut count = 0;
    for comp in m.components() {
        if m.rank(&comp)? > 0 {
            count += 1;
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::depth::{contraction_depth, cstar_depth, SubspaceConfig};
    use crate::matroid::FieldVector;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn graph_matroid_single_edge() {
        let g = Graph::with_edges(2, &[(0, 1)]);
        let lm = matroid_from_graph(&g, FieldSpec::Rationals).unwrap();
        assert_eq!(lm.matroid.ground_size(), 3);
        assert_eq!(lm.matroid.rank_full(), 2);
        let circuits = lm.matroid.circuits();
        assert_eq!(circuits.len(), 1);
        assert_eq!(circuits[0].len(), 3);
    }

    #[test]
    fn graph_matroid_edgeless_is_free() {
        let g = Graph::new(4);
        let lm = matroid_from_graph(&g, FieldSpec::PrimeField(3)).unwrap();
        assert_eq!(lm.matroid.ground_size(), 4);
        assert_eq!(lm.matroid.rank_full(), 4);
    }

    #[test]
    fn graph_matroid_element_count() {
        let g = Graph::with_edges(4, &[(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)]);
        let lm = matroid_from_graph(&g, FieldSpec::Rationals).unwrap();
        assert_eq!(lm.matroid.ground_size(), g.n() + g.m());
        assert_eq!(lm.tags.len(), g.n() + g.m());
    }

    #[test]
    fn completion_edge_count() {
        let g = Graph::with_edges(5, &[(0, 3), (1, 4)]);
        let gp = bipartite_completion(&g, &[0, 1, 2], &[3, 4]).unwrap();
        assert_eq!(gp.m(), g.m() + 3 + 1);
        assert!(gp.has_edge(0, 1) && gp.has_edge(3, 4) && !gp.has_edge(2, 3));
    }

    #[test]
    fn completion_rejects_inner_edge() {
        let g = Graph::with_edges(3, &[(0, 1)]);
        assert_eq!(
            bipartite_completion(&g, &[0, 1], &[2]),
            Err(ForgeError::NotBipartition)
        );
        assert_eq!(
            bipartite_completion(&g, &[0], &[2]),
            Err(ForgeError::NotBipartition)
        );
    }

    fn unit(n: usize, w: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); n];
        v[w] = Rational::one();
        v
    }

    #[test]
    fn quotient_examples() {
        let g = Graph::with_edges(4, &[(0, 1), (1, 2), (2, 3)]);
        assert_eq!(quotient_graph(&g, &[]), g);
        // span(e_1): delete vertex 1
        let q = quotient_graph(&g, &[unit(4, 1)]);
        assert_eq!((q.n(), q.m()), (3, 1));
        // span(e_1 - e_2): contract the edge 12
        let mut d = unit(4, 1);
        d[2] = -Rational::one();
        let q = quotient_graph(&g, &[d]);
        assert_eq!((q.n(), q.m()), (3, 2));
        assert_eq!(q.components().len(), 1);
    }

    #[test]
    fn a_contract_inequality_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let n = rng.gen_range(2..=5);
            let mut g = Graph::new(n);
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.5) {
                        g.add_edge(u, v);
                    }
                }
            }
            let dims = rng.gen_range(0..=2);
            let gens: Vec<Vec<Rational>> = (0..dims)
                .map(|_| {
                    (0..n)
                        .map(|_| Rational::from_integer(rng.gen_range(-2i64..=2).into()))
                        .collect()
                })
                .collect();
            let lm = matroid_from_graph(&g, FieldSpec::Rationals).unwrap();
            let fv: Vec<FieldVector> = gens.iter().map(|v| FieldVector::Q(v.clone())).collect();
            let contracted = lm.matroid.contract_subspace(&fv).unwrap();
            let matroid_comps = positive_rank_components(&contracted).unwrap();
            let graph_comps = quotient_graph(&g, &gens).components().len();
            assert!(
                matroid_comps <= graph_comps,
                "components {matroid_comps} > {graph_comps} for {g:?} gens {gens:?}"
            );
        }
    }

    #[test]
    fn balanced_set_examples() {
        let single = Graph::with_edges(2, &[(0, 1)]);
        assert_eq!(balanced_independent_set(&single, &[0], &[1], 0), Ok(true));
        assert_eq!(balanced_independent_set(&single, &[0], &[1], 1), Ok(false));
        let matching = Graph::with_edges(4, &[(0, 2), (1, 3)]);
        assert_eq!(balanced_independent_set(&matching, &[0, 1], &[2, 3], 1), Ok(true));
        assert_eq!(balanced_independent_set(&matching, &[0, 1], &[2, 3], 2), Ok(false));
    }

    #[test]
    fn hardness_two_isolated_vertices() {
        let g = Graph::new(2);
        let cfg = SubspaceConfig::default();
        let inst = hardness_instance(&g, &[0], &[1], 1, FieldSpec::PrimeField(3), HardnessVariant::Cstar)
            .unwrap();
        assert_eq!(inst.threshold, 1);
        let rep = cstar_depth(&inst.matroid, None, &cfg).unwrap();
        assert_eq!(rep.value, 1);
        let inst = hardness_instance(&g, &[0], &[1], 1, FieldSpec::PrimeField(3), HardnessVariant::Cd2M)
            .unwrap();
        assert_eq!(inst.threshold, 2);
        assert_eq!(contraction_depth(&inst.matroid, None).unwrap().value, 2);
    }

    #[test]
    fn hardness_single_edge_no_balanced_set() {
        let g = Graph::with_edges(2, &[(0, 1)]);
        assert_eq!(balanced_independent_set(&g, &[0], &[1], 1), Ok(false));
        let inst = hardness_instance(&g, &[0], &[1], 1, FieldSpec::PrimeField(3), HardnessVariant::Cstar)
            .unwrap();
        let rep = cstar_depth(&inst.matroid, None, &SubspaceConfig::default()).unwrap();
        assert!(rep.value > inst.threshold);
    }

    #[test]
    fn gn_base_case() {
        let g1 = gn_family(1);
        assert_eq!(g1.edges.len(), 2);
        assert_eq!(g1.cycle_lengths(), vec![2]);
        let m1 = g1.cycle_matroid(FieldSpec::Rationals).unwrap();
        assert_eq!(m1.rank_full(), 1);
        assert_eq!(contraction_depth(&m1, None).unwrap().value, 2);
    }

    #[test]
    fn gn_two_properties() {
        let g2 = gn_family(2);
        assert_eq!(g2.edges.len(), 12);
        assert_eq!(g2.vertices, 8);
        let paths = g2.path_lengths();
        assert!(!paths.is_empty());
        assert!(paths.iter().all(|&l| (2..=4).contains(&l)));
        let cycles = g2.cycle_lengths();
        assert!(*cycles.last().unwrap() <= 8);
    }
}
