//! Seeded validation suites tying the depth/preconditioner theorems to
//! executable checks. Each suite runs a deterministic corpus and returns a
//! structured outcome; any recorded failure means an implementation bug.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::depth::{
    contraction_depth, csdd_depth, cstar_depth, deletion_depth, principal_cstar_tree,
    verify_cstar_tree, Exactness, SubspaceConfig,
};
use crate::forge::{
    balanced_independent_set, bipartite_completion, gn_family, matroid_from_graph,
    positive_rank_components, quotient_graph,
};
use crate::graph::{dual_graph, incidence_graph, primal_graph, tree_depth, Graph};
use crate::graver::{graver_basis, matrix_circuits};
use crate::matrix::{
    entry_complexity, kernel_basis, random_row_ops, row_space_equal, RatMatrix, Rational,
};
use crate::matroid::{FieldSpec, FieldVector, LinearMatroid};
use crate::precondition::{
    dual_sparsify_circuit, dual_sparsify_from_tree, incidence_sparsify, primal_sparsify,
    PreconditionError,
};

pub const SCHEMA: &str = "graver-forge/1";

pub const SUITES: &[&str] = &[
    "tdP",
    "tdI",
    "orig-eq",
    "equiv",
    "circuit-bound",
    "graph-reduction",
    "a-contract",
    "gn",
    "graver",
];

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Corpus size; 0 selects the suite's contractual default.
    pub count: usize,
    pub field: FieldSpec,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 1, count: 0, field: FieldSpec::Rationals }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub suite: String,
    pub cases: usize,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

impl SuiteOutcome {
    fn new(suite: &str) -> Self {
        SuiteOutcome { suite: suite.to_string(), cases: 0, failures: Vec::new(), notes: Vec::new() }
    }

    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(msg());
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "schema": SCHEMA,
            "kind": "validation",
            "suite": self.suite,
            "cases": self.cases,
            "pass": self.pass(),
            "failures": self.failures,
            "notes": self.notes,
        })
    }
}

/// Run one suite by name; `None` for an unknown suite name.
pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Option<SuiteOutcome> {
    Some(match name {
        "tdP" => suite_td_p(cfg),
        "tdI" => suite_td_i(cfg),
        "orig-eq" => suite_orig_eq(cfg),
        "equiv" => suite_equiv(cfg),
        "circuit-bound" => suite_circuit_bound(cfg),
        "graph-reduction" => suite_graph_reduction(cfg),
        "a-contract" => suite_a_contract(cfg),
        "gn" => suite_gn(cfg),
        "graver" => suite_graver(cfg),
        _ => return None,
    })
}

fn td(g: &Graph) -> usize {
    tree_depth(g, None).unwrap().0
}

/// True when every subspace generator in the tree is a rational vector, so
/// the witness can drive a row-operation reduction of a rational matrix.
fn rational_witness(t: &crate::depth::DecompositionTree) -> bool {
    fn walk(node: &crate::depth::DtNode) -> bool {
        node.children.iter().all(|(mv, child)| {
            let ok = match mv {
                crate::depth::EdgeMove::ContractSubspace(FieldVector::P(_)) => false,
                _ => true,
            };
            ok && walk(child)
        })
    }
    walk(&t.root)
}

fn random_matrix(
    rng: &mut ChaCha8Rng,
    max_rows: usize,
    max_cols: usize,
    lo: i64,
    hi: i64,
) -> RatMatrix {
    let rows = rng.gen_range(1..=max_rows);
    let cols = rng.gen_range(1..=max_cols);
    let mut a = RatMatrix::zero(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            *a.at_mut(i, j) = Rational::from_integer(rng.gen_range(lo..=hi).into());
        }
    }
    a
}

/// td_P(primal_sparsify(A)) equals the deletion-depth of M(A), and the
/// deletion-depth lower-bounds td_P over the row-operation orbit.
fn suite_td_p(cfg: &SuiteConfig) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("tdP");
    let count = if cfg.count == 0 { 200 } else { cfg.count };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for case in 0..count {
        let a = random_matrix(&mut rng, 4, 6, -3, 3);
        out.cases += 1;
        let m = match LinearMatroid::matroid_of(&a, FieldSpec::Rationals) {
            Ok(m) => m,
            Err(e) => {
                out.failures.push(format!("case {case}: matroid build failed: {e}"));
                continue;
            }
        };
        let rep = match deletion_depth(&m, None) {
            Ok(r) => r,
            Err(e) => {
                out.failures.push(format!("case {case}: deletion-depth failed: {e}"));
                continue;
            }
        };
        match primal_sparsify(&a, &rep.witness) {
            Ok(b) => {
                let got = td(&primal_graph(&b));
                out.check(got == rep.value, || {
                    format!("case {case}: td_P after sparsify {got} != dd {}", rep.value)
                });
            }
            Err(e) => out.failures.push(format!("case {case}: primal sparsify failed: {e}")),
        }
        for j in 0..10 {
            let b = random_row_ops(&a, cfg.seed ^ (case as u64 * 101 + j), 4);
            let tdb = td(&primal_graph(&b));
            out.check(rep.value <= tdb, || {
                format!("case {case}.{j}: dd {} > td_P(equivalent) {tdb}", rep.value)
            });
        }
    }
    out
}

/// Incidence sparsification lands within one of the witnessed csdd value,
/// with equality whenever the witness is exact and rational.
fn suite_td_i(cfg: &SuiteConfig) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("tdI");
    let count = if cfg.count == 0 { 50 } else { cfg.count };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let sub = SubspaceConfig::default();
    for case in 0..count {
        let a = random_matrix(&mut rng, 3, 4, -2, 2);
        out.cases += 1;
        let m = LinearMatroid::matroid_of(&a, FieldSpec::Rationals).unwrap();
        let rep = match csdd_depth(&m, None, &sub) {
            Ok(r) => r,
            Err(e) => {
                out.failures.push(format!("case {case}: csdd failed: {e}"));
                continue;
            }
        };
        if !rational_witness(&rep.witness) {
            out.notes.push(format!("case {case}: csdd witness lives over GF(p); skipped"));
            continue;
        }
        match incidence_sparsify(&a, &rep.witness) {
            Ok(b) => {
                let got = td(&incidence_graph(&b));
                if rep.exactness == Exactness::Exact {
                    out.check(got == rep.value + 1, || {
                        format!("case {case}: td_I {got} != csdd+1 = {}", rep.value + 1)
                    });
                } else {
                    out.check(got <= rep.value + 1, || {
                        format!("case {case}: td_I {got} > witnessed csdd+1 = {}", rep.value + 1)
                    });
                }
                out.check(row_space_equal(&a, &b) == Ok(true), || {
                    format!("case {case}: incidence sparsify changed the row space")
                });
            }
            Err(PreconditionError::RationalWitnessRequired) => {
                out.notes.push(format!("case {case}: csdd witness lives over GF(p); skipped"));
            }
            Err(e) => out.failures.push(format!("case {case}: incidence sparsify failed: {e}")),
        }
    }
    out
}

/// Minimum dual tree-depth over the row-operation orbit equals csd(M(A)):
/// the optimal witness rebuilds a matrix attaining it, and no equivalent
/// matrix goes below it.
fn suite_orig_eq(cfg: &SuiteConfig) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("orig-eq");
    let count = if cfg.count == 0 { 50 } else { cfg.count };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let sub = SubspaceConfig::default();
    for case in 0..count {
        let a = random_matrix(&mut rng, 3, 5, -2, 2);
        if a.rank() == 0 {
            continue;
        }
        out.cases += 1;
        let m = LinearMatroid::matroid_of(&a, FieldSpec::Rationals).unwrap();
        let rep = match cstar_depth(&m, None, &sub) {
            Ok(r) => r,
            Err(e) => {
                out.failures.push(format!("case {case}: csd failed: {e}"));
                continue;
            }
        };
        if rep.exactness != Exactness::Exact {
            out.notes.push(format!("case {case}: csd not confirmable exactly; skipped"));
            continue;
        }
        if !rational_witness(&rep.witness) {
            out.notes.push(format!("case {case}: csd witness lives over GF(p); skipped"));
        } else {
            match dual_sparsify_from_tree(&a, &rep.witness) {
                Ok(b) => {
                    let got = td(&dual_graph(&b));
                    out.check(got == rep.value, || {
                        format!("case {case}: td_D after sparsify {got} != csd {}", rep.value)
                    });
                }
                Err(e) => out.failures.push(format!("case {case}: dual sparsify failed: {e}")),
            }
        }
        for j in 0..5u64 {
            let b = random_row_ops(&a, cfg.seed ^ (case as u64 * 313 + j), 4);
            let tdb = td(&dual_graph(&b));
            out.check(rep.value <= tdb, || {
                format!("case {case}.{j}: csd {} > td_D(equivalent) {tdb}", rep.value)
            });
        }
    }
    out
}

fn bits(k: &BigInt) -> u64 {
    if k.is_zero() {
        0
    } else {
        k.bits()
    }
}

/// Circuit-driven dual sparsification: td_D ≤ c₁², entry complexity
/// ≤ 2⌈log₂(c₁+1)⌉, row space (hence kernel and circuits) preserved.
fn suite_equiv(cfg: &SuiteConfig) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("equiv");
    let count = if cfg.count == 0 { 200 } else { cfg.count };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for case in 0..count {
        let a = random_matrix(&mut rng, 4, 6, -3, 3);
        if kernel_basis(&a).is_empty() {
            continue;
        }
        out.cases += 1;
        let circuits = matrix_circuits(&a);
        let c1 = circuits.c1.clone().expect("nontrivial kernel has circuits");
        let b = match dual_sparsify_circuit(&a) {
            Ok(b) => b,
            Err(e) => {
                out.failures.push(format!("case {case}: dual sparsify failed: {e}"));
                continue;
            }
        };
        let c1sq = (&c1 * &c1).to_usize().unwrap();
        let got = td(&dual_graph(&b));
        out.check(got <= c1sq, || format!("case {case}: td_D {got} > c1^2 {c1sq}"));
        let ec = entry_complexity(&b);
        out.check(ec <= 2 * bits(&c1), || {
            format!("case {case}: ec {ec} > 2*ceil(log2(c1+1)) = {}", 2 * bits(&c1))
        });
        out.check(row_space_equal(&a, &b) == Ok(true), || {
            format!("case {case}: row space not preserved")
        });
        out.check(matrix_circuits(&b).vectors == circuits.vectors, || {
            format!("case {case}: circuits not preserved")
        });
    }
    out
}

/// log₂k ≤ csd(M) ≤ k² with k the largest circuit size, and the principal
/// contraction*-tree verifies and stays within k² depth.
fn suite_circuit_bound(cfg: &SuiteConfig) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("circuit-bound");
    let count = if cfg.count == 0 { 100 } else { cfg.count };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let field = match cfg.field {
        FieldSpec::Rationals => FieldSpec::PrimeField(3),
        f => f,
    };
    let p = match field {
        FieldSpec::PrimeField(p) => p,
        FieldSpec::Rationals => unreachable!(),
    };
    let sub = SubspaceConfig::default();
    while out.cases < count {
        let r = rng.gen_range(1..=4usize);
        let n = rng.gen_range(2..=8usize);
        let mut a = RatMatrix::zero(r, n);
        for i in 0..r {
            for j in 0..n {
                *a.at_mut(i, j) = Rational::from_integer(rng.gen_range(0..p as i64).into());
            }
        }
        let m = LinearMatroid::matroid_of(&a, field).unwrap();
        let k = match m.circuits().iter().map(|c| c.len()).max() {
            Some(k) => k,
            None => continue, // independent: the circuit bound is vacuous
        };
        out.cases += 1;
        let case = out.cases;
        let tree = match principal_cstar_tree(&m) {
            Ok(t) => t,
            Err(e) => {
                out.failures.push(format!("case {case}: principal tree failed: {e}"));
                continue;
            }
        };
        out.check(verify_cstar_tree(&m, &tree) == Ok(true), || {
            format!("case {case}: principal tree rejected by verifier")
        });
        out.check(tree.depth() <= k * k, || {
            format!("case {case}: principal depth {} > k^2 {}", tree.depth(), k * k)
        });
        match cstar_depth(&m, None, &sub) {
            Ok(rep) => {
                out.check(rep.value <= k * k, || {
                    format!("case {case}: csd {} > k^2 {}", rep.value, k * k)
                });
                out.check(1usize << rep.value >= k, || {
                    format!("case {case}: 2^csd = {} < k {k}", 1usize << rep.value)
                });
            }
            Err(e) => out.failures.push(format!("case {case}: csd failed: {e}")),
        }
    }
    out
}

/// Three-way equivalence of the bipartite-graph reduction, exhaustively over
/// all 16 bipartite graphs with |X| = |Y| = 2 and thresholds k ∈ {0,1,2}:
/// a balanced independent set of size 2k exists iff csd(M_F(G′)) ≤ |X|+|Y|−k
/// iff cd(2·M_F(G′)) ≤ |X|+|Y|−k+1.
fn suite_graph_reduction(cfg: &SuiteConfig) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("graph-reduction");
    let field = cfg.field;
    let x = [0usize, 1];
    let y = [2usize, 3];
    let cross = [(0usize, 2usize), (0, 3), (1, 2), (1, 3)];
    let sub = SubspaceConfig::default();
    for mask in 0u32..16 {
        let mut g = Graph::new(4);
        for (i, &(u, v)) in cross.iter().enumerate() {
            if mask >> i & 1 == 1 {
                g.add_edge(u, v);
            }
        }
        let gp = bipartite_completion(&g, &x, &y).unwrap();
        let m = matroid_from_graph(&gp, field).unwrap().matroid;
        let csd = match cstar_depth(&m, None, &sub) {
            Ok(rep) => {
                if rep.exactness != Exactness::Exact {
                    out.failures.push(format!("graph {mask:04b}: csd not exact"));
                    continue;
                }
                rep.value
            }
            Err(e) => {
                out.failures.push(format!("graph {mask:04b}: csd failed: {e}"));
                continue;
            }
        };
        let doubled = m.clone_k(2);
        let cd2 = match contraction_depth(&doubled, None) {
            Ok(rep) => rep.value,
            Err(e) => {
                out.failures.push(format!("graph {mask:04b}: cd(2M) failed: {e}"));
                continue;
            }
        };
        for k in 0..=2usize {
            out.cases += 1;
            let s = x.len() + y.len() - k;
            let balanced = balanced_independent_set(&g, &x, &y, k).unwrap();
            out.check(balanced == (csd <= s), || {
                format!("graph {mask:04b} k={k}: balanced={balanced} but csd={csd}, s={s}")
            });
            out.check(balanced == (cd2 <= s + 1), || {
                format!("graph {mask:04b} k={k}: balanced={balanced} but cd(2M)={cd2}, s+1={}", s + 1)
            });
        }
    }
    out
}

/// After contracting a subspace A, the vertex-edge matroid of G splits into
/// no more positive-rank components than the quotient graph G/A has.
fn suite_a_contract(cfg: &SuiteConfig) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("a-contract");
    let count = if cfg.count == 0 { 500 } else { cfg.count };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for case in 0..count {
        let n = rng.gen_range(2..=5usize);
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(0.5) {
                    g.add_edge(u, v);
                }
            }
        }
        let dims = rng.gen_range(0..=2usize);
        let gens: Vec<Vec<Rational>> = (0..dims)
            .map(|_| {
                (0..n)
                    .map(|_| Rational::from_integer(rng.gen_range(-2i64..=2).into()))
                    .collect()
            })
            .collect();
        out.cases += 1;
        let lm = matroid_from_graph(&g, FieldSpec::Rationals).unwrap();
        let fv: Vec<FieldVector> = gens.iter().map(|v| FieldVector::Q(v.clone())).collect();
        let contracted = match lm.matroid.contract_subspace(&fv) {
            Ok(m) => m,
            Err(e) => {
                out.failures.push(format!("case {case}: contraction failed: {e}"));
                continue;
            }
        };
        let matroid_comps = positive_rank_components(&contracted).unwrap();
        let graph_comps = quotient_graph(&g, &gens).components().len();
        out.check(matroid_comps <= graph_comps, || {
            format!("case {case}: {matroid_comps} matroid components > {graph_comps} graph components")
        });
    }
    out
}

/// The recursive gadget family: r–b path lengths within [n, 2n], circuits of
/// the cycle matroid of size ≤ 4n, and (for n ≤ 2) exact contraction-depth
/// at least C(n,2).
fn suite_gn(cfg: &SuiteConfig) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("gn");
    let max_n = if cfg.count == 0 { 3 } else { cfg.count.min(3) };
    let field = match cfg.field {
        FieldSpec::Rationals => FieldSpec::PrimeField(3),
        f => f,
    };
    for n in 1..=max_n {
        out.cases += 1;
        let inst = gn_family(n);
        let paths = inst.path_lengths();
        out.check(!paths.is_empty(), || format!("G_{n}: no r–b path"));
        out.check(paths.iter().all(|&l| n <= l && l <= 2 * n), || {
            format!("G_{n}: path lengths {paths:?} leave [{n}, {}]", 2 * n)
        });
        let cycles = inst.cycle_lengths();
        out.check(cycles.iter().all(|&c| c <= 4 * n), || {
            format!("G_{n}: circuit lengths {cycles:?} exceed {}", 4 * n)
        });
        if n <= 2 {
            let m = inst.cycle_matroid(field).unwrap();
            let target = n * (n - 1) / 2;
            match contraction_depth(&m, None) {
                Ok(rep) => out.check(rep.value >= target, || {
                    format!("G_{n}: cd {} < C({n},2) = {target}", rep.value)
                }),
                Err(e) => out.failures.push(format!("G_{n}: cd failed: {e}")),
            }
        }
    }
    out
}

/// Circuits embed in the Graver basis, both are invariant under row
/// operations, and the completion output is cross-certified against the
/// brute-force box enumeration inside graver_basis itself. Emits the
/// empirical g₁-versus-c₁ table as notes.
fn suite_graver(cfg: &SuiteConfig) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("graver");
    let count = if cfg.count == 0 { 30 } else { cfg.count };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut table: Vec<(BigInt, BigInt)> = Vec::new();
    for case in 0..count {
        let a = random_matrix(&mut rng, 3, 5, -2, 2);
        out.cases += 1;
        let circuits = matrix_circuits(&a);
        let graver = match graver_basis(&a, None) {
            Ok(g) => g,
            Err(e) => {
                out.failures.push(format!("case {case}: graver failed: {e}"));
                continue;
            }
        };
        for c in &circuits.vectors {
            out.check(graver.vectors.contains(c), || {
                format!("case {case}: circuit {:?} missing from the Graver basis", c.0)
            });
        }
        let b = random_row_ops(&a, cfg.seed ^ (case as u64 + 77), 3);
        out.check(matrix_circuits(&b).vectors == circuits.vectors, || {
            format!("case {case}: circuits changed under row operations")
        });
        match graver_basis(&b, None) {
            Ok(gb) => out.check(gb.vectors == graver.vectors, || {
                format!("case {case}: Graver basis changed under row operations")
            }),
            Err(e) => out.failures.push(format!("case {case}: graver on equivalent failed: {e}")),
        }
        if let (Some(c1), Some(g1)) = (circuits.c1.clone(), graver.g1.clone()) {
            table.push((c1, g1));
        }
    }
    table.sort();
    table.dedup();
    out.notes.push("g1 versus c1 (observed pairs):".to_string());
    for (c1, g1) in table {
        out.notes.push(format!("  c1 = {c1}  g1 = {g1}"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(name: &str, count: usize) -> SuiteOutcome {
        let cfg = SuiteConfig { seed: 7, count, field: FieldSpec::Rationals };
        let out = run_suite(name, &cfg).unwrap();
        assert!(out.pass(), "{name} failures: {:#?}", out.failures);
        out
    }

    #[test]
    fn td_p_small() {
        assert!(run("tdP", 25).cases == 25);
    }

    #[test]
    fn td_i_small() {
        run("tdI", 15);
    }

    #[test]
    fn orig_eq_small() {
        run("orig-eq", 15);
    }

    #[test]
    fn equiv_small() {
        run("equiv", 25);
    }

    #[test]
    fn circuit_bound_small() {
        assert_eq!(run("circuit-bound", 25).cases, 25);
    }

    #[test]
    fn graph_reduction_exhaustive() {
        let cfg = SuiteConfig { seed: 1, count: 0, field: FieldSpec::PrimeField(3) };
        let out = run_suite("graph-reduction", &cfg).unwrap();
        assert!(out.pass(), "graph-reduction failures: {:#?}", out.failures);
        assert_eq!(out.cases, 48);
    }

    #[test]
    fn graph_reduction_rationals() {
        let cfg = SuiteConfig { seed: 1, count: 0, field: FieldSpec::Rationals };
        let out = run_suite("graph-reduction", &cfg).unwrap();
        assert!(out.pass(), "graph-reduction failures: {:#?}", out.failures);
    }

    #[test]
    fn a_contract_small() {
        run("a-contract", 60);
    }

    #[test]
    fn graver_small() {
        let out = run("graver", 12);
        assert!(out.notes.iter().any(|n| n.contains("g1 versus c1")));
    }

    #[test]
    fn gn_small() {
        let cfg = SuiteConfig { seed: 7, count: 2, field: FieldSpec::Rationals };
        let out = run_suite("gn", &cfg).unwrap();
        assert!(out.pass(), "gn failures: {:#?}", out.failures);
    }

    #[test]
    fn unknown_suite_is_none() {
        assert!(run_suite("nope", &SuiteConfig::default()).is_none());
    }

    #[test]
    fn json_is_deterministic() {
        let cfg = SuiteConfig { seed: 3, count: 5, field: FieldSpec::Rationals };
        let a = run_suite("tdP", &cfg).unwrap().to_json().to_string();
        let b = run_suite("tdP", &cfg).unwrap().to_json().to_string();
        assert_eq!(a, b);
    }
}
