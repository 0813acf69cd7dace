//! Balanced-independent-set reductions: build vertex-edge matroids of
//! bipartite graphs whose depth parameters encode the answer, and check the
//! thresholds against a brute-force set search.

use graver_forge::depth::{contraction_depth, cstar_depth, SubspaceConfig};
use graver_forge::forge::{
    balanced_independent_set, hardness_instance, matroid_from_graph, quotient_graph,
    HardnessVariant,
};
use graver_forge::graph::Graph;
use graver_forge::matrix::Rational;
use graver_forge::matroid::FieldSpec;

fn main() {
    // a perfect matching between X = {0,1} and Y = {2,3}
    let g = Graph::with_edges(4, &[(0, 2), (1, 3)]);
    let x = [0, 1];
    let y = [2, 3];
    let sub = SubspaceConfig::default();

    for k in 0..=2usize {
        let has_set = balanced_independent_set(&g, &x, &y, k).unwrap();
        let inst =
            hardness_instance(&g, &x, &y, k, FieldSpec::PrimeField(3), HardnessVariant::Cstar)
                .unwrap();
        let csd = cstar_depth(&inst.matroid, None, &sub).unwrap();
        println!(
            "k = {k}: balanced set {has_set}, csd = {} vs threshold {}",
            csd.value, inst.threshold
        );
        assert_eq!(has_set, csd.value <= inst.threshold);

        let doubled =
            hardness_instance(&g, &x, &y, k, FieldSpec::PrimeField(3), HardnessVariant::Cd2M)
                .unwrap();
        let cd = contraction_depth(&doubled.matroid, None).unwrap();
        assert_eq!(has_set, cd.value <= doubled.threshold);
    }

    // quotient of a graph by a subspace: vertices in the span vanish, edges
    // whose span meets the subspace are contracted
    let lm = matroid_from_graph(&g, FieldSpec::Rationals).unwrap();
    println!("vertex-edge matroid: {} elements", lm.matroid.ground_size());
    let e0: Vec<Rational> = [1, 0, 0, 0]
        .iter()
        .map(|&x| Rational::from_integer(x.into()))
        .collect();
    let q = quotient_graph(&g, &[e0]);
    println!("after contracting <e_0>: {} vertices, {} edges", q.n(), q.m());
}
