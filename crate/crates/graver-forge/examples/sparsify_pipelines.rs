//! Row-operation preconditioners: transform a matrix into an equivalent one
//! (same row space, kernel and column matroid) whose primal, dual or
//! incidence graph has certified small tree-depth.

use graver_forge::depth::{csdd_depth, SubspaceConfig};
use graver_forge::graph::{dual_graph, incidence_graph, primal_graph, tree_depth};
use graver_forge::matrix::{row_space_equal, RatMatrix};
use graver_forge::matroid::{FieldSpec, LinearMatroid};
use graver_forge::precondition::{alg_td_d, alg_td_p, incidence_sparsify, PreconditionOutcome};

fn td(g: &graver_forge::graph::Graph) -> usize {
    tree_depth(g, None).unwrap().0
}

fn main() {
    // the 5x7 worked example: dual tree-depth 5, but an equivalent matrix
    // with dual tree-depth 2 exists
    let a = RatMatrix::from_i64(&[
        &[2, 2, 1, 2, 1, 3, 1],
        &[2, 1, 1, 1, 2, 1, 1],
        &[2, 2, 2, 2, 2, 2, 1],
        &[2, 1, 1, 2, 2, 1, 1],
        &[2, 2, 1, 2, 1, 3, 2],
    ]);
    println!("input dual tree-depth: {}", td(&dual_graph(&a)));
    match alg_td_d(&a, 2, None).unwrap() {
        PreconditionOutcome::Transformed { matrix, bounds, .. } => {
            assert_eq!(row_space_equal(&a, &matrix), Ok(true));
            println!("dual-sparsified: td_D {} ec {}", bounds.td, bounds.ec);
            print!("{}", matrix.to_rmx());
        }
        PreconditionOutcome::NotEquivalent { reason } => println!("rejected: {reason}"),
    }

    // primal pipeline: divisibility screen, prime lift, deletion tree, basis
    // reduction; rejects when no equivalent matrix meets the depth budget
    let b = RatMatrix::from_i64(&[&[1, 2, 0], &[0, 1, 2]]);
    println!("\ninput primal tree-depth: {}", td(&primal_graph(&b)));
    for d in [1, 2] {
        match alg_td_p(&b, d, 3, Some(4.into())).unwrap() {
            PreconditionOutcome::Transformed { bounds, .. } => {
                println!("d = {d}: transformed, td_P {}", bounds.td)
            }
            PreconditionOutcome::NotEquivalent { reason } => println!("d = {d}: {reason}"),
        }
    }

    // incidence pipeline, driven by a contraction*-deletion witness
    let c = RatMatrix::from_i64(&[
        &[1, -1, -1, -1, -1],
        &[0, 1, -1, 0, 0],
        &[0, 1, 0, -1, 0],
        &[0, 1, 0, 0, -1],
    ]);
    let m = LinearMatroid::matroid_of(&c, FieldSpec::Rationals).unwrap();
    let rep = csdd_depth(&m, None, &SubspaceConfig::default()).unwrap();
    let out = incidence_sparsify(&c, &rep.witness).unwrap();
    println!(
        "\nincidence tree-depth: {} -> {} (csdd {})",
        td(&incidence_graph(&c)),
        td(&incidence_graph(&out)),
        rep.value
    );
}
