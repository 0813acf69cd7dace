//! Exact rational matrix analysis: rank, kernel, entry complexity, derived
//! graphs and their tree-depths, all without floating point.

use graver_forge::graph::{dual_graph, incidence_graph, primal_graph, tree_depth};
use graver_forge::matrix::{entry_complexity, kernel_basis, row_space_equal, RatMatrix};

fn main() {
    let a = RatMatrix::from_i64(&[&[1, 2, 0, 1], &[0, 1, 2, -1], &[1, 0, 1, 3]]);
    println!("matrix:\n{}", a.to_rmx());
    println!("rank: {}", a.rank());
    println!("entry complexity: {}", entry_complexity(&a));

    for v in kernel_basis(&a) {
        println!("kernel vector: {:?}", v.0.iter().map(|x| x.to_string()).collect::<Vec<_>>());
    }

    let (r, pivots) = a.rref();
    println!("rref pivots: {pivots:?}");
    assert_eq!(row_space_equal(&a, &r), Ok(true));

    for (name, g) in [
        ("primal", primal_graph(&a)),
        ("dual", dual_graph(&a)),
        ("incidence", incidence_graph(&a)),
    ] {
        let (value, forest) = tree_depth(&g, None).unwrap();
        println!("{name} graph: {} vertices, tree-depth {value} (forest height {})",
            g.n(), forest.height());
    }
}
