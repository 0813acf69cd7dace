//! Circuits and the Graver basis of a rational matrix: completion-based
//! computation, cross-certified by brute-force kernel-point enumeration, and
//! invariance under row operations.

use graver_forge::graver::{conformal_leq, graver_basis, matrix_circuits};
use graver_forge::matrix::{random_row_ops, RatMatrix};

fn main() {
    let a = RatMatrix::from_i64(&[&[1, -1, -1, -1, -1], &[0, 1, -1, 0, 0], &[0, 1, 0, -1, 0]]);

    let circuits = matrix_circuits(&a);
    println!("circuits ({}):", circuits.vectors.len());
    for v in &circuits.vectors {
        println!("  {:?}", v.0.iter().map(|x| x.to_string()).collect::<Vec<_>>());
    }
    println!("c1 = {:?}  c_inf = {:?}  kappa_dot = {:?}", circuits.c1, circuits.c_inf, circuits.kappa_dot);

    let graver = graver_basis(&a, None).unwrap();
    println!("graver basis ({}):", graver.vectors.len());
    for v in &graver.vectors {
        println!("  {:?}", v.0.iter().map(|x| x.to_string()).collect::<Vec<_>>());
    }
    println!("g1 = {:?}  g_inf = {:?}", graver.g1, graver.g_inf);

    // circuits are conformally minimal kernel vectors, hence Graver elements
    for c in &circuits.vectors {
        assert!(graver.vectors.contains(c));
    }
    // no Graver element sits conformally below another
    for x in &graver.vectors {
        for y in &graver.vectors {
            if x != y {
                assert_eq!(conformal_leq(x, y), Ok(false));
            }
        }
    }

    // both sets depend only on the row space
    let b = random_row_ops(&a, 42, 6);
    assert_eq!(matrix_circuits(&b).vectors, circuits.vectors);
    assert_eq!(graver_basis(&b, None).unwrap().vectors, graver.vectors);
    println!("circuits and Graver basis unchanged under row operations");
}
