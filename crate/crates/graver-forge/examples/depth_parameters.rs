//! The five matroid depth parameters of a column matroid, with witness
//! decomposition trees verified independently of the search.

use graver_forge::depth::{
    cdd_depth, contraction_depth, csdd_depth, cstar_depth, deletion_depth, principal_cstar_tree,
    verify_cstar_tree, verify_tree, SubspaceConfig,
};
use graver_forge::matrix::RatMatrix;
use graver_forge::matroid::{FieldSpec, LinearMatroid};

fn main() {
    let a = RatMatrix::from_i64(&[&[1, 2, 0], &[0, 1, 2]]);
    let m = LinearMatroid::matroid_of(&a, FieldSpec::Rationals).unwrap();
    let sub = SubspaceConfig::default();

    let dd = deletion_depth(&m, None).unwrap();
    let cd = contraction_depth(&m, None).unwrap();
    let cdd = cdd_depth(&m, None).unwrap();
    let csd = cstar_depth(&m, None, &sub).unwrap();
    let csdd = csdd_depth(&m, None, &sub).unwrap();

    for rep in [&dd, &cd, &cdd, &csd, &csdd] {
        println!(
            "{}: {} ({})",
            rep.name,
            rep.value,
            match rep.note.as_deref() {
                Some(n) => n,
                None => "exact",
            }
        );
        assert_eq!(verify_tree(&m, &rep.witness), Ok(true));
    }

    // the greedy principal tree witnesses csd <= k^2 for circuit size k
    let principal = principal_cstar_tree(&m).unwrap();
    assert_eq!(verify_cstar_tree(&m, &principal), Ok(true));
    println!("principal contraction*-tree depth: {}", principal.depth());
    println!("witness JSON:\n{}", csd.witness.to_json());
}
