//! The recursive gadget family G_n: 2n-cycles with nested copies, whose
//! cycle matroids have short circuits but large contraction-depth.

use graver_forge::depth::contraction_depth;
use graver_forge::forge::gn_family;
use graver_forge::matroid::FieldSpec;

fn main() {
    for n in 1..=3usize {
        let inst = gn_family(n);
        let paths = inst.path_lengths();
        let cycles = inst.cycle_lengths();
        println!(
            "G_{n}: {} vertices, {} edges; r-b path lengths {:?} (within [{n}, {}]), max circuit {} (<= {})",
            inst.vertices,
            inst.edges.len(),
            (paths.iter().min().unwrap(), paths.iter().max().unwrap()),
            2 * n,
            cycles.iter().max().unwrap(),
            4 * n
        );
        assert!(paths.iter().all(|&l| n <= l && l <= 2 * n));
        assert!(cycles.iter().all(|&c| c <= 4 * n));

        if n <= 2 {
            let m = inst.cycle_matroid(FieldSpec::PrimeField(3)).unwrap();
            let cd = contraction_depth(&m, None).unwrap();
            println!("  cd(M_{n}) = {} >= C({n},2) = {}", cd.value, n * (n - 1) / 2);
            assert!(cd.value >= n * (n - 1) / 2);
        }
    }
}
