//! Acceptance criteria, one test per criterion; each prints a single
//! pass/fail line (visible with `--nocapture`).

use std::time::{Duration, Instant};

use graver_forge::matrix::{row_space_equal, RatMatrix};
use graver_forge::graph::{dual_graph, incidence_graph, tree_depth};
use graver_forge::graver::graver_basis;
use graver_forge::matrix::IntVector;
use graver_forge::matroid::FieldSpec;
use graver_forge::precondition::{alg_td_d, PreconditionOutcome};
use graver_forge::validate::{run_suite, SuiteConfig, SuiteOutcome};

fn report(n: usize, desc: &str, ok: bool, elapsed: Duration) {
    println!(
        "criterion {n}: {} — {desc} ({:.2}s)",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    assert!(ok, "criterion {n} failed: {desc}");
}

fn intro_matrix() -> RatMatrix {
    RatMatrix::from_i64(&[
        &[2, 2, 1, 2, 1, 3, 1],
        &[2, 1, 1, 1, 2, 1, 1],
        &[2, 2, 2, 2, 2, 2, 1],
        &[2, 1, 1, 2, 2, 1, 1],
        &[2, 2, 1, 2, 1, 3, 2],
    ])
}

fn unbalanced_matrix(t: usize) -> RatMatrix {
    let mut rows: Vec<Vec<i64>> = Vec::new();
    let mut first = vec![-1i64; t];
    first[0] = 1;
    rows.push(first);
    for i in 2..t {
        let mut r = vec![0i64; t];
        r[1] = 1;
        r[i] = -1;
        rows.push(r);
    }
    let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
    RatMatrix::from_i64(&refs)
}

fn suite(name: &str, count: usize, field: FieldSpec) -> SuiteOutcome {
    let cfg = SuiteConfig { seed: 1, count, field };
    let out = run_suite(name, &cfg).expect("known suite");
    if !out.pass() {
        for f in &out.failures {
            eprintln!("  {name} failure: {f}");
        }
    }
    out
}

#[test]
fn criterion_1_intro_dual_sparsification() {
    let start = Instant::now();
    let a = intro_matrix();
    let td_before = tree_depth(&dual_graph(&a), None).unwrap().0;
    let mut ok = td_before == 5;
    match alg_td_d(&a, 2, None) {
        Ok(PreconditionOutcome::Transformed { matrix, .. }) => {
            ok &= tree_depth(&dual_graph(&matrix), None).unwrap().0 == 2;
            ok &= row_space_equal(&a, &matrix) == Ok(true);
        }
        _ => ok = false,
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(30);
    report(1, "5x7 worked example: td_D 5, dual-sparsified to td_D 2", ok, elapsed);
}

#[test]
fn criterion_2_unbalanced_incidence_and_graver() {
    let start = Instant::now();
    let a = unbalanced_matrix(5);
    let mut ok = tree_depth(&incidence_graph(&a), None).unwrap().0 == 4;
    match graver_basis(&a, None) {
        Ok(g) => {
            ok &= g.vectors == vec![IntVector::from_i64(&[4, 1, 1, 1, 1])];
            ok &= g.g1 == Some(8.into());
        }
        Err(_) => ok = false,
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(10);
    report(2, "t=5 worked example: td_I 4 and Graver basis {±(4,1,1,1,1)}, g1 = 8", ok, elapsed);
}

#[test]
fn criterion_3_primal_suite() {
    let start = Instant::now();
    let out = suite("tdP", 200, FieldSpec::Rationals);
    let elapsed = start.elapsed();
    let ok = out.pass() && out.cases == 200 && elapsed < Duration::from_secs(300);
    report(3, "200 seeded matrices + 10 equivalents each: td_P sparsified = dd, dd <= td_P", ok, elapsed);
}

#[test]
fn criterion_4_dual_circuit_suite() {
    let start = Instant::now();
    let out = suite("equiv", 200, FieldSpec::Rationals);
    let ok = out.pass() && out.cases > 0;
    report(4, "circuit-driven dual sparsification: td_D <= c1^2, ec <= 2 log2(c1+1), kernel kept", ok, start.elapsed());
}

#[test]
fn criterion_5_circuit_bound_suite() {
    let start = Instant::now();
    let out = suite("circuit-bound", 100, FieldSpec::Rationals);
    let ok = out.pass() && out.cases == 100;
    report(5, "100 random matroids: log2 k <= csd <= k^2, principal trees verify", ok, start.elapsed());
}

#[test]
fn criterion_6_graph_reduction_exhaustive() {
    let start = Instant::now();
    let out = suite("graph-reduction", 0, FieldSpec::PrimeField(3));
    let elapsed = start.elapsed();
    let ok = out.pass() && out.cases == 48 && elapsed < Duration::from_secs(600);
    report(6, "all 16 bipartite graphs, k in {0,1,2}: three-way equivalence over GF(3)", ok, elapsed);
}

#[test]
fn criterion_7_subspace_contraction_suite() {
    let start = Instant::now();
    let out = suite("a-contract", 500, FieldSpec::Rationals);
    let ok = out.pass() && out.cases == 500;
    report(7, "500 random (graph, subspace) pairs: component inequality", ok, start.elapsed());
}

#[test]
fn criterion_8_gadget_family() {
    let start = Instant::now();
    let out = suite("gn", 0, FieldSpec::Rationals);
    let elapsed = start.elapsed();
    let ok = out.pass() && out.cases == 3 && elapsed < Duration::from_secs(600);
    report(8, "gadget family n <= 3: path lengths, circuit sizes, cd lower bound", ok, elapsed);
}

#[test]
fn criterion_9_graver_cross_certification() {
    let start = Instant::now();
    let out = suite("graver", 0, FieldSpec::Rationals);
    let ok = out.pass()
        && out.cases > 0
        && out.notes.iter().any(|n| n.contains("g1 versus c1"));
    report(9, "Graver completion vs box enumeration, circuits within basis, row-op invariance", ok, start.elapsed());
}
