//! Row-operation preconditioners: given a rational matrix, construct an
//! equivalent matrix (same row space) with certified small primal, dual or
//! incidence tree-depth, plus the two end-to-end decision pipelines.

use crate::depth::{
    cstar_depth, deletion_depth, principal_cstar_tree, resolve_generators, verify_cstar_tree,
    verify_deletion_tree, verify_tree, DecompositionTree, DepthError, DtNode, EdgeMove, Exactness,
    SubspaceConfig, TreeKind,
};
use crate::field::next_prime_above;
use crate::graph::{dual_graph, incidence_graph, primal_graph, tree_depth};
use crate::graver::matrix_circuits;
use crate::matrix::{
    entry_complexity, kernel_basis, reduce_basis_to_identity, MatrixError, RatMatrix, Rational,
};
use crate::matroid::{FieldSpec, FieldVector, LinearMatroid, MatroidError};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PreconditionError {
    #[error("decomposition tree does not certify the matrix")]
    InvalidTree,
    #[error("matrix has full column rank, hence no circuits")]
    NoCircuits,
    #[error("matrix rank must equal its number of rows")]
    RankDeficient,
    #[error("k0 bound {0} exceeds the practical limit; pass kappa explicitly")]
    BudgetExceeded(String),
    #[error("witness carries prime-field generators; a rational witness is required")]
    RationalWitnessRequired,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error("{0}")]
    Depth(String),
}

impl From<DepthError> for PreconditionError {
    fn from(e: DepthError) -> Self {
        match e {
            DepthError::LabelMismatch(_) => PreconditionError::InvalidTree,
            other => PreconditionError::Depth(other.to_string()),
        }
    }
}

/// The divisor κ₀ = lcm(1..k₀) screening circuit entries of matrices with
/// primal tree-depth ≤ d and entry complexity ≤ e, with k₀ ≤ (2^e)^{d!}·(d!)^{d!/2}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Kappa0 {
    pub d: u32,
    pub e: u32,
    pub k0_bound: BigInt,
    pub kappa0: BigInt,
}

const K0_LIMIT: u64 = 1_000_000;

pub fn kappa0_of(d: u32, e: u32) -> Result<Kappa0, PreconditionError> {
    assert!(d >= 1 && e >= 1);
    let fact: u64 = (1..=d as u64).product();
    // 2^{e·d!} alone exceeds the limit once e·d! > 20; stop before a pow blowup.
    let two_exp = e as u64 * fact;
    if two_exp > 63 {
        return Err(PreconditionError::BudgetExceeded(format!("at least 2^{two_exp}")));
    }
    let mut k0 = BigInt::from(2u8).pow(two_exp as u32);
    if d >= 2 {
        k0 *= BigInt::from(fact).pow((fact / 2) as u32);
    }
    match k0.to_u64().filter(|&v| v <= K0_LIMIT) {
        Some(v) => Ok(Kappa0 { d, e, k0_bound: k0.clone(), kappa0: lcm_upto(v) }),
        None => Err(PreconditionError::BudgetExceeded(k0.to_string())),
    }
}

/// lcm(1..=n) as the product of maximal prime powers ≤ n, multiplied with a
/// balanced product tree.
fn lcm_upto(n: u64) -> BigInt {
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    let mut factors: Vec<BigInt> = Vec::new();
    for p in 2..=n {
        if !sieve[p] {
            continue;
        }
        for q in (2 * p..=n).step_by(p) {
            sieve[q] = false;
        }
        let mut pk = p;
        while pk <= n / p {
            pk *= p;
        }
        factors.push(BigInt::from(pk));
    }
    if factors.is_empty() {
        return BigInt::one();
    }
    while factors.len() > 1 {
        factors = factors
            .chunks(2)
            .map(|c| if c.len() == 2 { &c[0] * &c[1] } else { c[0].clone() })
            .collect();
    }
    factors.pop().unwrap()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bounds {
    /// Tree-depth of the relevant derived graph of the output matrix.
    pub td: usize,
    pub ec: u64,
    pub c1: Option<BigInt>,
}

#[derive(Debug, Clone)]
pub enum PreconditionOutcome {
    Transformed {
        matrix: RatMatrix,
        certificate: Option<DecompositionTree>,
        bounds: Bounds,
        exactness: Exactness,
    },
    NotEquivalent {
        reason: String,
    },
}

impl PreconditionOutcome {
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            PreconditionOutcome::Transformed { matrix, certificate, bounds, exactness } => {
                serde_json::json!({
                    "verdict": "transformed",
                    "matrix": matrix.to_rmx(),
                    "certificate": certificate.as_ref().map(|t| t.to_json()),
                    "bounds": {
                        "td": bounds.td,
                        "ec": bounds.ec,
                        "c1": bounds.c1.as_ref().map(|x| x.to_string()),
                    },
                    "exactness": match exactness {
                        Exactness::Exact => "exact",
                        Exactness::UpperBound => "upper-bound",
                    },
                })
            }
            PreconditionOutcome::NotEquivalent { reason } => serde_json::json!({
                "verdict": "not-equivalent",
                "reason": reason,
            }),
        }
    }
}

/// Row-reduce `a` so that the non-loop vertex labels of a deletion
/// decomposition tree become unit columns; the output has primal tree-depth
/// at most the height of the tree.
pub fn primal_sparsify(a: &RatMatrix, t: &DecompositionTree) -> Result<RatMatrix, PreconditionError> {
    let m = LinearMatroid::matroid_of(a, FieldSpec::Rationals)?;
    match verify_deletion_tree(&m, t) {
        Ok(true) => {}
        Ok(false) | Err(DepthError::LabelMismatch(_)) => return Err(PreconditionError::InvalidTree),
        Err(e) => return Err(e.into()),
    }
    let mut basis = Vec::new();
    collect_vertex_labels(&t.root, &mut basis);
    basis.retain(|&c| a.column(c).iter().any(|v| !v.is_zero()));
    let out = reduce_basis_to_identity(a, &basis)?;
    debug_assert_eq!(crate::matrix::row_space_equal(a, &out), Ok(true));
    Ok(out)
}

fn collect_vertex_labels(node: &DtNode, out: &mut Vec<usize>) {
    out.extend(&node.labels);
    for (_, child) in &node.children {
        collect_vertex_labels(child, out);
    }
}

/// Equivalent matrix with dual tree-depth ≤ c₁(A)² and entry complexity
/// ≤ 2⌈log₂(c₁(A)+1)⌉, via the principal contraction*-decomposition tree.
pub fn dual_sparsify_circuit(a: &RatMatrix) -> Result<RatMatrix, PreconditionError> {
    if kernel_basis(a).is_empty() {
        return Err(PreconditionError::NoCircuits);
    }
    let m = LinearMatroid::matroid_of(a, FieldSpec::Rationals)?;
    let t = principal_cstar_tree(&m)?;
    dual_sparsify_from_tree(a, &t)
}

/// Row-reduce `a` so that each edge generator of a contraction*-decomposition
/// tree becomes a unit row, in tree preorder; the output has dual tree-depth
/// at most the depth of the tree.
pub fn dual_sparsify_from_tree(
    a: &RatMatrix,
    t: &DecompositionTree,
) -> Result<RatMatrix, PreconditionError> {
    let m = LinearMatroid::matroid_of(a, FieldSpec::Rationals)?;
    match verify_cstar_tree(&m, t) {
        Ok(true) => {}
        Ok(false) | Err(DepthError::LabelMismatch(_)) => return Err(PreconditionError::InvalidTree),
        Err(e) => return Err(e.into()),
    }
    let resolved = resolve_generators(&m, t)?;
    reduce_by_tree_generators(a, &m, &resolved)
}

/// Equivalent matrix whose incidence tree-depth is at most the witnessed
/// contraction*-deletion-depth plus one.
pub fn incidence_sparsify(
    a: &RatMatrix,
    trace: &DecompositionTree,
) -> Result<RatMatrix, PreconditionError> {
    if !matches!(trace.kind, TreeKind::CstarGeneral | TreeKind::CstarPrincipal) {
        return Err(PreconditionError::InvalidTree);
    }
    let m = LinearMatroid::matroid_of(a, FieldSpec::Rationals)?;
    match verify_tree(&m, trace) {
        Ok(true) => {}
        Ok(false) | Err(DepthError::LabelMismatch(_)) => return Err(PreconditionError::InvalidTree),
        Err(e) => return Err(e.into()),
    }
    let resolved = resolve_generators(&m, trace)?;
    let out = reduce_by_tree_generators(a, &m, &resolved)?;
    debug_assert!(
        tree_depth(&incidence_graph(&out), None).unwrap().0 <= trace.depth() + 1,
        "incidence tree-depth exceeds the witnessed csdd + 1"
    );
    Ok(out)
}

/// Shared reduction: gather, per tree region, a basis of the region's column
/// span — contraction generators in preorder, plus the column of a deleted
/// element whenever it is not already covered — then complete the basis to an
/// invertible E and return E⁻¹·A, so each gathered vector becomes a unit row.
/// Every column's support then stays within its root-path region, which caps
/// the tree-depth of the derived graph. Rows past the column rank come out
/// zero and are kept.
fn reduce_by_tree_generators(
    a: &RatMatrix,
    m: &LinearMatroid,
    t: &DecompositionTree,
) -> Result<RatMatrix, PreconditionError> {
    let mut gens: Vec<Vec<Rational>> = Vec::new();
    collect_region(a, m, &t.root, &m.live(), &mut Vec::new(), &mut gens)?;
    debug_assert_eq!(RatMatrix::from_columns(a.rows(), &gens).rank(), gens.len());
    let e = complete_to_invertible(a.rows(), &gens);
    let inv = e.inverse().expect("completed matrix is invertible");
    let out = inv.mul(a);
    debug_assert_eq!(crate::matrix::row_space_equal(a, &out), Ok(true));
    Ok(out)
}

/// Children are matched to the positive-rank components positionally, the
/// same convention the tree verifier replays.
fn collect_region(
    a: &RatMatrix,
    m: &LinearMatroid,
    node: &DtNode,
    elems: &[usize],
    path: &mut Vec<FieldVector>,
    out: &mut Vec<Vec<Rational>>,
) -> Result<(), PreconditionError> {
    let cur = m.restriction(elems).contract_subspace(path)?;
    let mut active: Vec<Vec<usize>> = Vec::new();
    for comp in cur.components() {
        if cur.rank(&comp)? > 0 {
            active.push(comp);
        }
    }
    for ((mv, child), comp) in node.children.iter().zip(&active) {
        match mv {
            EdgeMove::Contract(x) => {
                out.push(a.column(*x));
                path.push(m.vector_of(*x).expect("edge label is a live element"));
                collect_region(a, m, child, comp, path, out)?;
                path.pop();
            }
            EdgeMove::ContractSubspace(fv) => {
                let FieldVector::Q(v) = fv else {
                    return Err(PreconditionError::RationalWitnessRequired);
                };
                out.push(v.clone());
                path.push(fv.clone());
                collect_region(a, m, child, comp, path, out)?;
                path.pop();
            }
            EdgeMove::Delete(x) => {
                let rest: Vec<usize> = comp.iter().copied().filter(|e| e != x).collect();
                let mark = out.len();
                collect_region(a, m, child, &rest, path, out)?;
                // the deleted column must be spanned by its region's rows
                let mut cols: Vec<Vec<Rational>> = path
                    .iter()
                    .map(|g| match g {
                        FieldVector::Q(v) => v.clone(),
                        FieldVector::P(_) => unreachable!("path vectors are rational"),
                    })
                    .collect();
                cols.extend_from_slice(&out[mark..]);
                let base_rank = RatMatrix::from_columns(a.rows(), &cols).rank();
                cols.push(a.column(*x));
                if RatMatrix::from_columns(a.rows(), &cols).rank() > base_rank {
                    out.push(a.column(*x));
                }
            }
        }
    }
    Ok(())
}

fn complete_to_invertible(rows: usize, gens: &[Vec<Rational>]) -> RatMatrix {
    let mut cols: Vec<Vec<Rational>> = gens.to_vec();
    for j in 0..rows {
        if cols.len() == rows {
            break;
        }
        let mut unit = vec![Rational::zero(); rows];
        unit[j] = Rational::one();
        cols.push(unit);
        if RatMatrix::from_columns(rows, &cols).rank() < cols.len() {
            cols.pop();
        }
    }
    RatMatrix::from_columns(rows, &cols)
}

/// Decide whether `a` is equivalent to a matrix with primal tree-depth ≤ d
/// and entry complexity ≤ e; on success output such a matrix with a deletion
/// decomposition tree as certificate. The κ₀ divisibility screen uses
/// `kappa_override` when the exact κ₀ is impractically large.
pub fn alg_td_p(
    a: &RatMatrix,
    d: u32,
    e: u32,
    kappa_override: Option<BigInt>,
) -> Result<PreconditionOutcome, PreconditionError> {
    if a.rank() != a.rows() {
        return Err(PreconditionError::RankDeficient);
    }
    let kappa0 = match kappa_override {
        Some(k) => k,
        None => kappa0_of(d, e)?.kappa0,
    };
    // Diagonalize on the pivot columns; every nonzero entry of A_I is a ratio
    // of two entries of a circuit of A, so both parts must divide κ₀.
    let (a_i, _) = a.rref();
    for i in 0..a_i.rows() {
        for j in 0..a_i.cols() {
            let x = a_i.at(i, j);
            if !x.is_zero()
                && (!(&kappa0 % x.numer().abs()).is_zero() || !(&kappa0 % x.denom()).is_zero())
            {
                return Ok(PreconditionOutcome::NotEquivalent {
                    reason: format!(
                        "diagonalized entry {}/{} does not divide kappa = {}",
                        x.numer(),
                        x.denom(),
                        kappa0
                    ),
                });
            }
        }
    }
    let a0 = a_i.scale(&Rational::from_integer(kappa0.clone()));
    debug_assert!(a0.is_integral());
    let kappa_sq = &kappa0 * &kappa0;
    let p = match kappa_sq.to_u64().filter(|&v| v < u64::MAX / 4) {
        Some(v) => next_prime_above(v),
        None => return Err(PreconditionError::BudgetExceeded(kappa_sq.to_string())),
    };
    let m_p = LinearMatroid::matroid_of(&a0, FieldSpec::PrimeField(p))?;
    let report = match deletion_depth(&m_p, Some(d as usize)) {
        Ok(r) => r,
        Err(DepthError::ExceedsBudget(_)) => {
            return Ok(PreconditionOutcome::NotEquivalent {
                reason: format!("deletion-depth over GF({p}) exceeds {d}"),
            })
        }
        Err(e) => return Err(e.into()),
    };
    // The GF(p) witness must replay over the rationals, else the two column
    // matroids differ and no equivalent sparse matrix exists.
    let m_q = LinearMatroid::matroid_of(a, FieldSpec::Rationals)?;
    match verify_deletion_tree(&m_q, &report.witness) {
        Ok(true) => {}
        Ok(false) | Err(DepthError::LabelMismatch(_)) => {
            return Ok(PreconditionOutcome::NotEquivalent {
                reason: format!("GF({p}) deletion tree is not valid over the rationals"),
            })
        }
        Err(e) => return Err(e.into()),
    }
    let out = primal_sparsify(a, &report.witness)?;
    for i in 0..out.rows() {
        for j in 0..out.cols() {
            let x = out.at(i, j);
            if x.numer().abs() > kappa0 || *x.denom() > kappa0 {
                return Ok(PreconditionOutcome::NotEquivalent {
                    reason: format!("c_inf of the input exceeds kappa = {kappa0}"),
                });
            }
        }
    }
    let td = tree_depth(&primal_graph(&out), None).unwrap().0;
    debug_assert!(td <= d as usize);
    Ok(PreconditionOutcome::Transformed {
        matrix: out.clone(),
        certificate: Some(report.witness),
        bounds: Bounds { td, ec: entry_complexity(&out), c1: None },
        exactness: Exactness::Exact,
    })
}

/// Decide whether `a` is equivalent to a matrix with dual tree-depth ≤ d;
/// on success output a matrix realizing the optimal dual tree-depth
/// csd(M(A)), certified by a contraction*-decomposition tree. The working
/// circuit bound k defaults to c₁(A).
pub fn alg_td_d(
    a: &RatMatrix,
    d: u32,
    k_override: Option<BigInt>,
) -> Result<PreconditionOutcome, PreconditionError> {
    if kernel_basis(a).is_empty() {
        // No circuits: equivalent to the unit matrix, possibly with zero rows.
        let cols: Vec<usize> = (0..a.cols()).collect();
        let out = reduce_basis_to_identity(a, &cols)?;
        let td = tree_depth(&dual_graph(&out), None).unwrap().0;
        return Ok(PreconditionOutcome::Transformed {
            matrix: out.clone(),
            certificate: None,
            bounds: Bounds { td, ec: entry_complexity(&out), c1: None },
            exactness: Exactness::Exact,
        });
    }
    let circuits = matrix_circuits(a);
    let c1 = circuits.c1.clone().expect("kernel is nontrivial");
    let k = k_override.unwrap_or_else(|| c1.clone());
    let sparse = dual_sparsify_circuit(a)?;
    let td_sparse = tree_depth(&dual_graph(&sparse), None).unwrap().0;
    if BigInt::from(td_sparse) > &k * &k || entry_complexity(&sparse) > 2 * k.bits() {
        return Ok(PreconditionOutcome::NotEquivalent {
            reason: format!("c1 of the input exceeds k = {k}"),
        });
    }
    let m = LinearMatroid::matroid_of(a, FieldSpec::Rationals)?;
    let report = cstar_depth(&m, None, &SubspaceConfig::default())?;
    if report.value > d as usize {
        return Ok(PreconditionOutcome::NotEquivalent {
            reason: format!(
                "optimal dual tree-depth is {} (exactness: {:?}), larger than {}",
                report.value, report.exactness, d
            ),
        });
    }
    // Rebuild from the optimal witness when it carries rational generators;
    // a prime-field-only witness still certifies the value, but the circuit
    // construction is the best rational rebuild available.
    let (out, certificate) = match dual_sparsify_from_tree(a, &report.witness) {
        Ok(out) => (out, Some(report.witness)),
        Err(PreconditionError::RationalWitnessRequired) => (sparse, Some(report.witness)),
        Err(e) => return Err(e),
    };
    let td = tree_depth(&dual_graph(&out), None).unwrap().0;
    Ok(PreconditionOutcome::Transformed {
        matrix: out.clone(),
        certificate,
        bounds: Bounds { td, ec: entry_complexity(&out), c1: Some(c1) },
        exactness: report.exactness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::depth::csdd_depth;
    use crate::matrix::{random_row_ops, row_space_equal};

    fn band() -> RatMatrix {
        RatMatrix::from_i64(&[&[1, 2, 0], &[0, 1, 2]])
    }

    fn intro_left() -> RatMatrix {
        RatMatrix::from_i64(&[
            &[2, 2, 1, 2, 1, 3, 1],
            &[2, 1, 1, 1, 2, 1, 1],
            &[2, 2, 2, 2, 2, 2, 1],
            &[2, 1, 1, 2, 2, 1, 1],
            &[2, 2, 1, 2, 1, 3, 2],
        ])
    }

    /// One column per value 1..t-1 in each row of the transposed-incidence
    /// form: kernel is spanned by (t-1, 1, ..., 1).
    fn unbalanced(t: usize) -> RatMatrix {
        let mut m = RatMatrix::zero(t - 1, t);
        *m.at_mut(0, 0) = Rational::one();
        for j in 1..t {
            *m.at_mut(0, j) = -Rational::one();
        }
        for i in 1..t - 1 {
            *m.at_mut(i, 1) = Rational::one();
            *m.at_mut(i, i + 1) = -Rational::one();
        }
        m
    }

    #[test]
    fn kappa0_small_values() {
        let k = kappa0_of(1, 1).unwrap();
        assert_eq!((k.k0_bound, k.kappa0), (BigInt::from(2), BigInt::from(2)));
        let k = kappa0_of(2, 1).unwrap();
        assert_eq!((k.k0_bound, k.kappa0), (BigInt::from(8), BigInt::from(840)));
        let k = kappa0_of(1, 2).unwrap();
        assert_eq!((k.k0_bound, k.kappa0), (BigInt::from(4), BigInt::from(12)));
    }

    #[test]
    fn kappa0_budget() {
        assert!(matches!(kappa0_of(3, 3), Err(PreconditionError::BudgetExceeded(_))));
    }

    #[test]
    fn lcm_matches_naive() {
        let mut naive = BigInt::one();
        for n in 1..=40u64 {
            naive = num_integer::Integer::lcm(&naive, &BigInt::from(n));
            assert_eq!(lcm_upto(n), naive);
        }
    }

    #[test]
    fn primal_sparsify_identity() {
        let a = RatMatrix::identity(3);
        let m = LinearMatroid::matroid_of(&a, FieldSpec::Rationals).unwrap();
        let t = deletion_depth(&m, None).unwrap();
        assert_eq!(t.value, 1);
        let out = primal_sparsify(&a, &t.witness).unwrap();
        assert_eq!(out, a);
    }

    #[test]
    fn primal_sparsify_band_reaches_deletion_depth() {
        let a = band();
        let m = LinearMatroid::matroid_of(&a, FieldSpec::Rationals).unwrap();
        let rep = deletion_depth(&m, None).unwrap();
        assert_eq!(rep.value, 2);
        let out = primal_sparsify(&a, &rep.witness).unwrap();
        assert_eq!(row_space_equal(&a, &out), Ok(true));
        assert_eq!(tree_depth(&primal_graph(&out), None).unwrap().0, 2);
    }

    #[test]
    fn deletion_depth_lower_bounds_primal_td_of_equivalents() {
        let a = band();
        let m = LinearMatroid::matroid_of(&a, FieldSpec::Rationals).unwrap();
        let dd = deletion_depth(&m, None).unwrap().value;
        for seed in 0..6 {
            let b = random_row_ops(&a, seed, 4);
            let td = tree_depth(&primal_graph(&b), None).unwrap().0;
            assert!(dd <= td, "dd {dd} > td_P {td} for seed {seed}");
        }
    }

    #[test]
    fn dual_sparsify_band_bounds() {
        let a = band();
        let c = matrix_circuits(&a);
        assert_eq!(c.c1, Some(BigInt::from(7)));
        let out = dual_sparsify_circuit(&a).unwrap();
        assert_eq!(row_space_equal(&a, &out), Ok(true));
        assert!(tree_depth(&dual_graph(&out), None).unwrap().0 <= 49);
        assert!(entry_complexity(&out) <= 6);
        // circuits are invariant under row operations
        let mut before = c.vectors;
        let mut after = matrix_circuits(&out).vectors;
        before.sort();
        after.sort();
        assert_eq!(before, after);
    }

    #[test]
    fn dual_sparsify_unbalanced_entry_complexity() {
        let a = unbalanced(5);
        let c = matrix_circuits(&a);
        assert_eq!(c.c1, Some(BigInt::from(8)));
        let out = dual_sparsify_circuit(&a).unwrap();
        assert!(entry_complexity(&out) <= 8);
    }

    #[test]
    fn dual_sparsify_intro_matrix() {
        let a = intro_left();
        let c1 = matrix_circuits(&a).c1.unwrap();
        let out = dual_sparsify_circuit(&a).unwrap();
        assert_eq!(row_space_equal(&a, &out), Ok(true));
        let td = tree_depth(&dual_graph(&out), None).unwrap().0;
        assert!(BigInt::from(td) <= &c1 * &c1);
    }

    #[test]
    fn dual_sparsify_no_circuits() {
        assert_eq!(
            dual_sparsify_circuit(&RatMatrix::identity(3)),
            Err(PreconditionError::NoCircuits)
        );
    }

    #[test]
    fn dual_sparsify_from_optimal_witness_intro() {
        let a = intro_left();
        let m = LinearMatroid::matroid_of(&a, FieldSpec::Rationals).unwrap();
        let rep = cstar_depth(&m, None, &SubspaceConfig::default()).unwrap();
        assert_eq!(rep.value, 2);
        let out = dual_sparsify_from_tree(&a, &rep.witness).unwrap();
        assert_eq!(row_space_equal(&a, &out), Ok(true));
        assert_eq!(tree_depth(&dual_graph(&out), None).unwrap().0, 2);
    }

    #[test]
    fn incidence_sparsify_zero_matrix() {
        let a = RatMatrix::zero(2, 2);
        let m = LinearMatroid::matroid_of(&a, FieldSpec::Rationals).unwrap();
        let rep = csdd_depth(&m, None, &SubspaceConfig::default()).unwrap();
        assert_eq!(rep.value, 0);
        let out = incidence_sparsify(&a, &rep.witness).unwrap();
        assert_eq!(tree_depth(&incidence_graph(&out), None).unwrap().0, 1);
    }

    #[test]
    fn incidence_sparsify_single_column() {
        let a = RatMatrix::from_i64(&[&[3], &[1]]);
        let m = LinearMatroid::matroid_of(&a, FieldSpec::Rationals).unwrap();
        let rep = csdd_depth(&m, None, &SubspaceConfig::default()).unwrap();
        assert_eq!(rep.value, 1);
        let out = incidence_sparsify(&a, &rep.witness).unwrap();
        assert_eq!(tree_depth(&incidence_graph(&out), None).unwrap().0, 2);
    }

    #[test]
    fn incidence_sparsify_unbalanced() {
        let a = unbalanced(5);
        // the raw matrix has incidence tree-depth 4 ...
        assert_eq!(tree_depth(&incidence_graph(&a), None).unwrap().0, 4);
        // ... but its matroid is U_{4,5}, whose csdd is 2 (delete one element,
        // then contract each of the four resulting coloops), so an equivalent
        // matrix with incidence tree-depth 3 exists.
        let m = LinearMatroid::matroid_of(&a, FieldSpec::Rationals).unwrap();
        let rep = csdd_depth(&m, None, &SubspaceConfig::default()).unwrap();
        assert_eq!(rep.value, 2);
        let out = incidence_sparsify(&a, &rep.witness).unwrap();
        assert_eq!(row_space_equal(&a, &out), Ok(true));
        assert_eq!(tree_depth(&incidence_graph(&out), None).unwrap().0, 3);
    }

    #[test]
    fn alg_td_p_identity() {
        let out = alg_td_p(&RatMatrix::identity(3), 1, 1, None).unwrap();
        match out {
            PreconditionOutcome::Transformed { matrix, bounds, .. } => {
                assert_eq!(matrix, RatMatrix::identity(3));
                assert_eq!(bounds.td, 1);
            }
            other => panic!("expected transformed, got {:?}", other.to_json()),
        }
    }

    #[test]
    fn alg_td_p_band_with_override() {
        let a = band();
        let out = alg_td_p(&a, 2, 2, Some(BigInt::from(4))).unwrap();
        match out {
            PreconditionOutcome::Transformed { matrix, bounds, .. } => {
                assert_eq!(row_space_equal(&a, &matrix), Ok(true));
                assert!(bounds.td <= 2);
            }
            other => panic!("expected transformed, got {:?}", other.to_json()),
        }
    }

    #[test]
    fn alg_td_p_band_depth_one_rejected() {
        let out = alg_td_p(&band(), 1, 2, Some(BigInt::from(4))).unwrap();
        assert!(matches!(out, PreconditionOutcome::NotEquivalent { .. }));
    }

    #[test]
    fn alg_td_d_intro_matrix() {
        let a = intro_left();
        match alg_td_d(&a, 2, None).unwrap() {
            PreconditionOutcome::Transformed { matrix, bounds, certificate, .. } => {
                assert_eq!(row_space_equal(&a, &matrix), Ok(true));
                assert_eq!(bounds.td, 2);
                assert!(certificate.is_some());
            }
            other => panic!("expected transformed, got {:?}", other.to_json()),
        }
        assert!(matches!(
            alg_td_d(&a, 1, None).unwrap(),
            PreconditionOutcome::NotEquivalent { .. }
        ));
    }

    #[test]
    fn alg_td_d_full_column_rank() {
        let a = RatMatrix::from_i64(&[&[2, 0], &[1, 3], &[0, 5]]);
        match alg_td_d(&a, 1, None).unwrap() {
            PreconditionOutcome::Transformed { matrix, bounds, .. } => {
                assert_eq!(row_space_equal(&a, &matrix), Ok(true));
                assert_eq!(bounds.td, 1);
                // unit form with a zero row kept
                assert!(matrix.row(2).iter().all(|x| x.is_zero()));
            }
            other => panic!("expected transformed, got {:?}", other.to_json()),
        }
    }
}
