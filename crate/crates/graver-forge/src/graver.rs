//! Circuits 𝒞(A) and the Graver basis 𝒢(A) of a rational matrix, their
//! norms c₁/c_∞/g₁/g_∞ and the divisor κ̇_A.
//!
//! The Graver basis is computed by Pottier-style completion over a lattice
//! basis of the integer kernel, then certified by independently enumerating
//! all integer kernel points in a bounding box and filtering ⊑-minimal ones.

use crate::matrix::{IntVector, RatMatrix, Rational};
use crate::matroid::{FieldSpec, LinearMatroid};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraverError {
    #[error("vectors have different dimensions")]
    DimensionMismatch,
    #[error("verification box (∞-norm {0}) too small: minimal element on the boundary")]
    BoxTooSmall(u64),
    #[error("completion and box enumeration disagree")]
    VerifierMismatch,
    #[error("enumeration too large ({0} points)")]
    TooLarge(u128),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CircuitSet {
    /// One canonical vector per circuit (first nonzero entry positive).
    pub vectors: Vec<IntVector>,
    pub c1: Option<BigInt>,
    pub c_inf: Option<BigInt>,
    /// lcm of the absolute values of all nonzero circuit entries.
    pub kappa_dot: Option<BigInt>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraverSet {
    /// One canonical vector per antipodal pair.
    pub vectors: Vec<IntVector>,
    pub g1: Option<BigInt>,
    pub g_inf: Option<BigInt>,
}

impl CircuitSet {
    pub fn to_json(&self) -> serde_json::Value {
        vectors_json(&self.vectors, &[("c1", &self.c1), ("c_inf", &self.c_inf), ("kappa_dot", &self.kappa_dot)])
    }
}

impl GraverSet {
    pub fn to_json(&self) -> serde_json::Value {
        vectors_json(&self.vectors, &[("g1", &self.g1), ("g_inf", &self.g_inf)])
    }
}

fn vectors_json(vectors: &[IntVector], norms: &[(&str, &Option<BigInt>)]) -> serde_json::Value {
    let vecs: Vec<Vec<String>> =
        vectors.iter().map(|v| v.0.iter().map(|x| x.to_string()).collect()).collect();
    let mut obj = serde_json::json!({ "count": vectors.len(), "vectors": vecs });
    for (name, val) in norms {
        obj[*name] = match val {
            Some(x) => serde_json::json!(x.to_string()),
            None => serde_json::Value::Null,
        };
    }
    obj
}

/// The ⊑ relation: same orthant and component-wise dominated in absolute
/// value.
pub fn conformal_leq(x: &IntVector, y: &IntVector) -> Result<bool, GraverError> {
    if x.dim() != y.dim() {
        return Err(GraverError::DimensionMismatch);
    }
    Ok(x.0
        .iter()
        .zip(&y.0)
        .all(|(a, b)| (a.clone() * b).sign() != num_bigint::Sign::Minus && a.abs() <= b.abs()))
}

/// 𝒞(A): one support-minimal coprime kernel vector per matroid circuit.
pub fn matrix_circuits(a: &RatMatrix) -> CircuitSet {
    let m = LinearMatroid::matroid_of(a, FieldSpec::Rationals).unwrap();
    let mut vectors = Vec::new();
    for circuit in m.circuits() {
        let support: Vec<usize> = circuit.into_iter().collect();
        let sub = a.submatrix(&(0..a.rows()).collect::<Vec<_>>(), &support);
        let kernel = crate::matrix::kernel_basis(&sub);
        debug_assert_eq!(kernel.len(), 1, "a circuit support has a 1-dimensional kernel");
        let mut full = vec![BigInt::zero(); a.cols()];
        for (i, &j) in support.iter().enumerate() {
            full[j] = kernel[0].0[i].clone();
        }
        vectors.push(IntVector(full).canonicalize());
    }
    vectors.sort_by(|x, y| x.0.cmp(&y.0));
    let c1 = vectors.iter().map(|v| v.norm_1()).max();
    let c_inf = vectors.iter().map(|v| v.norm_inf()).max();
    let kappa_dot = if vectors.is_empty() {
        None
    } else {
        let mut l = BigInt::one();
        for v in &vectors {
            for x in &v.0 {
                if !x.is_zero() {
                    l = l.lcm(&x.abs());
                }
            }
        }
        Some(l)
    };
    CircuitSet { vectors, c1, c_inf, kappa_dot }
}

/// A lattice basis of ker_ℤ(A) via integer column reduction with a
/// unimodular transform.
pub fn integer_kernel_lattice(a: &RatMatrix) -> Vec<IntVector> {
    let n = a.cols();
    // clear denominators row by row; the integer kernel is unchanged
    let mut m: Vec<Vec<BigInt>> = (0..a.rows())
        .map(|i| {
            let lcm = (0..n).fold(BigInt::one(), |acc, j| acc.lcm(a.at(i, j).denom()));
            (0..n).map(|j| (a.at(i, j) * &lcm).to_integer()).collect()
        })
        .collect();
    let mut u: Vec<Vec<BigInt>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    // u is tracked column-wise: u[c] is the c-th column of the transform
    let mut col = 0;
    for row in 0..a.rows() {
        loop {
            let mut nonzero: Vec<usize> = (col..n).filter(|&j| !m[row][j].is_zero()).collect();
            if nonzero.is_empty() {
                break;
            }
            if nonzero.len() == 1 {
                let j = nonzero[0];
                for r in m.iter_mut() {
                    r.swap(col, j);
                }
                u.swap(col, j);
                col += 1;
                break;
            }
            nonzero.sort_by_key(|&j| m[row][j].abs());
            let (j1, j2) = (nonzero[0], nonzero[1]);
            let q = div_round(&m[row][j2], &m[row][j1]);
            for r in m.iter_mut() {
                let t = &r[j1] * &q;
                r[j2] -= t;
            }
            let (a_col, b_col) = twin_mut(&mut u, j1, j2);
            for (x, y) in a_col.iter().zip(b_col.iter_mut()) {
                *y -= x * &q;
            }
        }
    }
    (col..n).map(|j| IntVector(u[j].clone())).collect()
}

fn twin_mut<T>(v: &mut [T], i: usize, j: usize) -> (&T, &mut T) {
    assert!(i != j);
    if i < j {
        let (a, b) = v.split_at_mut(j);
        (&a[i], &mut b[0])
    } else {
        let (a, b) = v.split_at_mut(i);
        (&b[0], &mut a[j])
    }
}

fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    // nearest integer quotient keeps the remainders small
    let q = a.div_rem(b).0;
    [&q - 1, q.clone(), &q + 1]
        .into_iter()
        .min_by_key(|c| (a - c * b).abs())
        .unwrap()
}

/// 𝒢(A) by completion, certified by box enumeration.
pub fn graver_basis(a: &RatMatrix, box_bound: Option<u64>) -> Result<GraverSet, GraverError> {
    let lattice = integer_kernel_lattice(a);
    if lattice.is_empty() {
        return Ok(GraverSet { vectors: Vec::new(), g1: None, g_inf: None });
    }
    let completed = pottier(&lattice);
    let canonical = canonical_set(&completed);
    let g_inf_found = canonical.iter().map(|v| v.norm_inf()).max().unwrap();
    let g_inf_u64: u64 = g_inf_found.to_string().parse().map_err(|_| {
        GraverError::TooLarge(u128::MAX)
    })?;
    let bound = (g_inf_u64 + 1).max(box_bound.unwrap_or(0));
    let boxed = box_minimal_kernel_points(a, bound)?;
    if boxed.iter().any(|v| v.norm_inf() == BigInt::from(bound)) {
        return Err(GraverError::BoxTooSmall(bound));
    }
    if boxed != canonical {
        return Err(GraverError::VerifierMismatch);
    }
    let g1 = canonical.iter().map(|v| v.norm_1()).max();
    let g_inf = Some(g_inf_found);
    Ok(GraverSet { vectors: canonical, g1, g_inf })
}

fn vadd(x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

fn vsub_assign(x: &mut [BigInt], y: &[BigInt]) {
    for (a, b) in x.iter_mut().zip(y) {
        *a -= b;
    }
}

/// Pottier completion: close the signed generating set under conformal
/// normal forms of pairwise sums.
fn pottier(lattice: &[IntVector]) -> Vec<Vec<BigInt>> {
    let mut g: Vec<Vec<BigInt>> = Vec::new();
    for v in lattice {
        if !v.is_zero() {
            g.push(v.0.clone());
            g.push(v.0.iter().map(|x| -x).collect());
        }
    }
    let mut queue: Vec<Vec<BigInt>> = Vec::new();
    for i in 0..g.len() {
        for j in i..g.len() {
            queue.push(vadd(&g[i], &g[j]));
        }
    }
    while let Some(s) = queue.pop() {
        let r = normal_form(s, &g);
        if r.iter().any(|x| !x.is_zero()) {
            for h in &g {
                queue.push(vadd(&r, h));
            }
            queue.push(vadd(&r, &r));
            g.push(r);
        }
    }
    // keep only ⊑-minimal elements
    let mut minimal: Vec<Vec<BigInt>> = Vec::new();
    for (i, v) in g.iter().enumerate() {
        let dominated = g.iter().enumerate().any(|(j, w)| {
            j != i
                && w.iter().zip(v).all(|(a, b)| {
                    (a.clone() * b).sign() != num_bigint::Sign::Minus && a.abs() <= b.abs()
                })
                && w != v
        });
        if !dominated {
            minimal.push(v.clone());
        }
    }
    minimal
}

fn normal_form(mut s: Vec<BigInt>, g: &[Vec<BigInt>]) -> Vec<BigInt> {
    'outer: loop {
        if s.iter().all(|x| x.is_zero()) {
            return s;
        }
        for h in g {
            let fits = h.iter().zip(&s).all(|(a, b)| {
                (a.clone() * b).sign() != num_bigint::Sign::Minus && a.abs() <= b.abs()
            });
            if fits && h.iter().any(|x| !x.is_zero()) {
                vsub_assign(&mut s, h);
                continue 'outer;
            }
        }
        return s;
    }
}

fn canonical_set(vs: &[Vec<BigInt>]) -> Vec<IntVector> {
    let mut set: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    for v in vs {
        if v.iter().all(|x| x.is_zero()) {
            continue;
        }
        let mut iv = IntVector(v.clone());
        canonical_sign(&mut iv);
        set.insert(iv.0);
    }
    set.into_iter().map(IntVector).collect()
}

fn canonical_sign(v: &mut IntVector) {
    if let Some(first) = v.0.iter().find(|x| !x.is_zero()) {
        if first.sign() == num_bigint::Sign::Minus {
            for x in v.0.iter_mut() {
                *x = -x.clone();
            }
        }
    }
}

/// All ⊑-minimal nonzero integer kernel points with ∞-norm ≤ bound,
/// canonicalized one per antipodal pair. Enumerates coefficient vectors over
/// a lattice basis of the integer kernel rather than the full ambient box:
/// any kernel point x = Vc with ‖x‖∞ ≤ bound satisfies c = W⁻¹x_I for an
/// invertible row submatrix W of V, so ‖c‖∞ ≤ ‖W⁻¹‖∞·bound covers them all.
fn box_minimal_kernel_points(a: &RatMatrix, bound: u64) -> Result<Vec<IntVector>, GraverError> {
    let basis = integer_kernel_lattice(a);
    let k = basis.len();
    if k == 0 {
        return Ok(Vec::new());
    }
    let n = a.cols();
    let cols: Vec<Vec<Rational>> = basis
        .iter()
        .map(|v| v.0.iter().map(|x| Rational::from_integer(x.clone())).collect())
        .collect();
    let vmat = RatMatrix::from_columns(n, &cols);
    let (_, pivot_rows) = vmat.transpose().rref();
    let w = vmat.submatrix(&pivot_rows, &(0..k).collect::<Vec<_>>());
    let winv = w.inverse().expect("pivot rows form an invertible square block");
    let mut norm = Rational::zero();
    for i in 0..k {
        let row_sum: Rational = (0..k).map(|j| abs_rat(winv.at(i, j))).sum();
        if row_sum > norm {
            norm = row_sum;
        }
    }
    let coeff_bound = (norm * Rational::from_integer(BigInt::from(bound))).ceil().to_integer();
    let r: i64 = coeff_bound.to_string().parse().map_err(|_| GraverError::TooLarge(u128::MAX))?;
    let span = 2 * r as u128 + 1;
    let total = span.checked_pow(k as u32).unwrap_or(u128::MAX);
    if total > 50_000_000 {
        return Err(GraverError::TooLarge(total));
    }
    let big_bound = BigInt::from(bound);
    let mut points: Vec<Vec<BigInt>> = Vec::new();
    let mut c = vec![-r; k];
    loop {
        if c.iter().any(|&x| x != 0) {
            let mut x = vec![BigInt::zero(); n];
            for (j, cj) in c.iter().enumerate() {
                if *cj != 0 {
                    let cj = BigInt::from(*cj);
                    for (xi, bi) in x.iter_mut().zip(&basis[j].0) {
                        *xi += &cj * bi;
                    }
                }
            }
            if x.iter().all(|v| v.abs() <= big_bound) {
                points.push(x);
            }
        }
        let mut i = k;
        loop {
            if i == 0 {
                // sort by ℓ1 norm; a point is minimal iff no earlier minimal
                // point is conformally below it
                points.sort_by_key(|v| {
                    (v.iter().map(|x| x.abs()).sum::<BigInt>(), v.clone())
                });
                let mut minimal: Vec<Vec<BigInt>> = Vec::new();
                'pts: for v in &points {
                    for m in &minimal {
                        let fits = m.iter().zip(v).all(|(x, y)| {
                            (x.clone() * y).sign() != num_bigint::Sign::Minus && x.abs() <= y.abs()
                        });
                        if fits && m != v {
                            continue 'pts;
                        }
                    }
                    minimal.push(v.clone());
                }
                return Ok(canonical_set(&minimal));
            }
            i -= 1;
            if c[i] < r {
                c[i] += 1;
                for x in c[i + 1..].iter_mut() {
                    *x = -r;
                }
                break;
            }
        }
    }
}

fn abs_rat(x: &Rational) -> Rational {
    if x < &Rational::zero() {
        -x.clone()
    } else {
        x.clone()
    }
}
