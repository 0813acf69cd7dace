//! Dense exact-rational matrices, row operations, kernels and entry
//! complexity accounting. Everything here is bit-exact; there is no floating
//! point anywhere in the crate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatrixError {
    #[error("selected columns are linearly dependent")]
    DependentBasis,
    #[error("column counts differ: {0} vs {1}")]
    ShapeMismatch(usize, usize),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Integer vector; circuits and Graver elements live here.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntVector(pub Vec<BigInt>);

impl IntVector {
    pub fn from_i64(v: &[i64]) -> Self {
        IntVector(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn support(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn norm_1(&self) -> BigInt {
        self.0.iter().map(|x| x.abs()).sum()
    }

    pub fn norm_inf(&self) -> BigInt {
        self.0
            .iter()
            .map(|x| x.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    pub fn neg(&self) -> IntVector {
        IntVector(self.0.iter().map(|x| -x).collect())
    }

    /// Divides by the gcd of the entries and flips the sign so that the first
    /// nonzero entry is positive. Zero vectors are returned unchanged.
    pub fn canonicalize(&self) -> IntVector {
        let mut g = BigInt::zero();
        for x in &self.0 {
            g = g.gcd(x);
        }
        if g.is_zero() {
            return self.clone();
        }
        let mut v: Vec<BigInt> = self.0.iter().map(|x| x / &g).collect();
        if let Some(first) = v.iter().find(|x| !x.is_zero()) {
            if first.is_negative() {
                v = v.into_iter().map(|x| -x).collect();
            }
        }
        IntVector(v)
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", x)?;
        }
        write!(f, ")")
    }
}

/// Dense exact-rational matrix in row-major order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
        RatMatrix { rows, cols, entries }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Rational::one();
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c);
            for &x in row.iter() {
                entries.push(Rational::from_integer(BigInt::from(x)));
            }
        }
        RatMatrix::new(r, c, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Rational {
        &mut self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Rational>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn from_columns(rows: usize, cols: &[Vec<Rational>]) -> Self {
        let mut m = Self::zero(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for i in 0..rows {
                *m.at_mut(i, j) = col[i].clone();
            }
        }
        m
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut t = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *t.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.at(i, j) + a * other.at(k, j);
                    *out.at_mut(i, j) = v;
                }
            }
        }
        out
    }

    pub fn mul_int_vector(&self, v: &IntVector) -> Vec<Rational> {
        assert_eq!(self.cols, v.dim());
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.at(i, j) * Rational::from_integer(v.0[j].clone()))
                    .sum()
            })
            .collect()
    }

    pub fn scale(&self, s: &Rational) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| x * s).collect(),
        }
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(|x| x.is_integer())
    }

    /// Submatrix by explicit row and column index lists (order preserved).
    pub fn submatrix(&self, row_idx: &[usize], col_idx: &[usize]) -> RatMatrix {
        let mut m = Self::zero(row_idx.len(), col_idx.len());
        for (i, &r) in row_idx.iter().enumerate() {
            for (j, &c) in col_idx.iter().enumerate() {
                *m.at_mut(i, j) = self.at(r, c).clone();
            }
        }
        m
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.at(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.entries.swap(r * self.cols + j, p * self.cols + j);
                }
            }
            let inv = self.at(r, c).recip();
            for j in 0..self.cols {
                let v = self.at(r, j) * &inv;
                *self.at_mut(r, j) = v;
            }
            for i in 0..self.rows {
                if i != r && !self.at(i, c).is_zero() {
                    let f = self.at(i, c).clone();
                    for j in 0..self.cols {
                        let v = self.at(i, j) - &f * self.at(r, j);
                        *self.at_mut(i, j) = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self) -> (RatMatrix, Vec<usize>) {
        let mut m = self.clone();
        let p = m.rref_in_place();
        (m, p)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Matrix inverse; `None` when singular.
    pub fn inverse(&self) -> Option<RatMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = RatMatrix::zero(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                *aug.at_mut(i, j) = self.at(i, j).clone();
            }
            *aug.at_mut(i, n + i) = Rational::one();
        }
        let pivots = aug.rref_in_place();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        let mut inv = RatMatrix::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                *inv.at_mut(i, j) = aug.at(i, n + j).clone();
            }
        }
        Some(inv)
    }
}

/// Basis of ker A as integral vectors with coprime entries, first nonzero
/// entry positive. Empty iff the kernel is trivial.
pub fn kernel_basis(a: &RatMatrix) -> Vec<IntVector> {
    let (r, pivots) = a.rref();
    let free: Vec<usize> = (0..a.cols()).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::new();
    for &f in &free {
        // x_f = 1, other free vars 0, pivot vars read off the rref rows.
        let mut v = vec![Rational::zero(); a.cols()];
        v[f] = Rational::one();
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = -r.at(i, f).clone();
        }
        basis.push(rational_vec_to_int(&v));
    }
    basis
}

/// Clears denominators and canonicalizes sign/gcd.
pub fn rational_vec_to_int(v: &[Rational]) -> IntVector {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect();
    IntVector(ints).canonicalize()
}

/// Row-reduces `a` so that the selected (independent) columns become the
/// identity, in the given order, occupying the first `basis_cols.len()` rows.
pub fn reduce_basis_to_identity(
    a: &RatMatrix,
    basis_cols: &[usize],
) -> Result<RatMatrix, MatrixError> {
    let m = a.rows();
    let k = basis_cols.len();
    if a.submatrix(&(0..m).collect::<Vec<_>>(), basis_cols).rank() != k {
        return Err(MatrixError::DependentBasis);
    }
    let mut w = a.clone();
    let mut pivot_row_of: Vec<usize> = Vec::with_capacity(k);
    let mut used = vec![false; m];
    for (t, &c) in basis_cols.iter().enumerate() {
        let p = (0..m)
            .find(|&i| !used[i] && !w.at(i, c).is_zero())
            .expect("independent columns admit a pivot row");
        used[p] = true;
        let inv = w.at(p, c).recip();
        for j in 0..w.cols() {
            let v = w.at(p, j) * &inv;
            *w.at_mut(p, j) = v;
        }
        for i in 0..m {
            if i != p && !w.at(i, c).is_zero() {
                let f = w.at(i, c).clone();
                for j in 0..w.cols() {
                    let v = w.at(i, j) - &f * w.at(p, j);
                    *w.at_mut(i, j) = v;
                }
            }
        }
        pivot_row_of.push(p);
        let _ = t;
    }
    // Reorder rows: pivot rows first in basis order, the rest after.
    let mut order = pivot_row_of.clone();
    for i in 0..m {
        if !order.contains(&i) {
            order.push(i);
        }
    }
    Ok(w.submatrix(&order, &(0..a.cols()).collect::<Vec<_>>()))
}

/// Bits needed for one entry p/q with gcd(|p|,q)=1:
/// ceil(log2(|p|+1)) + ceil(log2(q+1)).
pub fn entry_bits(x: &Rational) -> u64 {
    ceil_log2_plus1(&x.numer().abs()) + ceil_log2_plus1(x.denom())
}

fn ceil_log2_plus1(n: &BigInt) -> u64 {
    // ceil(log2(n+1)) for n >= 0
    let m: BigInt = n + 1;
    let bits = m.bits();
    // m.bits() = floor(log2 m) + 1; ceil(log2 m) = bits - 1 if m is a power
    // of two, else bits ... careful: ceil(log2 m) for m >= 1.
    if m.is_one() {
        return 0;
    }
    let is_pow2 = {
        let (_, digits) = m.to_u32_digits();
        let mut ones = 0u32;
        for d in digits {
            ones += d.count_ones();
        }
        ones == 1
    };
    if is_pow2 {
        bits - 1
    } else {
        bits
    }
}

/// Maximum encoding length over all entries; the paper's ec(A).
pub fn entry_complexity(a: &RatMatrix) -> u64 {
    let mut best = 0;
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            best = best.max(entry_bits(a.at(i, j)));
        }
    }
    if a.rows() * a.cols() == 0 {
        0
    } else {
        best.max(1)
    }
}

/// True iff B is obtainable from A by row operations up to zero-row padding.
pub fn row_space_equal(a: &RatMatrix, b: &RatMatrix) -> Result<bool, MatrixError> {
    if a.cols() != b.cols() {
        return Err(MatrixError::ShapeMismatch(a.cols(), b.cols()));
    }
    Ok(stripped_rref(a) == stripped_rref(b))
}

fn stripped_rref(a: &RatMatrix) -> RatMatrix {
    let (r, pivots) = a.rref();
    r.submatrix(&(0..pivots.len()).collect::<Vec<_>>(), &(0..a.cols()).collect::<Vec<_>>())
}

/// Applies `steps` random elementary row operations; deterministic per seed.
/// The output always has the same row space as the input.
pub fn random_row_ops(a: &RatMatrix, seed: u64, steps: usize) -> RatMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut w = a.clone();
    let m = w.rows();
    if m == 0 {
        return w;
    }
    for _ in 0..steps {
        match rng.gen_range(0..3) {
            0 if m >= 2 => {
                // add an integer multiple of one row to another
                let i = rng.gen_range(0..m);
                let mut j = rng.gen_range(0..m);
                while j == i {
                    j = rng.gen_range(0..m);
                }
                let f = Rational::from_integer(BigInt::from(rng.gen_range(-3i64..=3)));
                for c in 0..w.cols() {
                    let v = w.at(i, c) + &f * w.at(j, c);
                    *w.at_mut(i, c) = v;
                }
            }
            1 => {
                // scale a row by a nonzero small rational
                let i = rng.gen_range(0..m);
                let choices: [(i64, i64); 6] = [(1, 1), (-1, 1), (2, 1), (-2, 1), (1, 2), (3, 1)];
                let (p, q) = choices[rng.gen_range(0..choices.len())];
                let f = Rational::new(BigInt::from(p), BigInt::from(q));
                for c in 0..w.cols() {
                    let v = w.at(i, c) * &f;
                    *w.at_mut(i, c) = v;
                }
            }
            _ if m >= 2 => {
                let i = rng.gen_range(0..m);
                let j = rng.gen_range(0..m);
                if i != j {
                    for c in 0..w.cols() {
                        w.entries.swap(i * w.cols + c, j * w.cols + c);
                    }
                }
            }
            _ => {}
        }
    }
    w
}

// ---------------------------------------------------------------------------
// .rmx text format: line 1 "rows cols"; then rows*cols whitespace-separated
// tokens "p" or "p/q".
// ---------------------------------------------------------------------------

pub fn parse_rational_token(tok: &str) -> Result<Rational, MatrixError> {
    let (p, q) = match tok.split_once('/') {
        Some((p, q)) => (p, q),
        None => (tok, "1"),
    };
    let p = BigInt::from_str(p).map_err(|e| MatrixError::Parse(format!("bad numerator {tok:?}: {e}")))?;
    let q = BigInt::from_str(q).map_err(|e| MatrixError::Parse(format!("bad denominator {tok:?}: {e}")))?;
    if q.is_zero() {
        return Err(MatrixError::Parse(format!("zero denominator in {tok:?}")));
    }
    Ok(Rational::new(p, q))
}

pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        format!("{}", x.numer())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

impl RatMatrix {
    pub fn parse_rmx(text: &str) -> Result<RatMatrix, MatrixError> {
        let mut toks = text.split_whitespace();
        let rows: usize = toks
            .next()
            .ok_or_else(|| MatrixError::Parse("missing row count".into()))?
            .parse()
            .map_err(|e| MatrixError::Parse(format!("bad row count: {e}")))?;
        let cols: usize = toks
            .next()
            .ok_or_else(|| MatrixError::Parse("missing column count".into()))?
            .parse()
            .map_err(|e| MatrixError::Parse(format!("bad column count: {e}")))?;
        let mut entries = Vec::with_capacity(rows * cols);
        for _ in 0..rows * cols {
            let tok = toks
                .next()
                .ok_or_else(|| MatrixError::Parse("too few entries".into()))?;
            entries.push(parse_rational_token(tok)?);
        }
        if toks.next().is_some() {
            return Err(MatrixError::Parse("trailing tokens after matrix".into()));
        }
        Ok(RatMatrix::new(rows, cols, entries))
    }

    pub fn to_rmx(&self) -> String {
        let mut out = format!("{} {}\n", self.rows, self.cols);
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| format_rational(self.at(i, j))).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> =
                (0..self.cols).map(|j| format_rational(self.at(i, j))).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> RatMatrix {
        RatMatrix::from_i64(rows)
    }

    #[test]
    fn kernel_of_band_matrix() {
        let a = m(&[&[1, 2, 0], &[0, 1, 2]]);
        let k = kernel_basis(&a);
        assert_eq!(k, vec![IntVector::from_i64(&[4, -2, 1])]);
        for v in &k {
            assert!(a.mul_int_vector(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        assert!(kernel_basis(&RatMatrix::identity(2)).is_empty());
    }

    #[test]
    fn kernel_of_all_ones_row() {
        let a = m(&[&[1, 1, 1]]);
        let k = kernel_basis(&a);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(a.mul_int_vector(v).iter().all(|x| x.is_zero()));
            let mut g = BigInt::zero();
            for x in &v.0 {
                g = g.gcd(x);
            }
            assert!(g.is_one());
        }
    }

    #[test]
    fn reduce_to_identity_2x2() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let r = reduce_basis_to_identity(&a, &[0, 1]).unwrap();
        assert_eq!(r, RatMatrix::identity(2));
    }

    #[test]
    fn reduce_to_identity_band() {
        let a = m(&[&[1, 2, 0], &[0, 1, 2]]);
        let r = reduce_basis_to_identity(&a, &[0, 1]).unwrap();
        assert_eq!(r, m(&[&[1, 0, -4], &[0, 1, 2]]));
        assert_eq!(kernel_basis(&r), vec![IntVector::from_i64(&[4, -2, 1])]);
    }

    #[test]
    fn reduce_rank_one() {
        let a = m(&[&[1, 1], &[2, 2]]);
        let r = reduce_basis_to_identity(&a, &[0]).unwrap();
        assert_eq!(r, m(&[&[1, 1], &[0, 0]]));
    }

    #[test]
    fn reduce_rejects_dependent() {
        let a = m(&[&[1, 2], &[2, 4]]);
        assert_eq!(
            reduce_basis_to_identity(&a, &[0, 1]),
            Err(MatrixError::DependentBasis)
        );
    }

    #[test]
    fn entry_complexity_examples() {
        assert_eq!(entry_complexity(&RatMatrix::zero(2, 2)), 1);
        assert_eq!(entry_complexity(&RatMatrix::identity(2)), 2);
        let a = RatMatrix::new(
            2,
            2,
            vec![
                Rational::one(),
                Rational::from_integer(2.into()),
                Rational::zero(),
                Rational::new(1.into(), 3.into()),
            ],
        );
        assert_eq!(entry_complexity(&a), 3);
    }

    #[test]
    fn entry_complexity_permutation_invariant() {
        let a = m(&[&[1, 7, 0], &[0, -3, 2]]);
        let perm_rows = a.submatrix(&[1, 0], &[0, 1, 2]);
        let perm_cols = a.submatrix(&[0, 1], &[2, 0, 1]);
        assert_eq!(entry_complexity(&a), entry_complexity(&perm_rows));
        assert_eq!(entry_complexity(&a), entry_complexity(&perm_cols));
    }

    #[test]
    fn row_space_equality() {
        let a = m(&[&[1, 0], &[0, 1]]);
        let b = m(&[&[0, 1], &[1, 0]]);
        assert!(row_space_equal(&a, &b).unwrap());
        assert!(!row_space_equal(&m(&[&[1, 0]]), &m(&[&[0, 1]])).unwrap());
        assert!(row_space_equal(&m(&[&[1, 1]]), &m(&[&[2, 2], &[0, 0]])).unwrap());
        assert!(row_space_equal(&m(&[&[1, 0]]), &m(&[&[0, 1], &[1, 0]])).is_ok());
        assert_eq!(
            row_space_equal(&m(&[&[1, 0]]), &m(&[&[1, 0, 0]])),
            Err(MatrixError::ShapeMismatch(2, 3))
        );
    }

    #[test]
    fn random_ops_preserve_row_space() {
        let a = m(&[&[1, 2, 0], &[0, 1, 2]]);
        assert_eq!(random_row_ops(&a, 7, 0), a);
        for seed in 0..10 {
            let b = random_row_ops(&a, seed, 12);
            assert!(row_space_equal(&a, &b).unwrap());
            assert_eq!(kernel_basis(&b), kernel_basis(&a));
        }
        let i2 = RatMatrix::identity(2);
        assert!(kernel_basis(&random_row_ops(&i2, 3, 9)).is_empty());
    }

    #[test]
    fn rmx_round_trip() {
        let text = "2 3\n1 2/3 0\n-1/2 4 5\n";
        let a = RatMatrix::parse_rmx(text).unwrap();
        let b = RatMatrix::parse_rmx(&a.to_rmx()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rmx_rejects_zero_denominator() {
        assert!(RatMatrix::parse_rmx("1 1\n1/0\n").is_err());
    }

    #[test]
    fn rmx_normalizes_non_coprime() {
        let a = RatMatrix::parse_rmx("1 1\n2/4\n").unwrap();
        assert_eq!(a.at(0, 0), &Rational::new(1.into(), 2.into()));
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), RatMatrix::identity(2));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }
}
