//! Field abstraction shared by the matroid machinery: exact rationals and
//! prime fields GF(p) with p fitting a machine word.

use crate::matrix::Rational;
use num_traits::{One, Zero};

pub trait Field {
    type Elem: Clone + PartialEq + std::fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse of a nonzero element.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QField;

impl Field for QField {
    type Elem = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        a - b
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn neg(&self, a: &Rational) -> Rational {
        -a
    }
    fn inv(&self, a: &Rational) -> Rational {
        a.recip()
    }
}

/// GF(p) by residues 0..p; products go through u128 so any prime below
/// 2^63 is safe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PField {
    pub p: u64,
}

impl PField {
    pub fn new(p: u64) -> Self {
        assert!(is_prime_u64(p), "{p} is not prime");
        PField { p }
    }

    pub fn reduce_i64(&self, x: i64) -> u64 {
        let r = x.rem_euclid(self.p as i64);
        r as u64
    }
}

impl Field for PField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "zero has no inverse");
        // Fermat: a^(p-2) mod p
        let mut base = *a as u128;
        let mut exp = self.p - 2;
        let m = self.p as u128;
        let mut acc: u128 = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            exp >>= 1;
        }
        acc as u64
    }
}

/// Trial-division primality; adequate for the magnitudes used here.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.checked_mul(d).map_or(false, |s| s <= n) {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub fn next_prime_above(n: u64) -> u64 {
    let mut c = n + 1;
    loop {
        if is_prime_u64(c) {
            return c;
        }
        c += 1;
    }
}

// ---------------------------------------------------------------------------
// Generic column linear algebra used by the matroid code. Columns are plain
// Vec<F::Elem> of a shared ambient dimension.
// ---------------------------------------------------------------------------

pub fn col_is_zero<F: Field>(f: &F, v: &[F::Elem]) -> bool {
    v.iter().all(|x| f.is_zero(x))
}

/// Reduced row echelon form of the matrix whose *rows* are given; returns
/// (rows, pivot column indices). Zero rows are dropped.
pub fn rref_rows<F: Field>(f: &F, rows: &[Vec<F::Elem>]) -> (Vec<Vec<F::Elem>>, Vec<usize>) {
    let mut m: Vec<Vec<F::Elem>> = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !f.is_zero(&m[i][c])) else {
            continue;
        };
        m.swap(r, p);
        let inv = f.inv(&m[r][c]);
        for j in 0..ncols {
            m[r][j] = f.mul(&m[r][j], &inv);
        }
        for i in 0..m.len() {
            if i != r && !f.is_zero(&m[i][c]) {
                let t = m[i][c].clone();
                for j in 0..ncols {
                    let s = f.mul(&t, &m[r][j]);
                    m[i][j] = f.sub(&m[i][j], &s);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(pivots.len());
    (m, pivots)
}

/// Rank of a set of column vectors.
pub fn rank_of_columns<F: Field>(f: &F, cols: &[&Vec<F::Elem>]) -> usize {
    if cols.is_empty() {
        return 0;
    }
    let rows: Vec<Vec<F::Elem>> = cols.iter().map(|c| (*c).clone()).collect();
    rref_rows(f, &rows).1.len()
}

/// Is `v` in the span of `cols`?
pub fn in_span<F: Field>(f: &F, cols: &[&Vec<F::Elem>], v: &Vec<F::Elem>) -> bool {
    let r = rank_of_columns(f, cols);
    let mut with: Vec<&Vec<F::Elem>> = cols.to_vec();
    with.push(v);
    rank_of_columns(f, &with) == r
}

/// Quotient projection by the span of `gens`, realized by leftmost-pivot
/// completion: reduce by the RREF of the generators and drop the pivot
/// coordinates. Returns (projector as closure data = rref rows + pivots).
pub struct QuotientMap<F: Field> {
    pub rref: Vec<Vec<F::Elem>>,
    pub pivots: Vec<usize>,
    pub ambient: usize,
}

impl<F: Field> QuotientMap<F> {
    pub fn new(f: &F, gens: &[Vec<F::Elem>], ambient: usize) -> Self {
        let g: Vec<Vec<F::Elem>> = gens.to_vec();
        let (rref, pivots) = rref_rows(f, &g);
        QuotientMap { rref, pivots, ambient }
    }

    pub fn dim_dropped(&self) -> usize {
        self.pivots.len()
    }

    /// Image of a vector in the quotient coordinates.
    pub fn project(&self, f: &F, v: &[F::Elem]) -> Vec<F::Elem> {
        let mut w: Vec<F::Elem> = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            if !f.is_zero(&w[p]) {
                let t = w[p].clone();
                for j in 0..self.ambient {
                    let s = f.mul(&t, &self.rref[i][j]);
                    w[j] = f.sub(&w[j], &s);
                }
            }
        }
        (0..self.ambient)
            .filter(|j| !self.pivots.contains(j))
            .map(|j| w[j].clone())
            .collect()
    }

    /// Canonical preimage of a quotient-coordinate vector: zeros at the
    /// dropped pivot coordinates.
    pub fn lift(&self, f: &F, v: &[F::Elem]) -> Vec<F::Elem> {
        let mut out = vec![f.zero(); self.ambient];
        let mut k = 0;
        for j in 0..self.ambient {
            if !self.pivots.contains(&j) {
                out[j] = v[k].clone();
                k += 1;
            }
        }
        out
    }
}
