//! Linear matroids over the rationals or GF(p): rank oracle, circuits,
//! components, duality, minors, subspace quotients and cloning. Ground-set
//! indices are stable under minors (deleted elements are tombstoned).

use crate::field::{rank_of_columns, rref_rows, Field, PField, QField, QuotientMap};
use crate::matrix::{RatMatrix, Rational};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
#[cfg(test)]
use num_traits::One as _;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatroidError {
    #[error("matrix must be integral over a prime field")]
    NotIntegral,
    #[error("unknown or deleted element {0}")]
    UnknownElement(usize),
    #[error("delete and contract sets overlap")]
    OverlapError,
    #[error("ground set too large for exhaustive comparison")]
    TooLarge,
    #[error("field mismatch")]
    FieldMismatch,
    #[error("empty matroid")]
    EmptyMatroid,
    #[error("parse error: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    PrimeField(u64),
}

impl std::fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "q"),
            FieldSpec::PrimeField(p) => write!(f, "gf {p}"),
        }
    }
}

/// A vector over one of the two supported fields; used for subspace
/// generators and decomposition-tree edge labels.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldVector {
    Q(Vec<Rational>),
    P(Vec<u64>),
}

impl FieldVector {
    pub fn dim(&self) -> usize {
        match self {
            FieldVector::Q(v) => v.len(),
            FieldVector::P(v) => v.len(),
        }
    }

    pub fn as_strings(&self) -> Vec<String> {
        match self {
            FieldVector::Q(v) => v.iter().map(crate::matrix::format_rational).collect(),
            FieldVector::P(v) => v.iter().map(|x| x.to_string()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldVector::Q(v) => v.iter().all(|x| x.is_zero()),
            FieldVector::P(v) => v.iter().all(|x| *x == 0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Rep {
    Q(Vec<Option<Vec<Rational>>>),
    P(PField, Vec<Option<Vec<u64>>>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearMatroid {
    rep: Rep,
    ambient: usize,
}

impl LinearMatroid {
    pub fn from_q_columns(ambient: usize, cols: Vec<Vec<Rational>>) -> Self {
        assert!(cols.iter().all(|c| c.len() == ambient));
        LinearMatroid { rep: Rep::Q(cols.into_iter().map(Some).collect()), ambient }
    }

    pub fn from_p_columns(p: u64, ambient: usize, cols: Vec<Vec<u64>>) -> Self {
        let f = PField::new(p);
        assert!(cols.iter().all(|c| c.len() == ambient));
        let cols = cols
            .into_iter()
            .map(|c| Some(c.into_iter().map(|x| x % f.p).collect()))
            .collect();
        LinearMatroid { rep: Rep::P(f, cols), ambient }
    }

    /// The column matroid M(A) over the chosen field. Over GF(p) the matrix
    /// must be integral; entries are reduced mod p.
    pub fn matroid_of(a: &RatMatrix, field: FieldSpec) -> Result<Self, MatroidError> {
        match field {
            FieldSpec::Rationals => Ok(Self::from_q_columns(a.rows(), a.columns())),
            FieldSpec::PrimeField(p) => {
                if !a.is_integral() {
                    return Err(MatroidError::NotIntegral);
                }
                let f = PField::new(p);
                let cols = (0..a.cols())
                    .map(|j| {
                        (0..a.rows())
                            .map(|i| {
                                let n = a.at(i, j).numer();
                                let r = n.mod_floor_u64(p);
                                let _ = f;
                                r
                            })
                            .collect()
                    })
                    .collect();
                Ok(Self::from_p_columns(p, a.rows(), cols))
            }
        }
    }

    pub fn field(&self) -> FieldSpec {
        match &self.rep {
            Rep::Q(_) => FieldSpec::Rationals,
            Rep::P(f, _) => FieldSpec::PrimeField(f.p),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// Total ground-set size including tombstoned (deleted) elements.
    pub fn ground_size(&self) -> usize {
        match &self.rep {
            Rep::Q(c) => c.len(),
            Rep::P(_, c) => c.len(),
        }
    }

    /// Indices of live (non-deleted) elements.
    pub fn live(&self) -> Vec<usize> {
        match &self.rep {
            Rep::Q(c) => c.iter().enumerate().filter(|(_, x)| x.is_some()).map(|(i, _)| i).collect(),
            Rep::P(_, c) => {
                c.iter().enumerate().filter(|(_, x)| x.is_some()).map(|(i, _)| i).collect()
            }
        }
    }

    pub fn is_live(&self, e: usize) -> bool {
        match &self.rep {
            Rep::Q(c) => e < c.len() && c[e].is_some(),
            Rep::P(_, c) => e < c.len() && c[e].is_some(),
        }
    }

    pub fn vector_of(&self, e: usize) -> Option<FieldVector> {
        match &self.rep {
            Rep::Q(c) => c.get(e)?.as_ref().map(|v| FieldVector::Q(v.clone())),
            Rep::P(_, c) => c.get(e)?.as_ref().map(|v| FieldVector::P(v.clone())),
        }
    }

    fn check_elems(&self, s: &[usize]) -> Result<(), MatroidError> {
        for &e in s {
            if !self.is_live(e) {
                return Err(MatroidError::UnknownElement(e));
            }
        }
        Ok(())
    }

    /// Rank of a subset of live elements.
    pub fn rank(&self, s: &[usize]) -> Result<usize, MatroidError> {
        self.check_elems(s)?;
        Ok(match &self.rep {
            Rep::Q(c) => {
                let cols: Vec<&Vec<Rational>> = s.iter().map(|&e| c[e].as_ref().unwrap()).collect();
                rank_of_columns(&QField, &cols)
            }
            Rep::P(f, c) => {
                let cols: Vec<&Vec<u64>> = s.iter().map(|&e| c[e].as_ref().unwrap()).collect();
                rank_of_columns(f, &cols)
            }
        })
    }

    /// Rank of the whole (live) matroid.
    pub fn rank_full(&self) -> usize {
        self.rank(&self.live()).unwrap()
    }

    pub fn is_loop(&self, e: usize) -> bool {
        self.rank(&[e]).map(|r| r == 0).unwrap_or(false)
    }

    pub fn is_independent(&self, s: &[usize]) -> Result<bool, MatroidError> {
        Ok(self.rank(s)? == s.len())
    }

    /// All circuits (minimal dependent sets), enumerated by increasing size
    /// with superset pruning. Intended for small ground sets.
    pub fn circuits(&self) -> Vec<BTreeSet<usize>> {
        let live = self.live();
        assert!(live.len() <= 20, "circuit enumeration is limited to 20 elements");
        let mut found: Vec<BTreeSet<usize>> = Vec::new();
        for size in 1..=live.len() {
            let mut comb = Combinations::new(live.len(), size);
            while let Some(idx) = comb.next() {
                let subset: Vec<usize> = idx.iter().map(|&i| live[i]).collect();
                let set: BTreeSet<usize> = subset.iter().copied().collect();
                if found.iter().any(|c| c.is_subset(&set)) {
                    continue;
                }
                if self.rank(&subset).unwrap() < subset.len() {
                    found.push(set);
                }
            }
        }
        found
    }

    /// Smallest circuit, if any.
    pub fn min_circuit(&self) -> Option<BTreeSet<usize>> {
        let live = self.live();
        for size in 1..=live.len() {
            let mut comb = Combinations::new(live.len(), size);
            while let Some(idx) = comb.next() {
                let subset: Vec<usize> = idx.iter().map(|&i| live[i]).collect();
                if self.rank(&subset).unwrap() < subset.len() {
                    // minimal because no smaller dependent set exists
                    let inner: Vec<usize> = subset.clone();
                    let minimal = (0..inner.len()).all(|k| {
                        let mut sub = inner.clone();
                        sub.remove(k);
                        self.rank(&sub).unwrap() == sub.len()
                    });
                    if minimal {
                        return Some(subset.into_iter().collect());
                    }
                }
            }
        }
        None
    }

    /// Components via the fundamental circuits of a greedy basis: every
    /// fundamental circuit is contained in one component, and for connected
    /// matroids their union covers and connects the ground set. Loops and
    /// bridges are singleton components.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let live = self.live();
        let mut dsu = Dsu::new(self.ground_size());
        let mut basis: Vec<usize> = Vec::new();
        for &e in &live {
            if self.is_loop(e) {
                continue;
            }
            let mut trial = basis.clone();
            trial.push(e);
            if self.rank(&trial).unwrap() == trial.len() {
                basis = trial;
            }
        }
        for &e in &live {
            if self.is_loop(e) || basis.contains(&e) {
                continue;
            }
            let coeffs = self.express_over(&basis, e);
            for (j, nz) in coeffs.iter().enumerate() {
                if *nz {
                    dsu.union(e, basis[j]);
                }
            }
        }
        group_by_root(&mut dsu, &live)
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Brute-force components via transitive closure of the common-circuit
    /// relation; test oracle for `components`.
    pub fn components_oracle(&self) -> Vec<Vec<usize>> {
        let live = self.live();
        let mut dsu = Dsu::new(self.ground_size());
        for c in self.circuits() {
            let v: Vec<usize> = c.into_iter().collect();
            for w in v.windows(2) {
                dsu.union(w[0], w[1]);
            }
        }
        group_by_root(&mut dsu, &live)
    }

    /// Coefficients (as nonzero flags) expressing element e over an
    /// independent set `basis` whose span contains e.
    fn express_over(&self, basis: &[usize], e: usize) -> Vec<bool> {
        fn solve<F: Field>(
            f: &F,
            basis_cols: Vec<&Vec<F::Elem>>,
            target: &Vec<F::Elem>,
            ambient: usize,
        ) -> Vec<bool> {
            let k = basis_cols.len();
            let mut rows: Vec<Vec<F::Elem>> = Vec::with_capacity(ambient);
            for i in 0..ambient {
                let mut row: Vec<F::Elem> = basis_cols.iter().map(|c| c[i].clone()).collect();
                row.push(target[i].clone());
                rows.push(row);
            }
            let (r, pivots) = rref_rows(f, &rows);
            // basis is independent: pivots are exactly 0..k
            let mut nz = vec![false; k];
            for (i, &p) in pivots.iter().enumerate() {
                if p < k {
                    nz[p] = !f.is_zero(&r[i][k]);
                }
            }
            nz
        }
        match &self.rep {
            Rep::Q(c) => solve(
                &QField,
                basis.iter().map(|&b| c[b].as_ref().unwrap()).collect(),
                c[e].as_ref().unwrap(),
                self.ambient,
            ),
            Rep::P(f, c) => solve(
                f,
                basis.iter().map(|&b| c[b].as_ref().unwrap()).collect(),
                c[e].as_ref().unwrap(),
                self.ambient,
            ),
        }
    }

    /// Restriction to a subset of live elements (others tombstoned).
    pub fn restriction(&self, keep: &[usize]) -> LinearMatroid {
        let keep: BTreeSet<usize> = keep.iter().copied().collect();
        let mut out = self.clone();
        match &mut out.rep {
            Rep::Q(c) => {
                for (i, slot) in c.iter_mut().enumerate() {
                    if !keep.contains(&i) {
                        *slot = None;
                    }
                }
            }
            Rep::P(_, c) => {
                for (i, slot) in c.iter_mut().enumerate() {
                    if !keep.contains(&i) {
                        *slot = None;
                    }
                }
            }
        }
        out
    }

    /// A representation of the dual matroid M*.
    pub fn dualize(&self) -> LinearMatroid {
        fn dual<F: Field>(
            f: &F,
            cols: &[Option<Vec<F::Elem>>],
        ) -> Vec<Option<Vec<F::Elem>>> {
            let live: Vec<usize> =
                cols.iter().enumerate().filter(|(_, c)| c.is_some()).map(|(i, _)| i).collect();
            let n = live.len();
            // RREF of the representation matrix restricted to live columns
            let ambient = cols.iter().flatten().next().map_or(0, |c| c.len());
            let rows: Vec<Vec<F::Elem>> = (0..ambient)
                .map(|i| live.iter().map(|&e| cols[e].as_ref().unwrap()[i].clone()).collect())
                .collect();
            let (r, pivots) = rref_rows(f, &rows);
            let rank = pivots.len();
            let nonpivots: Vec<usize> = (0..n).filter(|j| !pivots.contains(j)).collect();
            let dual_dim = n - rank;
            let mut out: Vec<Option<Vec<F::Elem>>> = vec![None; cols.len()];
            for (t, &np) in nonpivots.iter().enumerate() {
                let mut v = vec![f.zero(); dual_dim];
                v[t] = f.one();
                out[live[np]] = Some(v);
            }
            for (i, &pv) in pivots.iter().enumerate() {
                let v: Vec<F::Elem> =
                    nonpivots.iter().map(|&np| f.neg(&r[i][np])).collect();
                out[live[pv]] = Some(v);
            }
            out
        }
        match &self.rep {
            Rep::Q(c) => {
                let out = dual(&QField, c);
                let dim = out.iter().flatten().next().map_or(0, |v| v.len());
                LinearMatroid { rep: Rep::Q(out), ambient: dim }
            }
            Rep::P(f, c) => {
                let out = dual(f, c);
                let dim = out.iter().flatten().next().map_or(0, |v| v.len());
                LinearMatroid { rep: Rep::P(*f, out), ambient: dim }
            }
        }
    }

    /// M \ delete / contract. Contraction is realized as a quotient by the
    /// span of the contracted vectors; both sets are tombstoned.
    pub fn minor(&self, delete: &[usize], contract: &[usize]) -> Result<LinearMatroid, MatroidError> {
        if delete.iter().any(|e| contract.contains(e)) {
            return Err(MatroidError::OverlapError);
        }
        self.check_elems(delete)?;
        self.check_elems(contract)?;
        let gens: Vec<FieldVector> =
            contract.iter().map(|&e| self.vector_of(e).unwrap()).collect();
        let mut out = self.contract_subspace(&gens)?;
        match &mut out.rep {
            Rep::Q(c) => {
                for &e in delete.iter().chain(contract) {
                    c[e] = None;
                }
            }
            Rep::P(_, c) => {
                for &e in delete.iter().chain(contract) {
                    c[e] = None;
                }
            }
        }
        Ok(out)
    }

    /// Quotient by the span of the generators; the ground set is unchanged
    /// (elements inside the span become loops).
    pub fn contract_subspace(&self, gens: &[FieldVector]) -> Result<LinearMatroid, MatroidError> {
        match &self.rep {
            Rep::Q(c) => {
                let g: Vec<Vec<Rational>> = gens
                    .iter()
                    .map(|v| match v {
                        FieldVector::Q(v) => {
                            assert_eq!(v.len(), self.ambient);
                            Ok(v.clone())
                        }
                        FieldVector::P(_) => Err(MatroidError::FieldMismatch),
                    })
                    .collect::<Result<_, _>>()?;
                let q = QuotientMap::new(&QField, &g, self.ambient);
                let new_cols = c
                    .iter()
                    .map(|slot| slot.as_ref().map(|v| q.project(&QField, v)))
                    .collect();
                Ok(LinearMatroid {
                    rep: Rep::Q(new_cols),
                    ambient: self.ambient - q.dim_dropped(),
                })
            }
            Rep::P(f, c) => {
                let g: Vec<Vec<u64>> = gens
                    .iter()
                    .map(|v| match v {
                        FieldVector::P(v) => {
                            assert_eq!(v.len(), self.ambient);
                            Ok(v.clone())
                        }
                        FieldVector::Q(_) => Err(MatroidError::FieldMismatch),
                    })
                    .collect::<Result<_, _>>()?;
                let q = QuotientMap::new(f, &g, self.ambient);
                let new_cols =
                    c.iter().map(|slot| slot.as_ref().map(|v| q.project(f, v))).collect();
                Ok(LinearMatroid {
                    rep: Rep::P(*f, new_cols),
                    ambient: self.ambient - q.dim_dropped(),
                })
            }
        }
    }

    /// Image of an ambient-coordinate vector under the quotient by the span
    /// of the generators.
    pub fn project_vector(
        &self,
        gens: &[FieldVector],
        v: &FieldVector,
    ) -> Result<FieldVector, MatroidError> {
        match (&self.rep, v) {
            (Rep::Q(_), FieldVector::Q(vq)) => {
                let g: Vec<Vec<Rational>> = gens
                    .iter()
                    .map(|x| match x {
                        FieldVector::Q(x) => Ok(x.clone()),
                        _ => Err(MatroidError::FieldMismatch),
                    })
                    .collect::<Result<_, _>>()?;
                let q = QuotientMap::new(&QField, &g, self.ambient);
                Ok(FieldVector::Q(q.project(&QField, vq)))
            }
            (Rep::P(f, _), FieldVector::P(vp)) => {
                let g: Vec<Vec<u64>> = gens
                    .iter()
                    .map(|x| match x {
                        FieldVector::P(x) => Ok(x.clone()),
                        _ => Err(MatroidError::FieldMismatch),
                    })
                    .collect::<Result<_, _>>()?;
                let q = QuotientMap::new(f, &g, self.ambient);
                Ok(FieldVector::P(q.project(f, vp)))
            }
            _ => Err(MatroidError::FieldMismatch),
        }
    }

    /// The quotient map used by `contract_subspace`, exposed so callers can
    /// lift quotient-space vectors back to canonical ambient preimages.
    pub fn lift_from_quotient(
        &self,
        gens: &[FieldVector],
        v: &FieldVector,
    ) -> Result<FieldVector, MatroidError> {
        match (&self.rep, v) {
            (Rep::Q(_), FieldVector::Q(vq)) => {
                let g: Vec<Vec<Rational>> = gens
                    .iter()
                    .map(|x| match x {
                        FieldVector::Q(x) => Ok(x.clone()),
                        _ => Err(MatroidError::FieldMismatch),
                    })
                    .collect::<Result<_, _>>()?;
                let q = QuotientMap::new(&QField, &g, self.ambient);
                Ok(FieldVector::Q(q.lift(&QField, vq)))
            }
            (Rep::P(f, _), FieldVector::P(vp)) => {
                let g: Vec<Vec<u64>> = gens
                    .iter()
                    .map(|x| match x {
                        FieldVector::P(x) => Ok(x.clone()),
                        _ => Err(MatroidError::FieldMismatch),
                    })
                    .collect::<Result<_, _>>()?;
                let q = QuotientMap::new(f, &g, self.ambient);
                Ok(FieldVector::P(q.lift(f, vp)))
            }
            _ => Err(MatroidError::FieldMismatch),
        }
    }

    /// kM: k-1 parallel copies of each non-loop element, k-1 extra loops per
    /// loop. Element i of M becomes elements i*k .. i*k+k-1.
    pub fn clone_k(&self, k: usize) -> LinearMatroid {
        assert!(k >= 1);
        fn go<F: Clone>(cols: &[Option<Vec<F>>], k: usize) -> Vec<Option<Vec<F>>> {
            let mut out = Vec::new();
            for slot in cols.iter() {
                if let Some(v) = slot {
                    for _ in 0..k {
                        out.push(Some(v.clone()));
                    }
                }
            }
            out
        }
        match &self.rep {
            Rep::Q(c) => LinearMatroid { rep: Rep::Q(go(c, k)), ambient: self.ambient },
            Rep::P(f, c) => LinearMatroid { rep: Rep::P(*f, go(c, k)), ambient: self.ambient },
        }
    }

    /// Identical independence structure over all subsets, compared through
    /// the rank oracles. Live ground sets are aligned by order.
    pub fn matroid_equal(&self, other: &LinearMatroid) -> Result<bool, MatroidError> {
        let a = self.live();
        let b = other.live();
        if a.len() != b.len() {
            return Ok(false);
        }
        if a.len() > 16 {
            return Err(MatroidError::TooLarge);
        }
        for mask in 0u32..(1 << a.len()) {
            let sa: Vec<usize> =
                (0..a.len()).filter(|i| mask >> i & 1 == 1).map(|i| a[i]).collect();
            let sb: Vec<usize> =
                (0..b.len()).filter(|i| mask >> i & 1 == 1).map(|i| b[i]).collect();
            if self.rank(&sa)? != other.rank(&sb)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Live elements sitting at the pivot columns of the RREF of the live
    /// representation matrix; their columns are a canonical basis of the span.
    pub fn rref_pivot_elements(&self) -> Vec<usize> {
        let live = self.live();
        fn pivots<F: Field>(f: &F, cols: Vec<&Vec<F::Elem>>, ambient: usize) -> Vec<usize> {
            let rows: Vec<Vec<F::Elem>> =
                (0..ambient).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
            rref_rows(f, &rows).1
        }
        let ps = match &self.rep {
            Rep::Q(c) => pivots(
                &QField,
                live.iter().map(|&e| c[e].as_ref().unwrap()).collect(),
                self.ambient,
            ),
            Rep::P(f, c) => pivots(
                f,
                live.iter().map(|&e| c[e].as_ref().unwrap()).collect(),
                self.ambient,
            ),
        };
        ps.into_iter().map(|p| live[p]).collect()
    }

    /// Linear combination of the columns of `elems` with the given
    /// coefficients, in the matroid's current coordinates.
    pub fn combine_columns(
        &self,
        elems: &[usize],
        coeffs: &FieldVector,
    ) -> Result<FieldVector, MatroidError> {
        self.check_elems(elems)?;
        match (&self.rep, coeffs) {
            (Rep::Q(c), FieldVector::Q(co)) => {
                assert_eq!(co.len(), elems.len());
                let mut v = vec![Rational::zero(); self.ambient];
                for (e, x) in elems.iter().zip(co) {
                    let col = c[*e].as_ref().unwrap();
                    for i in 0..self.ambient {
                        v[i] += x * &col[i];
                    }
                }
                Ok(FieldVector::Q(v))
            }
            (Rep::P(f, c), FieldVector::P(co)) => {
                assert_eq!(co.len(), elems.len());
                let mut v = vec![0u64; self.ambient];
                for (e, x) in elems.iter().zip(co) {
                    let col = c[*e].as_ref().unwrap();
                    for i in 0..self.ambient {
                        v[i] = f.add(&v[i], &f.mul(x, &col[i]));
                    }
                }
                Ok(FieldVector::P(v))
            }
            _ => Err(MatroidError::FieldMismatch),
        }
    }

    /// Canonical memoization key: field, live indices, and the RREF of the
    /// live representation matrix (canonical under row transformations).
    pub fn canonical_key(&self) -> String {
        use std::fmt::Write;
        let live = self.live();
        let mut s = String::new();
        write!(s, "{}|{:?}|", self.field(), live).unwrap();
        match &self.rep {
            Rep::Q(c) => {
                let rows: Vec<Vec<Rational>> = (0..self.ambient)
                    .map(|i| live.iter().map(|&e| c[e].as_ref().unwrap()[i].clone()).collect())
                    .collect();
                let (r, _) = rref_rows(&QField, &rows);
                for row in r {
                    for x in row {
                        write!(s, "{}/{},", x.numer(), x.denom()).unwrap();
                    }
                    s.push(';');
                }
            }
            Rep::P(f, c) => {
                let rows: Vec<Vec<u64>> = (0..self.ambient)
                    .map(|i| live.iter().map(|&e| c[e].as_ref().unwrap()[i].clone()).collect())
                    .collect();
                let (r, _) = rref_rows(f, &rows);
                for row in r {
                    for x in row {
                        write!(s, "{x},").unwrap();
                    }
                    s.push(';');
                }
            }
        }
        s
    }

    /// Representation matrix of the live elements as a rational matrix
    /// (GF(p) residues become integers 0..p).
    pub fn representation_matrix(&self) -> RatMatrix {
        let live = self.live();
        match &self.rep {
            Rep::Q(c) => {
                let cols: Vec<Vec<Rational>> =
                    live.iter().map(|&e| c[e].as_ref().unwrap().clone()).collect();
                RatMatrix::from_columns(self.ambient, &cols)
            }
            Rep::P(_, c) => {
                let cols: Vec<Vec<Rational>> = live
                    .iter()
                    .map(|&e| {
                        c[e].as_ref()
                            .unwrap()
                            .iter()
                            .map(|&x| Rational::from_integer(BigInt::from(x)))
                            .collect()
                    })
                    .collect();
                RatMatrix::from_columns(self.ambient, &cols)
            }
        }
    }

    /// Serialization: "field q" or "field gf p" line plus the representation
    /// matrix in .rmx form.
    pub fn to_text(&self) -> String {
        format!("field {}\n{}", self.field(), self.representation_matrix().to_rmx())
    }

    pub fn parse_text(text: &str) -> Result<LinearMatroid, MatroidError> {
        let mut lines = text.lines();
        let head = lines.next().ok_or_else(|| MatroidError::Parse("empty input".into()))?;
        let rest: String = lines.collect::<Vec<_>>().join("\n");
        let a = RatMatrix::parse_rmx(&rest).map_err(|e| MatroidError::Parse(e.to_string()))?;
        let field = match head.trim() {
            "field q" => FieldSpec::Rationals,
            s if s.starts_with("field gf ") => {
                let p: u64 = s["field gf ".len()..]
                    .trim()
                    .parse()
                    .map_err(|e| MatroidError::Parse(format!("bad prime: {e}")))?;
                FieldSpec::PrimeField(p)
            }
            s => return Err(MatroidError::Parse(format!("bad field line {s:?}"))),
        };
        Self::matroid_of(&a, field)
    }
}

trait ModFloorU64 {
    fn mod_floor_u64(&self, p: u64) -> u64;
}

impl ModFloorU64 for BigInt {
    fn mod_floor_u64(&self, p: u64) -> u64 {
        use num_integer::Integer;
        let m = self.mod_floor(&BigInt::from(p));
        let (_, digits) = m.to_u64_digits();
        if m.is_negative() {
            unreachable!("mod_floor of a positive modulus is non-negative")
        }
        *digits.first().unwrap_or(&0)
    }
}

fn group_by_root(dsu: &mut Dsu, live: &[usize]) -> Vec<Vec<usize>> {
    let mut comps: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for &e in live {
        let r = dsu.find(e);
        comps.entry(r).or_default().push(e);
    }
    let mut out: Vec<Vec<usize>> = comps.into_values().collect();
    out.sort_by_key(|c| c[0]);
    out
}

/// Plain union-find.
pub struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }

    pub fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let r = self.find(self.parent[x]);
            self.parent[x] = r;
        }
        self.parent[x]
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

/// Lexicographic k-combinations of 0..n.
pub struct Combinations {
    n: usize,
    idx: Vec<usize>,
    started: bool,
    done: bool,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Combinations { n, idx: (0..k).collect(), started: false, done: k > n }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn next(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.idx);
        }
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                return None;
            }
            i -= 1;
            if self.idx[i] + 1 <= self.n - (k - i) {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                return Some(&self.idx);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::RatMatrix;

    fn u23() -> LinearMatroid {
        LinearMatroid::matroid_of(
            &RatMatrix::from_i64(&[&[1, 0, 1], &[0, 1, 1]]),
            FieldSpec::Rationals,
        )
        .unwrap()
    }

    #[test]
    fn identity_matroid() {
        let m =
            LinearMatroid::matroid_of(&RatMatrix::identity(2), FieldSpec::Rationals).unwrap();
        assert_eq!(m.rank_full(), 2);
        assert_eq!(m.components().len(), 2);
        assert!(m.circuits().is_empty());
    }

    #[test]
    fn u23_structure() {
        let m = u23();
        assert_eq!(m.rank(&[0, 1, 2]).unwrap(), 2);
        assert_eq!(m.rank(&[]).unwrap(), 0);
        assert_eq!(m.rank(&[0]).unwrap(), 1);
        let circuits = m.circuits();
        assert_eq!(circuits_as_vecs(&circuits), vec![vec![0, 1, 2]]);
        assert!(m.is_connected());
    }

    fn circuits_as_vecs(cs: &[BTreeSet<usize>]) -> Vec<Vec<usize>> {
        cs.iter().map(|c| c.iter().copied().collect()).collect()
    }

    #[test]
    fn not_integral_over_gfp() {
        let a = RatMatrix::parse_rmx("1 1\n1/2\n").unwrap();
        assert_eq!(
            LinearMatroid::matroid_of(&a, FieldSpec::PrimeField(5)),
            Err(MatroidError::NotIntegral)
        );
    }

    #[test]
    fn components_examples() {
        let id3 =
            LinearMatroid::matroid_of(&RatMatrix::identity(3), FieldSpec::Rationals).unwrap();
        assert_eq!(id3.components().len(), 3);
        let pair = LinearMatroid::matroid_of(
            &RatMatrix::from_i64(&[&[1, 1]]),
            FieldSpec::Rationals,
        )
        .unwrap();
        assert_eq!(pair.components(), vec![vec![0, 1]]);
        let with_zero = LinearMatroid::matroid_of(
            &RatMatrix::from_i64(&[&[1, 0], &[0, 0]]),
            FieldSpec::Rationals,
        )
        .unwrap();
        assert_eq!(with_zero.components().len(), 2);
        assert!(with_zero.is_loop(1));
    }

    #[test]
    fn components_match_oracle_on_random_instances() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for _ in 0..60 {
            let rows = rng.gen_range(1..=3);
            let cols = rng.gen_range(1..=6);
            let a = RatMatrix::from_i64(
                &(0..rows)
                    .map(|_| (0..cols).map(|_| rng.gen_range(-2i64..=2)).collect::<Vec<_>>())
                    .collect::<Vec<_>>()
                    .iter()
                    .map(|r| r.as_slice())
                    .collect::<Vec<_>>(),
            );
            let m = LinearMatroid::matroid_of(&a, FieldSpec::Rationals).unwrap();
            assert_eq!(m.components(), m.components_oracle(), "matrix {a}");
        }
    }

    #[test]
    fn dual_examples() {
        let id = LinearMatroid::matroid_of(&RatMatrix::identity(3), FieldSpec::Rationals).unwrap();
        let d = id.dualize();
        assert_eq!(d.rank_full(), 0);
        assert!((0..3).all(|e| d.is_loop(e)));

        let pair =
            LinearMatroid::matroid_of(&RatMatrix::from_i64(&[&[1, 1]]), FieldSpec::Rationals)
                .unwrap();
        let dp = pair.dualize();
        assert_eq!(dp.rank_full(), 1);
        assert_eq!(dp.rank(&[0]).unwrap(), 1);
        assert_eq!(dp.rank(&[0, 1]).unwrap(), 1);
    }

    #[test]
    fn dual_rank_formula_and_involution() {
        let m = u23();
        let d = m.dualize();
        let live = m.live();
        let r = m.rank_full();
        for mask in 0u32..8 {
            let s: Vec<usize> =
                (0..3).filter(|i| mask >> i & 1 == 1).map(|i| live[i]).collect();
            let comp: Vec<usize> =
                live.iter().copied().filter(|e| !s.contains(e)).collect();
            assert_eq!(
                d.rank(&s).unwrap(),
                m.rank(&comp).unwrap() + s.len() - r,
                "dual rank formula at {s:?}"
            );
        }
        assert!(m.matroid_equal(&d.dualize()).unwrap());
    }

    #[test]
    fn minor_examples() {
        let m = u23();
        let contracted = m.minor(&[], &[0]).unwrap();
        assert_eq!(contracted.rank(&[1, 2]).unwrap(), 1);
        assert_eq!(contracted.rank(&[1]).unwrap(), 1);
        assert!(m.minor(&[0], &[0]).is_err());
        let empty = m.minor(&[0, 1, 2], &[]).unwrap();
        assert!(empty.live().is_empty());
    }

    #[test]
    fn minor_dual_exchange() {
        // (M/e)* has the same rank function as M* \ e
        let m = u23();
        for e in 0..3 {
            let lhs = m.minor(&[], &[e]).unwrap().dualize();
            let rhs = m.dualize().minor(&[e], &[]).unwrap();
            assert!(lhs.matroid_equal(&rhs).unwrap(), "element {e}");
        }
    }

    #[test]
    fn contract_subspace_examples() {
        let m = u23();
        let same = m.contract_subspace(&[]).unwrap();
        assert!(m.matroid_equal(&same).unwrap());
        let killed = m
            .contract_subspace(&[
                FieldVector::Q(vec![Rational::one(), Rational::zero()]),
                FieldVector::Q(vec![Rational::zero(), Rational::one()]),
            ])
            .unwrap();
        assert_eq!(killed.rank_full(), 0);
        assert_eq!(killed.live().len(), 3);
    }

    #[test]
    fn clone_k_examples() {
        let m = u23();
        assert!(m.clone_k(1).matroid_equal(&m).unwrap());
        let single = LinearMatroid::matroid_of(
            &RatMatrix::from_i64(&[&[1]]),
            FieldSpec::Rationals,
        )
        .unwrap();
        let two = single.clone_k(2);
        assert_eq!(two.live().len(), 2);
        assert_eq!(two.rank_full(), 1);
        let a_loop = LinearMatroid::matroid_of(
            &RatMatrix::from_i64(&[&[0]]),
            FieldSpec::Rationals,
        )
        .unwrap();
        let three = a_loop.clone_k(3);
        assert_eq!(three.live().len(), 3);
        assert_eq!(three.rank_full(), 0);
    }

    #[test]
    fn matroid_equal_examples() {
        let m = u23();
        assert!(m.matroid_equal(&m).unwrap());
        let idq =
            LinearMatroid::matroid_of(&RatMatrix::identity(2), FieldSpec::Rationals).unwrap();
        let id2 =
            LinearMatroid::matroid_of(&RatMatrix::identity(2), FieldSpec::PrimeField(2)).unwrap();
        assert!(idq.matroid_equal(&id2).unwrap());
        let a = RatMatrix::from_i64(&[&[1, 2]]);
        let over_q = LinearMatroid::matroid_of(&a, FieldSpec::Rationals).unwrap();
        let over_2 = LinearMatroid::matroid_of(&a, FieldSpec::PrimeField(2)).unwrap();
        assert!(!over_q.matroid_equal(&over_2).unwrap());
    }

    #[test]
    fn rank_monotone_and_submodular_small() {
        let m = u23();
        let live = m.live();
        let n = live.len();
        let rank_of = |mask: u32| {
            let s: Vec<usize> =
                (0..n).filter(|i| mask >> i & 1 == 1).map(|i| live[i]).collect();
            m.rank(&s).unwrap()
        };
        for x in 0u32..(1 << n) {
            for y in 0u32..(1 << n) {
                let (rx, ry) = (rank_of(x), rank_of(y));
                if x & y == x {
                    assert!(rx <= ry);
                }
                assert!(rank_of(x | y) + rank_of(x & y) <= rx + ry);
            }
        }
    }

    #[test]
    fn serialization_round_trip() {
        let m = u23();
        let t = m.to_text();
        let back = LinearMatroid::parse_text(&t).unwrap();
        assert!(m.matroid_equal(&back).unwrap());
        let p = LinearMatroid::matroid_of(
            &RatMatrix::from_i64(&[&[1, 2], &[0, 1]]),
            FieldSpec::PrimeField(3),
        )
        .unwrap();
        let back = LinearMatroid::parse_text(&p.to_text()).unwrap();
        assert_eq!(back.field(), FieldSpec::PrimeField(3));
        assert!(p.matroid_equal(&back).unwrap());
    }

    #[test]
    fn unknown_element_after_minor() {
        let m = u23().minor(&[1], &[]).unwrap();
        assert_eq!(m.rank(&[1]), Err(MatroidError::UnknownElement(1)));
        assert_eq!(m.live(), vec![0, 2]);
    }
}
