//! Exact sparse linear algebra over [`Gq`].
//!
//! Subspaces are kept in row-echelon form where every row is normalised to a
//! leading `1` at its smallest nonzero coordinate. The set of pivot columns of
//! such a form depends only on the subspace, so quotient bases built from the
//! non-pivot columns are canonical regardless of insertion order.

use num_traits::{One, Zero};

use crate::scalar::Gq;

/// Sparse vector: strictly increasing indices, no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseVec {
    entries: Vec<(usize, Gq)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec {
            entries: Vec::new(),
        }
    }

    pub fn unit(i: usize) -> Self {
        SparseVec {
            entries: vec![(i, Gq::one())],
        }
    }

    pub fn single(i: usize, v: Gq) -> Self {
        if v.is_zero() {
            SparseVec::new()
        } else {
            SparseVec {
                entries: vec![(i, v)],
            }
        }
    }

    /// Builds from unsorted pairs, summing duplicates.
    pub fn from_pairs<I: IntoIterator<Item = (usize, Gq)>>(pairs: I) -> Self {
        let mut v: Vec<(usize, Gq)> = pairs.into_iter().collect();
        v.sort_by_key(|(i, _)| *i);
        let mut out: Vec<(usize, Gq)> = Vec::with_capacity(v.len());
        for (i, x) in v {
            match out.last_mut() {
                Some((j, y)) if *j == i => *y += &x,
                _ => out.push((i, x)),
            }
        }
        out.retain(|(_, x)| !x.is_zero());
        SparseVec { entries: out }
    }

    pub fn from_dense(d: &[Gq]) -> Self {
        SparseVec {
            entries: d
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| (i, x.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, n: usize) -> Vec<Gq> {
        let mut d = vec![Gq::zero(); n];
        for (i, x) in &self.entries {
            d[*i] = x.clone();
        }
        d
    }

    pub fn entries(&self) -> &[(usize, Gq)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize) -> Gq {
        match self.entries.binary_search_by_key(&i, |(j, _)| *j) {
            Ok(k) => self.entries[k].1.clone(),
            Err(_) => Gq::zero(),
        }
    }

    pub fn leading(&self) -> Option<usize> {
        self.entries.first().map(|(i, _)| *i)
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|(i, _)| *i)
    }

    pub fn scaled(&self, c: &Gq) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec {
            entries: self.entries.iter().map(|(i, x)| (*i, x * c)).collect(),
        }
    }

    pub fn conj(&self) -> SparseVec {
        SparseVec {
            entries: self.entries.iter().map(|(i, x)| (*i, x.conj())).collect(),
        }
    }

    /// `self + c·other`.
    pub fn axpy(&self, c: &Gq, other: &SparseVec) -> SparseVec {
        if c.is_zero() || other.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (0, 0);
        let (xs, ys) = (&self.entries, &other.entries);
        while a < xs.len() || b < ys.len() {
            if b >= ys.len() || (a < xs.len() && xs[a].0 < ys[b].0) {
                out.push(xs[a].clone());
                a += 1;
            } else if a >= xs.len() || ys[b].0 < xs[a].0 {
                out.push((ys[b].0, c * &ys[b].1));
                b += 1;
            } else {
                let s = &xs[a].1 + &(c * &ys[b].1);
                if !s.is_zero() {
                    out.push((xs[a].0, s));
                }
                a += 1;
                b += 1;
            }
        }
        SparseVec { entries: out }
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        self.axpy(&Gq::one(), other)
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        self.axpy(&Gq::int(-1), other)
    }

    /// Reindexes coordinates through `f`, summing collisions.
    pub fn map_indices(&self, f: impl Fn(usize) -> usize) -> SparseVec {
        SparseVec::from_pairs(self.entries.iter().map(|(i, x)| (f(*i), x.clone())))
    }

    pub fn iter(&self) -> impl Iterator<Item = &(usize, Gq)> {
        self.entries.iter()
    }
}

/// Accumulates `Σ c_k v_k` without repeated merges.
#[derive(Default)]
pub struct Accumulator {
    pairs: Vec<(usize, Gq)>,
}

impl Accumulator {
    pub fn new() -> Self {
        Accumulator::default()
    }
    pub fn add(&mut self, i: usize, x: Gq) {
        if !x.is_zero() {
            self.pairs.push((i, x));
        }
    }
    pub fn add_scaled(&mut self, c: &Gq, v: &SparseVec) {
        if c.is_zero() {
            return;
        }
        for (i, x) in v.iter() {
            self.pairs.push((*i, c * x));
        }
    }
    pub fn finish(self) -> SparseVec {
        SparseVec::from_pairs(self.pairs)
    }
}

/// A subspace of `Gq^n` in normalised row-echelon form.
#[derive(Clone, Debug)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<Option<SparseVec>>,
    rank: usize,
}

impl Subspace {
    pub fn new(ambient: usize) -> Self {
        Subspace {
            ambient,
            rows: vec![None; ambient],
            rank: 0,
        }
    }

    pub fn spanned_by<'a, I: IntoIterator<Item = &'a SparseVec>>(ambient: usize, gens: I) -> Self {
        let mut s = Subspace::new(ambient);
        for g in gens {
            s.insert(g.clone());
        }
        s
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn codim(&self) -> usize {
        self.ambient - self.rank
    }

    pub fn is_pivot(&self, c: usize) -> bool {
        self.rows[c].is_some()
    }

    /// Eliminates every pivot coordinate of `v`. The result is the unique
    /// representative of `v + self` vanishing on all pivot columns.
    pub fn reduce(&self, mut v: SparseVec) -> SparseVec {
        let mut start = 0usize;
        loop {
            let next = v
                .entries
                .iter()
                .find(|(c, _)| *c >= start && self.rows[*c].is_some())
                .map(|(c, x)| (*c, x.clone()));
            match next {
                None => return v,
                Some((c, x)) => {
                    let row = self.rows[c].as_ref().expect("pivot row");
                    v = v.axpy(&(-x), row);
                    start = c + 1;
                }
            }
        }
    }

    /// Adds `v` to the spanning set; returns whether the rank grew.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        debug_assert!(v.max_index().is_none_or(|m| m < self.ambient));
        let r = self.reduce(v);
        match r.entries.first().map(|(c, x)| (*c, x.clone())) {
            None => false,
            Some((c, lead)) => {
                let row = r.scaled(&lead.inv());
                self.rows[c] = Some(row);
                self.rank += 1;
                true
            }
        }
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v.clone()).is_zero()
    }

    /// Non-pivot coordinates in increasing order.
    pub fn complement_basis(&self) -> Vec<usize> {
        (0..self.ambient).filter(|c| self.rows[*c].is_none()).collect()
    }

    pub fn pivot_rows(&self) -> impl Iterator<Item = (usize, &SparseVec)> {
        self.rows
            .iter()
            .enumerate()
            .filter_map(|(c, r)| r.as_ref().map(|r| (c, r)))
    }

    /// A basis of the subspace itself (the echelon rows).
    pub fn basis(&self) -> Vec<SparseVec> {
        self.pivot_rows().map(|(_, r)| r.clone()).collect()
    }
}

/// A linear map `Gq^cols → Gq^rows`, stored by the images of basis vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    pub rows: usize,
    pub cols: usize,
    pub columns: Vec<SparseVec>,
}

impl LinearMap {
    pub fn from_columns(rows: usize, columns: Vec<SparseVec>) -> Self {
        LinearMap {
            rows,
            cols: columns.len(),
            columns,
        }
    }

    pub fn identity(n: usize) -> Self {
        LinearMap::from_columns(n, (0..n).map(SparseVec::unit).collect())
    }

    pub fn from_dense_rows(rows: &[Vec<Gq>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let columns = (0..c)
            .map(|j| SparseVec::from_pairs((0..r).map(|i| (i, rows[i][j].clone()))))
            .collect();
        LinearMap::from_columns(r, columns)
    }

    pub fn to_dense_rows(&self) -> Vec<Vec<Gq>> {
        let mut out = vec![vec![Gq::zero(); self.cols]; self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for (i, x) in col.iter() {
                out[*i][j] = x.clone();
            }
        }
        out
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut acc = Accumulator::new();
        for (j, x) in v.iter() {
            acc.add_scaled(x, &self.columns[*j]);
        }
        acc.finish()
    }

    pub fn compose(&self, inner: &LinearMap) -> LinearMap {
        assert_eq!(self.cols, inner.rows, "dimension mismatch in compose");
        LinearMap::from_columns(
            self.rows,
            inner.columns.iter().map(|c| self.apply(c)).collect(),
        )
    }

    pub fn rank(&self) -> usize {
        Subspace::spanned_by(self.rows, self.columns.iter()).rank()
    }

    pub fn is_bijective(&self) -> bool {
        self.rows == self.cols && self.rank() == self.cols
    }

    /// First basis vector whose image is nonzero, if any.
    pub fn first_nonzero_column(&self) -> Option<usize> {
        self.columns.iter().position(|c| !c.is_zero())
    }
}

/// Sparse linear system `Σ_j a_ij x_j = b_i` over `Gq`.
pub struct LinearSystem {
    unknowns: usize,
    echelon: Subspace,
    inconsistent: bool,
    equations: usize,
}

impl LinearSystem {
    pub fn new(unknowns: usize) -> Self {
        LinearSystem {
            unknowns,
            echelon: Subspace::new(unknowns + 1),
            inconsistent: false,
            equations: 0,
        }
    }

    pub fn equations(&self) -> usize {
        self.equations
    }

    pub fn add_equation(&mut self, lhs: SparseVec, rhs: Gq) {
        self.equations += 1;
        if self.inconsistent {
            return;
        }
        let row = lhs.axpy(&Gq::one(), &SparseVec::single(self.unknowns, rhs));
        let r = self.echelon.reduce(row);
        if r.leading() == Some(self.unknowns) {
            self.inconsistent = true;
        } else if !r.is_zero() {
            self.echelon.insert(r);
        }
    }

    /// A particular solution with all free variables set to zero.
    pub fn solve(&self) -> Option<Vec<Gq>> {
        if self.inconsistent {
            return None;
        }
        let n = self.unknowns;
        let mut x = vec![Gq::zero(); n];
        let pivots: Vec<(usize, &SparseVec)> = self.echelon.pivot_rows().collect();
        for (c, row) in pivots.into_iter().rev() {
            let mut val = row.get(n);
            for (j, a) in row.iter() {
                if *j > c && *j < n && !x[*j].is_zero() {
                    val -= &(a * &x[*j]);
                }
            }
            x[c] = val;
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn dv(xs: &[i64]) -> SparseVec {
        SparseVec::from_dense(&xs.iter().map(|x| Gq::int(*x)).collect::<Vec<_>>())
    }

    #[test]
    fn echelon_rank_and_reduce() {
        let mut s = Subspace::new(3);
        assert!(s.insert(dv(&[1, 1, 0])));
        assert!(s.insert(dv(&[0, 1, 1])));
        assert!(!s.insert(dv(&[1, 2, 1])));
        assert_eq!(s.rank(), 2);
        assert_eq!(s.complement_basis(), vec![2]);
        // (0,0,1) is not in the span, its class is represented by itself
        assert_eq!(s.reduce(dv(&[0, 0, 1])), dv(&[0, 0, 1]));
        // (1,0,0) ≡ (1,0,0) - (1,1,0) + (0,1,1) = (0,0,1)
        assert_eq!(s.reduce(dv(&[1, 0, 0])), dv(&[0, 0, 1]));
    }

    #[test]
    fn pivot_set_is_order_independent() {
        let gens = [dv(&[0, 2, 1, 0]), dv(&[1, 0, 0, 3]), dv(&[1, 2, 1, 3])];
        let a = Subspace::spanned_by(4, gens.iter());
        let b = Subspace::spanned_by(4, gens.iter().rev());
        assert_eq!(a.complement_basis(), b.complement_basis());
    }

    #[test]
    fn solve_small_system() {
        // x + y = 3, x - y = 1
        let mut sys = LinearSystem::new(2);
        sys.add_equation(dv(&[1, 1]), Gq::int(3));
        sys.add_equation(dv(&[1, -1]), Gq::int(1));
        assert_eq!(sys.solve().unwrap(), vec![Gq::int(2), Gq::int(1)]);
        sys.add_equation(dv(&[2, 2]), Gq::int(5));
        assert!(sys.solve().is_none());
    }

    #[test]
    fn underdetermined_system_sets_free_vars_to_zero() {
        let mut sys = LinearSystem::new(3);
        sys.add_equation(dv(&[2, 0, 1]), Gq::int(1));
        let x = sys.solve().unwrap();
        assert_eq!(x, vec![Gq::frac(1, 2), Gq::zero(), Gq::zero()]);
        assert_eq!(Gq::real(rat(1, 2)), x[0]);
    }

    #[test]
    fn map_rank() {
        let m = LinearMap::from_dense_rows(&[
            vec![Gq::int(1), Gq::int(2)],
            vec![Gq::int(2), Gq::int(4)],
        ]);
        assert_eq!(m.rank(), 1);
        assert!(!m.is_bijective());
        assert!(LinearMap::identity(3).is_bijective());
    }
}
