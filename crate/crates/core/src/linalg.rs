//! Linear algebra over a prime field F_q.
//!
//! Subspaces are always kept in reduced row-echelon form, so two
//! [`FqSubspace`] values are equal exactly when they describe the same
//! subspace. Every enumeration order here is fixed: vectors of a subspace
//! follow little-endian coefficient counters over the echelon basis, and
//! projective points follow [`ProjectiveIter`].

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{ExtField, Fqm};
use crate::poly::inv_mod;

/// Default bound on the number of items any enumeration may produce.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 30;

#[inline]
fn add_mod(a: u32, b: u32, q: u32) -> u32 {
    let s = a + b;
    if s >= q {
        s - q
    } else {
        s
    }
}

#[inline]
fn mul_mod(a: u32, b: u32, q: u32) -> u32 {
    ((a as u64 * b as u64) % q as u64) as u32
}

/// Dense row-major matrix over F_q.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqMatrix {
    q: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl FqMatrix {
    pub fn new(q: u32, rows: usize, cols: usize, data: Vec<u32>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: data.len() });
        }
        if let Some(bad) = data.iter().find(|&&x| x >= q) {
            return Err(Error::InvalidParameters(alloc::format!("entry {bad} not reduced mod {q}")));
        }
        Ok(FqMatrix { q, rows, cols, data })
    }

    pub fn zeros(q: u32, rows: usize, cols: usize) -> Self {
        FqMatrix { q, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(q: u32, n: usize) -> Self {
        let mut m = Self::zeros(q, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % q;
        }
        m
    }

    /// Stacks `rows`, all of length `cols`.
    pub fn from_rows(q: u32, cols: usize, rows: &[Vec<u32>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: r.len() });
            }
            data.extend_from_slice(r);
        }
        Self::new(q, rows.len(), cols, data)
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.q;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.q, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn mul(&self, other: &FqMatrix) -> Result<FqMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let q = self.q as u64;
        let mut out = Self::zeros(self.q, self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = 0u64;
                for k in 0..self.cols {
                    acc += self.get(r, k) as u64 * other.get(k, c) as u64;
                }
                out.data[r * other.cols + c] = (acc % q) as u32;
            }
        }
        Ok(out)
    }

    /// `self · v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        let q = self.q as u64;
        (0..self.rows)
            .map(|r| {
                let acc: u64 = self.row(r).iter().zip(v).map(|(&a, &b)| a as u64 * b as u64).sum();
                (acc % q) as u32
            })
            .collect()
    }

    /// `v · self` for a row vector `v`.
    pub fn vec_mul(&self, v: &[u32]) -> Vec<u32> {
        let q = self.q as u64;
        let mut acc = vec![0u64; self.cols];
        for (r, &x) in v.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (a, &e) in acc.iter_mut().zip(self.row(r)) {
                *a += x as u64 * e as u64;
            }
        }
        acc.into_iter().map(|a| (a % q) as u32).collect()
    }

    /// Reduced row-echelon form (zero rows kept at the bottom).
    pub fn rref(&self) -> FqMatrix {
        let mut m = self.clone();
        rref_in_place(m.q, m.rows, m.cols, &mut m.data);
        m
    }

    pub fn rank(&self) -> usize {
        let mut data = self.data.clone();
        rref_in_place(self.q, self.rows, self.cols, &mut data).len()
    }

    pub fn inverse(&self) -> Option<FqMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let w = 2 * n;
        let mut aug = vec![0u32; n * w];
        for r in 0..n {
            aug[r * w..r * w + n].copy_from_slice(self.row(r));
            aug[r * w + n + r] = 1 % self.q;
        }
        let pivots = rref_in_place(self.q, n, w, &mut aug);
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let mut inv = Self::zeros(self.q, n, n);
        for r in 0..n {
            inv.data[r * n..(r + 1) * n].copy_from_slice(&aug[r * w + n..(r + 1) * w]);
        }
        Some(inv)
    }

    /// `{x : self · x = 0}` as a subspace of F_q^cols.
    pub fn right_kernel(&self) -> FqSubspace {
        let mut data = self.data.clone();
        let pivots = rref_in_place(self.q, self.rows, self.cols, &mut data);
        let mut gens = Vec::new();
        let mut p = 0;
        for free in 0..self.cols {
            if p < pivots.len() && pivots[p] == free {
                p += 1;
                continue;
            }
            let mut v = vec![0u32; self.cols];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                let x = data[r * self.cols + free];
                v[pc] = (self.q - x) % self.q;
            }
            gens.push(v);
        }
        FqSubspace::from_matrix(&FqMatrix { q: self.q, rows: gens.len(), cols: self.cols, data: gens.concat() })
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }
}

/// Row-reduces `data` in place and returns the pivot columns.
pub(crate) fn rref_in_place(q: u32, rows: usize, cols: usize, data: &mut [u32]) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| data[i * cols + c] != 0) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                data.swap(p * cols + j, r * cols + j);
            }
        }
        let lead = data[r * cols + c];
        if lead != 1 {
            let inv = inv_mod(lead, q);
            for j in c..cols {
                data[r * cols + j] = mul_mod(data[r * cols + j], inv, q);
            }
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let f = data[i * cols + c];
            if f == 0 {
                continue;
            }
            let neg = q - f;
            for j in c..cols {
                let v = data[r * cols + j];
                if v != 0 {
                    data[i * cols + j] = add_mod(data[i * cols + j], mul_mod(neg, v, q), q);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// An F_q-subspace of F_q^n in canonical (reduced row-echelon) form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqSubspace {
    basis: FqMatrix,
    pivots: Vec<usize>,
}

impl FqSubspace {
    pub fn zero(q: u32, ambient: usize) -> Self {
        FqSubspace { basis: FqMatrix::zeros(q, 0, ambient), pivots: Vec::new() }
    }

    pub fn full(q: u32, ambient: usize) -> Self {
        Self::from_matrix(&FqMatrix::identity(q, ambient))
    }

    /// Row space of `m`.
    pub fn from_matrix(m: &FqMatrix) -> Self {
        let mut data = m.data.clone();
        let pivots = rref_in_place(m.q, m.rows, m.cols, &mut data);
        data.truncate(pivots.len() * m.cols);
        FqSubspace { basis: FqMatrix { q: m.q, rows: pivots.len(), cols: m.cols, data }, pivots }
    }

    pub fn span(q: u32, ambient: usize, vectors: &[Vec<u32>]) -> Result<Self> {
        Ok(Self::from_matrix(&FqMatrix::from_rows(q, ambient, vectors)?))
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.basis.q
    }

    #[inline]
    pub fn ambient_dim(&self) -> usize {
        self.basis.cols
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    /// The echelon basis, one row per basis vector.
    pub fn basis(&self) -> &FqMatrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check_ambient(&self, other: &FqSubspace) -> Result<()> {
        if self.ambient_dim() != other.ambient_dim() || self.q() != other.q() {
            return Err(Error::AmbientMismatch { left: self.ambient_dim(), right: other.ambient_dim() });
        }
        Ok(())
    }

    /// Reduces `v` against the echelon basis; zero iff `v` is in the subspace.
    pub fn reduce(&self, v: &mut [u32]) {
        let q = self.q();
        for (i, &p) in self.pivots.iter().enumerate() {
            let f = v[p];
            if f == 0 {
                continue;
            }
            let neg = q - f;
            for (x, &b) in v.iter_mut().zip(self.basis.row(i)) {
                if b != 0 {
                    *x = add_mod(*x, mul_mod(neg, b, q), q);
                }
            }
        }
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    pub fn is_subspace_of(&self, other: &FqSubspace) -> bool {
        self.dim() <= other.dim() && (0..self.dim()).all(|i| other.contains(self.basis.row(i)))
    }

    pub fn sum(&self, other: &FqSubspace) -> Result<FqSubspace> {
        self.check_ambient(other)?;
        let mut data = self.basis.data.clone();
        data.extend_from_slice(&other.basis.data);
        let rows = self.dim() + other.dim();
        Ok(Self::from_matrix(&FqMatrix { q: self.q(), rows, cols: self.ambient_dim(), data }))
    }

    /// `dim(self + other)` without materializing the sum.
    pub fn sum_dim(&self, other: &FqSubspace) -> Result<usize> {
        self.check_ambient(other)?;
        let mut data = self.basis.data.clone();
        data.extend_from_slice(&other.basis.data);
        Ok(rref_in_place(self.q(), self.dim() + other.dim(), self.ambient_dim(), &mut data).len())
    }

    /// `self ∩ other`, read off the left kernel of the stacked bases.
    pub fn intersect(&self, other: &FqSubspace) -> Result<FqSubspace> {
        self.check_ambient(other)?;
        let q = self.q();
        let n = self.ambient_dim();
        let (a, b) = (self.dim(), other.dim());
        let rows = a + b;
        // [ U | I_a 0 ]
        // [ W | 0 I_b ]
        let w = n + rows;
        let mut aug = vec![0u32; rows * w];
        for i in 0..a {
            aug[i * w..i * w + n].copy_from_slice(self.basis.row(i));
            aug[i * w + n + i] = 1;
        }
        for i in 0..b {
            let r = a + i;
            aug[r * w..r * w + n].copy_from_slice(other.basis.row(i));
            aug[r * w + n + r] = 1;
        }
        let pivots = rref_in_place(q, rows, w, &mut aug);
        // Rows whose pivot lies in the identity block have a zero left part:
        // their U-coefficients λ give λ·U ∈ U ∩ W.
        let mut gens = Vec::new();
        for (r, &p) in pivots.iter().enumerate() {
            if p < n {
                continue;
            }
            let lambda = &aug[r * w + n..r * w + n + a];
            gens.push(self.basis.vec_mul(lambda));
        }
        FqSubspace::span(q, n, &gens)
    }

    /// Nonzero vectors in counter order; fails if `q^dim - 1 > cap`.
    pub fn enumerate_vectors(&self, cap: u64) -> Result<VectorIter<'_>> {
        let total = (self.q() as u128).pow(self.dim() as u32) - 1;
        if total > cap as u128 {
            return Err(Error::EnumerationCapExceeded { requested: total, cap });
        }
        Ok(VectorIter::new(self, 1, total as u64 + 1))
    }

    /// Vectors with counter values in `start..end` (counter 0 is the zero vector).
    pub fn vectors_in_range(&self, start: u64, end: u64) -> VectorIter<'_> {
        VectorIter::new(self, start, end)
    }
}

/// Iterates `sum c_i b_i` for little-endian counters `c` over the echelon basis.
pub struct VectorIter<'a> {
    space: &'a FqSubspace,
    next: u64,
    end: u64,
}

impl<'a> VectorIter<'a> {
    fn new(space: &'a FqSubspace, start: u64, end: u64) -> Self {
        VectorIter { space, next: start, end }
    }
}

impl Iterator for VectorIter<'_> {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.next >= self.end {
            return None;
        }
        let q = self.space.q();
        let mut c = self.next;
        self.next += 1;
        let mut v = vec![0u32; self.space.ambient_dim()];
        for i in 0..self.space.dim() {
            let coef = (c % q as u64) as u32;
            c /= q as u64;
            if coef == 0 {
                continue;
            }
            for (x, &b) in v.iter_mut().zip(self.space.basis.row(i)) {
                *x = add_mod(*x, mul_mod(coef, b, q), q);
            }
        }
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = (self.end.saturating_sub(self.next)) as usize;
        (n, Some(n))
    }
}

/// Completes the independent rows `b` to a basis of F_q^n by appending the
/// smallest-index standard vectors outside the current span.
pub fn complete_basis(q: u32, n: usize, b: &[Vec<u32>]) -> Result<FqMatrix> {
    let mut span = FqSubspace::span(q, n, b)?;
    if span.dim() != b.len() {
        return Err(Error::DependentInput);
    }
    let mut rows: Vec<Vec<u32>> = b.to_vec();
    for i in 0..n {
        if rows.len() == n {
            break;
        }
        let mut e = vec![0u32; n];
        e[i] = 1;
        if !span.contains(&e) {
            rows.push(e.clone());
            span = span.sum(&FqSubspace::span(q, n, &[e])?)?;
        }
    }
    FqMatrix::from_rows(q, n, &rows)
}

/// Number of projective points of PG(k-1, Q): `(Q^k - 1)/(Q - 1)`.
pub fn projective_count(order: u64, k: usize) -> u128 {
    let mut total: u128 = 0;
    let mut p: u128 = 1;
    for _ in 0..k {
        total += p;
        p *= order as u128;
    }
    total
}

/// Normalized representatives of the points of PG(k-1, Q), i.e. vectors of
/// F_{q^m}^k whose first nonzero coordinate is 1.
///
/// Order: by position of the leading 1, then by the remaining coordinates
/// read as a big-endian base-Q number. The same order indexes hyperplanes
/// (through their normal vectors) and projective messages.
#[derive(Clone, Debug)]
pub struct ProjectiveIter {
    order: u64,
    k: usize,
    next: u128,
    end: u128,
}

impl ProjectiveIter {
    pub fn new(order: u64, k: usize) -> Self {
        ProjectiveIter { order, k, next: 0, end: projective_count(order, k) }
    }

    /// Points with indices in `start..end`.
    pub fn range(order: u64, k: usize, start: u128, end: u128) -> Self {
        let total = projective_count(order, k);
        ProjectiveIter { order, k, next: start.min(total), end: end.min(total) }
    }

    pub fn len_total(&self) -> u128 {
        projective_count(self.order, self.k)
    }
}

/// Decodes the `index`-th normalized vector of F_Q^k.
pub fn projective_point(order: u64, k: usize, mut index: u128) -> Vec<Fqm> {
    let mut v = vec![Fqm::ZERO; k];
    for lead in 0..k {
        let block = (order as u128).pow((k - 1 - lead) as u32);
        if index < block {
            v[lead] = Fqm::ONE;
            for pos in (lead + 1..k).rev() {
                v[pos] = Fqm::from_raw((index % order as u128) as u32);
                index /= order as u128;
            }
            return v;
        }
        index -= block;
    }
    panic!("projective index out of range");
}

/// Index of a normalized vector in [`ProjectiveIter`] order.
pub fn projective_index(order: u64, v: &[Fqm]) -> u128 {
    let k = v.len();
    let lead = v.iter().position(|x| !x.is_zero()).expect("zero vector has no projective index");
    debug_assert_eq!(v[lead], Fqm::ONE);
    let mut offset = 0u128;
    for l in 0..lead {
        offset += (order as u128).pow((k - 1 - l) as u32);
    }
    let mut tail = 0u128;
    for x in &v[lead + 1..] {
        tail = tail * order as u128 + x.encoding() as u128;
    }
    offset + tail
}

impl Iterator for ProjectiveIter {
    type Item = Vec<Fqm>;

    fn next(&mut self) -> Option<Vec<Fqm>> {
        if self.next >= self.end {
            return None;
        }
        let v = projective_point(self.order, self.k, self.next);
        self.next += 1;
        Some(v)
    }
}

/// One normal vector per F_{q^m}-hyperplane of F_{q^m}^k.
pub fn enumerate_hyperplanes(field: &ExtField, k: usize, cap: u64) -> Result<ProjectiveIter> {
    if k == 0 {
        return Err(Error::InvalidParameters("ambient dimension must be at least 1".into()));
    }
    let total = projective_count(field.order(), k);
    if total > cap as u128 {
        return Err(Error::EnumerationCapExceeded { requested: total, cap });
    }
    Ok(ProjectiveIter::new(field.order(), k))
}

/// Scales `v` so that its first nonzero coordinate is 1; `None` for zero.
pub fn normalize(field: &ExtField, v: &[Fqm]) -> Option<Vec<Fqm>> {
    let lead = v.iter().find(|x| !x.is_zero())?;
    let inv = field.inv(*lead);
    Some(v.iter().map(|&x| field.mul(x, inv)).collect())
}

/// Rank of a matrix over F_{q^m} given by rows.
pub fn ext_rank(field: &ExtField, rows: &[Vec<Fqm>]) -> usize {
    let mut m: Vec<Vec<Fqm>> = rows.to_vec();
    ext_rref(field, &mut m).len()
}

/// Row-reduces over F_{q^m}; returns pivot columns. Zero rows end up last.
pub fn ext_rref(field: &ExtField, m: &mut [Vec<Fqm>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(p, r);
        let inv = field.inv(m[r][c]);
        for j in c..cols {
            m[r][j] = field.mul(m[r][j], inv);
        }
        for i in 0..rows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c];
            for j in c..cols {
                let t = field.mul(f, m[r][j]);
                m[i][j] = field.sub(m[i][j], t);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of `{v ∈ F_{q^m}^k : r · v = 0 for every row r}`.
pub fn ext_null_space(field: &ExtField, k: usize, rows: &[Vec<Fqm>]) -> Vec<Vec<Fqm>> {
    let mut m: Vec<Vec<Fqm>> = rows.to_vec();
    let pivots = ext_rref(field, &mut m);
    let mut out = Vec::new();
    for free in (0..k).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Fqm::ZERO; k];
        v[free] = Fqm::ONE;
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = field.neg(m[r][free]);
        }
        out.push(v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_span_size(q: u32, rows: &[Vec<u32>]) -> usize {
        // Every combination of the rows, collected as a set.
        let n = rows[0].len();
        let mut seen = alloc::collections::BTreeSet::new();
        let combos = (q as usize).pow(rows.len() as u32);
        for mut c in 0..combos {
            let mut v = vec![0u32; n];
            for r in rows {
                let coef = (c % q as usize) as u32;
                c /= q as usize;
                for (x, &b) in v.iter_mut().zip(r) {
                    *x = (*x + coef * b) % q;
                }
            }
            seen.insert(v);
        }
        seen.len()
    }

    #[test]
    fn rref_examples() {
        let z = FqMatrix::zeros(2, 3, 4);
        assert_eq!(z.rref(), z);
        assert_eq!(z.rank(), 0);
        let id = FqMatrix::identity(3, 4);
        assert_eq!(id.rref(), id);
        assert_eq!(id.rank(), 4);
        let rows = vec![vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]];
        assert_eq!(brute_span_size(2, &rows), 4);
        let m = FqMatrix::from_rows(2, 3, &rows).unwrap();
        let r = m.rref();
        assert_eq!(r.rank(), 2);
        assert_eq!(r.row(2), &[0, 0, 0]);
        assert_eq!(r.rref(), r);
    }

    #[test]
    fn coordinate_subspace_ops() {
        let e = |i: usize| {
            let mut v = vec![0u32; 4];
            v[i] = 1;
            v
        };
        let u = FqSubspace::span(2, 4, &[e(0), e(1)]).unwrap();
        let w = FqSubspace::span(2, 4, &[e(1), e(2)]).unwrap();
        let zero = FqSubspace::zero(2, 4);
        assert_eq!(u.intersect(&w).unwrap(), FqSubspace::span(2, 4, &[e(1)]).unwrap());
        assert_eq!(u.intersect(&u).unwrap(), u);
        assert_eq!(u.intersect(&zero).unwrap(), zero);
        assert_eq!(u.sum(&zero).unwrap(), u);
        assert_eq!(u.sum(&u).unwrap(), u);
        let a = FqSubspace::span(2, 3, &[vec![1, 0, 0]]).unwrap();
        let b = FqSubspace::span(2, 3, &[vec![0, 1, 0]]).unwrap();
        assert_eq!(a.sum(&b).unwrap(), FqSubspace::span(2, 3, &[vec![1, 0, 0], vec![0, 1, 0]]).unwrap());
        assert!(matches!(u.intersect(&a), Err(Error::AmbientMismatch { .. })));
        assert!(matches!(u.sum(&a), Err(Error::AmbientMismatch { .. })));
    }

    #[test]
    fn complete_basis_examples() {
        assert_eq!(complete_basis(2, 3, &[]).unwrap(), FqMatrix::identity(2, 3));
        let got = complete_basis(2, 3, &[vec![0, 0, 1]]).unwrap();
        assert_eq!(got.row_vecs(), vec![vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]]);
        assert!(got.is_invertible());
        let full = vec![vec![1, 1, 0], vec![0, 1, 0], vec![0, 0, 1]];
        assert_eq!(complete_basis(2, 3, &full).unwrap().row_vecs(), full);
        assert_eq!(complete_basis(2, 3, &[vec![1, 1, 0], vec![1, 1, 0]]), Err(Error::DependentInput));
    }

    #[test]
    fn enumerate_vector_counts() {
        assert_eq!(FqSubspace::zero(2, 3).enumerate_vectors(100).unwrap().count(), 0);
        let one = FqSubspace::span(2, 3, &[vec![1, 0, 1]]).unwrap();
        assert_eq!(one.enumerate_vectors(100).unwrap().count(), 1);
        let all = FqSubspace::full(2, 3);
        let vs: Vec<_> = all.enumerate_vectors(100).unwrap().collect();
        assert_eq!(vs.len(), 7);
        assert!(vs.iter().all(|v| v.iter().any(|&x| x != 0)));
        assert!(matches!(all.enumerate_vectors(6), Err(Error::EnumerationCapExceeded { .. })));
        let f3 = FqSubspace::full(3, 2);
        assert_eq!(f3.enumerate_vectors(100).unwrap().count(), 8);
    }

    #[test]
    fn hyperplane_counts() {
        let f8 = ExtField::new(2, 3, None).unwrap();
        assert_eq!(enumerate_hyperplanes(&f8, 2, 1 << 20).unwrap().count(), 9);
        let hs: Vec<_> = enumerate_hyperplanes(&f8, 1, 10).unwrap().collect();
        assert_eq!(hs, vec![vec![Fqm::ONE]]);
        let f32 = ExtField::new(2, 5, None).unwrap();
        let all: Vec<_> = enumerate_hyperplanes(&f32, 3, 1 << 20).unwrap().collect();
        assert_eq!(all.len(), 1057);
        for (i, h) in all.iter().enumerate() {
            assert_eq!(projective_index(32, h), i as u128);
        }
        assert!(enumerate_hyperplanes(&f32, 3, 1000).is_err());
    }

    #[test]
    fn right_kernel_examples() {
        let m = FqMatrix::from_rows(3, 3, &[vec![1, 2, 0], vec![0, 0, 1]]).unwrap();
        let k = m.right_kernel();
        assert_eq!(k.dim(), 1);
        assert!(k.contains(&[1, 1, 0]));
        assert_eq!(FqMatrix::zeros(2, 2, 4).right_kernel(), FqSubspace::full(2, 4));
        assert_eq!(FqMatrix::identity(5, 3).right_kernel(), FqSubspace::zero(5, 3));
    }

    #[test]
    fn inverse_roundtrip() {
        let m = FqMatrix::from_rows(3, 2, &[vec![1, 2], vec![2, 2]]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), FqMatrix::identity(3, 2));
        let s = FqMatrix::from_rows(3, 2, &[vec![1, 2], vec![2, 1]]).unwrap();
        assert!(s.inverse().is_none());
    }

    #[test]
    fn ext_null_space_is_orthogonal() {
        let f = ExtField::new(2, 4, None).unwrap();
        let a = f.alpha();
        let rows = vec![vec![Fqm::ONE, a, f.mul(a, a)]];
        let ns = ext_null_space(&f, 3, &rows);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            let dot = (0..3).fold(Fqm::ZERO, |acc, i| f.add(acc, f.mul(rows[0][i], v[i])));
            assert!(dot.is_zero());
        }
        assert_eq!(ext_rank(&f, &ns), 2);
    }
}
