//! Linear rank-metric codes `C = rowspan(G) ⊆ F_{q^m}^n`.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use once_cell::race::OnceBox;

use crate::error::{Error, Result};
use crate::field::{ExtField, Fqm};
use crate::linalg::{ext_rank, projective_count, FqMatrix, FqSubspace, ProjectiveIter, DEFAULT_ENUMERATION_CAP};

/// Minimum distance together with the rank distribution of projective codewords.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spectrum {
    pub min_distance: usize,
    /// rank -> number of projective codewords of that rank.
    pub counts: BTreeMap<usize, u64>,
}

/// An `[n, k]_{q^m/q}` code given by a full-rank generator matrix.
pub struct RankCode {
    field: Arc<ExtField>,
    generator: Vec<Vec<Fqm>>,
    n: usize,
    spectrum: OnceBox<Spectrum>,
}

impl Clone for RankCode {
    fn clone(&self) -> Self {
        RankCode { field: self.field.clone(), generator: self.generator.clone(), n: self.n, spectrum: OnceBox::new() }
    }
}

impl fmt::Debug for RankCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RankCode")
            .field("q", &self.field.q())
            .field("m", &self.field.m())
            .field("n", &self.n)
            .field("k", &self.k())
            .field("generator", &self.generator)
            .finish()
    }
}

impl PartialEq for RankCode {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.generator == other.generator
    }
}

impl Eq for RankCode {}

impl RankCode {
    /// Validates that `generator` (k rows of length n) has full row rank.
    pub fn new(field: Arc<ExtField>, generator: Vec<Vec<Fqm>>) -> Result<Self> {
        let k = generator.len();
        if k == 0 {
            return Err(Error::InvalidParameters("generator has no rows".into()));
        }
        let n = generator[0].len();
        if n == 0 {
            return Err(Error::InvalidParameters("generator has no columns".into()));
        }
        if let Some(r) = generator.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: r.len() });
        }
        if let Some(x) = generator.iter().flatten().find(|x| x.encoding() >= field.order()) {
            return Err(Error::InvalidParameters(alloc::format!(
                "entry {} is not an element of the field",
                x.encoding()
            )));
        }
        let rank = ext_rank(&field, &generator);
        if rank < k {
            return Err(Error::RankDeficientGenerator { rank, rows: k });
        }
        Ok(RankCode { field, generator, n, spectrum: OnceBox::new() })
    }

    #[inline]
    pub fn field(&self) -> &ExtField {
        &self.field
    }

    pub fn field_arc(&self) -> &Arc<ExtField> {
        &self.field
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.generator.len()
    }

    pub fn generator(&self) -> &[Vec<Fqm>] {
        &self.generator
    }

    /// Column `j` of the generator matrix.
    pub fn column(&self, j: usize) -> Vec<Fqm> {
        self.generator.iter().map(|r| r[j]).collect()
    }

    /// `u · G`.
    pub fn encode(&self, u: &[Fqm]) -> Vec<Fqm> {
        let f = &*self.field;
        let mut out = vec![Fqm::ZERO; self.n];
        for (row, &ui) in self.generator.iter().zip(u) {
            if ui.is_zero() {
                continue;
            }
            for (o, &g) in out.iter_mut().zip(row) {
                *o = f.add(*o, f.mul(ui, g));
            }
        }
        out
    }

    /// Number of projective codewords, `(q^{mk} - 1)/(q^m - 1)`.
    pub fn projective_len(&self) -> u128 {
        projective_count(self.field.order(), self.k())
    }

    /// One normalized message per projective point of F_{q^m}^k.
    pub fn projective_messages(&self, cap: u64) -> Result<ProjectiveIter> {
        let total = self.projective_len();
        if total > cap as u128 {
            return Err(Error::EnumerationCapExceeded { requested: total, cap });
        }
        Ok(ProjectiveIter::new(self.field.order(), self.k()))
    }

    /// `Mat_Γ(x)`: the m×n matrix whose column j is `expand(x_j)`.
    pub fn codeword_matrix(&self, x: &[Fqm]) -> FqMatrix {
        codeword_matrix(&self.field, x)
    }

    pub fn rank_of(&self, x: &[Fqm]) -> usize {
        rank_of(&self.field, x)
    }

    /// `σ(x)`, the row space of `Mat_Γ(x)` in F_q^n.
    pub fn support(&self, x: &[Fqm]) -> FqSubspace {
        support(&self.field, x)
    }

    /// Minimum rank over nonzero codewords (cached with the spectrum).
    pub fn min_distance(&self, cap: u64) -> Result<usize> {
        Ok(self.spectrum(cap)?.min_distance)
    }

    pub fn weight_spectrum(&self, cap: u64) -> Result<&Spectrum> {
        self.spectrum(cap)
    }

    fn spectrum(&self, cap: u64) -> Result<&Spectrum> {
        if let Some(s) = self.spectrum.get() {
            return Ok(s);
        }
        let mut counts = BTreeMap::new();
        for u in self.projective_messages(cap)? {
            *counts.entry(self.rank_of(&self.encode(&u))).or_insert(0u64) += 1;
        }
        let min_distance = *counts.keys().next().expect("a code has nonzero codewords");
        Ok(self.spectrum.get_or_init(|| Box::new(Spectrum { min_distance, counts })))
    }

    /// Spectrum with the default enumeration cap.
    pub fn distance(&self) -> Result<usize> {
        self.min_distance(DEFAULT_ENUMERATION_CAP)
    }

    /// The F_q-rank of the mk×n matrix of expanded columns equals n.
    pub fn is_nondegenerate(&self) -> bool {
        self.column_rank() == self.n
    }

    /// F_q-dimension of the span of the columns of G.
    pub fn column_rank(&self) -> usize {
        let m = self.field.m() as usize;
        let k = self.k();
        // Rows of this matrix are the expanded columns of G.
        let mut mat = FqMatrix::zeros(self.field.q(), self.n, m * k);
        let mut buf = vec![0u32; m];
        for j in 0..self.n {
            for (i, row) in self.generator.iter().enumerate() {
                self.field.expand_into(row[j], &mut buf);
                for (t, &c) in buf.iter().enumerate() {
                    mat.set(j, i * m + t, c);
                }
            }
        }
        mat.rank()
    }

    /// The code `C · A` for an invertible `A ∈ GL(n, q)`.
    pub fn apply_equivalence(&self, a: &FqMatrix) -> Result<RankCode> {
        if a.rows() != self.n || a.cols() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: a.rows() });
        }
        if a.q() != self.field.q() || !a.is_invertible() {
            return Err(Error::SingularMatrix);
        }
        let f = &*self.field;
        let generator = self
            .generator
            .iter()
            .map(|row| {
                (0..self.n)
                    .map(|j| row.iter().enumerate().fold(Fqm::ZERO, |acc, (l, &g)| f.add(acc, f.scale(g, a.get(l, j)))))
                    .collect()
            })
            .collect();
        RankCode::new(self.field.clone(), generator)
    }
}

pub fn codeword_matrix(field: &ExtField, x: &[Fqm]) -> FqMatrix {
    let m = field.m() as usize;
    let n = x.len();
    let mut mat = FqMatrix::zeros(field.q(), m, n);
    let mut buf = vec![0u32; m];
    for (j, &xj) in x.iter().enumerate() {
        field.expand_into(xj, &mut buf);
        for (i, &c) in buf.iter().enumerate() {
            mat.set(i, j, c);
        }
    }
    mat
}

pub fn rank_of(field: &ExtField, x: &[Fqm]) -> usize {
    if x.iter().all(|v| v.is_zero()) {
        return 0;
    }
    codeword_matrix(field, x).rank()
}

pub fn support(field: &ExtField, x: &[Fqm]) -> FqSubspace {
    FqSubspace::from_matrix(&codeword_matrix(field, x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f8() -> Arc<ExtField> {
        Arc::new(ExtField::new(2, 3, None).unwrap())
    }

    #[test]
    fn construction_and_rank_deficiency() {
        let f = f8();
        let c = RankCode::new(f.clone(), vec![vec![Fqm::ONE]]).unwrap();
        assert_eq!((c.n(), c.k()), (1, 1));
        assert_eq!(c.weight_spectrum(100).unwrap().counts, BTreeMap::from([(1, 1)]));
        let a = f.alpha();
        let row = vec![Fqm::ONE, a, f.mul(a, a)];
        assert_eq!(
            RankCode::new(f.clone(), vec![row.clone(), row]),
            Err(Error::RankDeficientGenerator { rank: 1, rows: 2 })
        );
    }

    #[test]
    fn codeword_matrix_examples() {
        let f = f8();
        let a = f.alpha();
        let c = RankCode::new(f.clone(), vec![vec![Fqm::ONE; 3]]).unwrap();
        assert!(c.codeword_matrix(&[Fqm::ZERO; 3]).is_zero());
        let ones = c.codeword_matrix(&[Fqm::ONE; 3]);
        assert_eq!(ones.row(0), &[1, 1, 1]);
        assert_eq!(ones.row(1), &[0, 0, 0]);
        assert_eq!(c.rank_of(&[Fqm::ONE; 3]), 1);
        let x = [Fqm::ONE, a, f.mul(a, a)];
        assert_eq!(c.codeword_matrix(&x), FqMatrix::identity(2, 3));
        assert_eq!(c.rank_of(&x), 3);
        assert_eq!(c.rank_of(&[Fqm::ZERO; 3]), 0);
    }

    #[test]
    fn support_example() {
        let f = f8();
        let a = f.alpha();
        // Mat = [[1,0,0],[0,0,1],[0,0,0]] -> span{e1, e3}
        let s = support(&f, &[Fqm::ONE, Fqm::ZERO, a]);
        let expect = FqSubspace::span(2, 3, &[vec![1, 0, 0], vec![0, 0, 1]]).unwrap();
        assert_eq!(s, expect);
        assert_eq!(support(&f, &[Fqm::ZERO; 3]), FqSubspace::zero(2, 3));
    }

    #[test]
    fn degenerate_example() {
        let f4 = Arc::new(ExtField::new(2, 2, None).unwrap());
        let a = f4.alpha();
        let c = RankCode::new(f4.clone(), vec![vec![Fqm::ONE, a, f4.add(a, Fqm::ONE)]]).unwrap();
        assert!(!c.is_nondegenerate());
        assert_eq!(c.column_rank(), 2);
        let z = RankCode::new(f4, vec![vec![Fqm::ONE, Fqm::ZERO]]).unwrap();
        assert!(!z.is_nondegenerate());
    }

    #[test]
    fn identity_equivalence() {
        let f = f8();
        let a = f.alpha();
        let c = RankCode::new(f.clone(), vec![vec![Fqm::ONE, a, f.mul(a, a)]]).unwrap();
        assert_eq!(c.apply_equivalence(&FqMatrix::identity(2, 3)).unwrap(), c);
        let singular = FqMatrix::zeros(2, 3, 3);
        assert_eq!(c.apply_equivalence(&singular), Err(Error::SingularMatrix));
    }

    #[test]
    fn cap_is_enforced() {
        let f = f8();
        let c = RankCode::new(f, vec![vec![Fqm::ONE, Fqm::ZERO], vec![Fqm::ZERO, Fqm::ONE]]).unwrap();
        assert!(matches!(c.min_distance(8), Err(Error::EnumerationCapExceeded { requested: 9, cap: 8 })));
        assert_eq!(c.min_distance(9).unwrap(), 1);
    }
}
