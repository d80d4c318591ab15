//! q-systems, linear sets and hyperplane weights.
//!
//! A q-system `U` is stored by an F_q-basis `b_1, …, b_n` of vectors in
//! F_{q^m}^k. Hyperplane intersections `U ∩ ⟨h⟩⊥` are computed in the
//! coefficient space F_q^n as the kernel of `c ↦ Σ c_j (h · b_j)`, while
//! [`weight_of`] takes the longer route through F_q^{mk}.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::code::RankCode;
use crate::error::{Error, Result};
use crate::field::{ExtField, Fqm};
use crate::linalg::{enumerate_hyperplanes, ext_null_space, ext_rank, normalize, FqMatrix, FqSubspace};

/// An n-dimensional F_q-subspace of F_{q^m}^k whose F_{q^m}-span is the whole space.
#[derive(Clone, Debug)]
pub struct QSystem {
    field: Arc<ExtField>,
    k: usize,
    basis: Vec<Vec<Fqm>>,
    expanded: FqSubspace,
}

impl PartialEq for QSystem {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.k == other.k && self.expanded == other.expanded
    }
}

impl Eq for QSystem {}

/// Concatenated Γ-coordinates of a vector of F_{q^m}^k (length mk).
pub fn expand_vector(field: &ExtField, v: &[Fqm]) -> Vec<u32> {
    let m = field.m() as usize;
    let mut out = vec![0u32; m * v.len()];
    for (i, &x) in v.iter().enumerate() {
        field.expand_into(x, &mut out[i * m..(i + 1) * m]);
    }
    out
}

pub fn lift_vector(field: &ExtField, coords: &[u32]) -> Vec<Fqm> {
    let m = field.m() as usize;
    coords.chunks(m).map(|c| field.lift(c)).collect()
}

impl QSystem {
    /// Checks F_q-independence of `vectors` and that they span F_{q^m}^k.
    pub fn new(field: Arc<ExtField>, k: usize, vectors: Vec<Vec<Fqm>>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameters("ambient dimension must be at least 1".into()));
        }
        if let Some(v) = vectors.iter().find(|v| v.len() != k) {
            return Err(Error::DimensionMismatch { expected: k, found: v.len() });
        }
        let m = field.m() as usize;
        let rows: Vec<Vec<u32>> = vectors.iter().map(|v| expand_vector(&field, v)).collect();
        let expanded = FqSubspace::span(field.q(), m * k, &rows)?;
        if expanded.dim() != vectors.len() {
            return Err(Error::DependentInput);
        }
        if ext_rank(&field, &vectors) < k {
            return Err(Error::NotASystem);
        }
        Ok(QSystem { field, k, basis: vectors, expanded })
    }

    /// The system spanned by the columns of a nondegenerate code's generator.
    pub fn of_code(code: &RankCode) -> Result<Self> {
        if !code.is_nondegenerate() {
            return Err(Error::DegenerateCode);
        }
        let cols = (0..code.n()).map(|j| code.column(j)).collect();
        QSystem::new(code.field_arc().clone(), code.k(), cols)
    }

    /// The code whose generator has the basis vectors as columns.
    pub fn to_code(&self) -> Result<RankCode> {
        let g = (0..self.k).map(|i| self.basis.iter().map(|b| b[i]).collect()).collect();
        RankCode::new(self.field.clone(), g)
    }

    pub fn field(&self) -> &ExtField {
        &self.field
    }

    pub fn field_arc(&self) -> &Arc<ExtField> {
        &self.field
    }

    /// F_q-dimension.
    pub fn n(&self) -> usize {
        self.basis.len()
    }

    /// Ambient F_{q^m}-dimension.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn basis(&self) -> &[Vec<Fqm>] {
        &self.basis
    }

    /// `U` as an echelon subspace of F_q^{mk}.
    pub fn expanded(&self) -> &FqSubspace {
        &self.expanded
    }

    pub fn contains(&self, v: &[Fqm]) -> bool {
        self.expanded.contains(&expand_vector(&self.field, v))
    }

    /// `Σ c_j b_j` for coefficients `c ∈ F_q^n`.
    pub fn vector(&self, coeffs: &[u32]) -> Vec<Fqm> {
        let f = &*self.field;
        let mut out = vec![Fqm::ZERO; self.k];
        for (b, &c) in self.basis.iter().zip(coeffs) {
            if c == 0 {
                continue;
            }
            for (o, &x) in out.iter_mut().zip(b) {
                *o = f.add(*o, f.scale(x, c));
            }
        }
        out
    }

    /// `U + ⟨v⟩_{F_q}`; fails if `v ∈ U`.
    pub fn with_vector(&self, v: Vec<Fqm>) -> Result<QSystem> {
        if v.len() != self.k {
            return Err(Error::DimensionMismatch { expected: self.k, found: v.len() });
        }
        if self.contains(&v) {
            return Err(Error::DependentInput);
        }
        let mut basis = self.basis.clone();
        basis.push(v);
        QSystem::new(self.field.clone(), self.k, basis)
    }

    /// `U ∩ ⟨h⟩⊥` in coefficient coordinates (a subspace of F_q^n).
    pub fn hyperplane_kernel(&self, h: &[Fqm]) -> FqSubspace {
        let f = &*self.field;
        let m = f.m() as usize;
        let n = self.n();
        let mut mat = FqMatrix::zeros(f.q(), m, n);
        let mut buf = vec![0u32; m];
        for (j, b) in self.basis.iter().enumerate() {
            let dot = h.iter().zip(b).fold(Fqm::ZERO, |acc, (&x, &y)| f.add(acc, f.mul(x, y)));
            f.expand_into(dot, &mut buf);
            for (i, &c) in buf.iter().enumerate() {
                mat.set(i, j, c);
            }
        }
        mat.right_kernel()
    }

    /// `wt_U(⟨h⟩⊥)`.
    pub fn hyperplane_weight(&self, h: &[Fqm]) -> usize {
        self.hyperplane_kernel(h).dim()
    }
}

/// An F_{q^m}-subspace of F_{q^m}^k, by spanning vectors or by normal vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtSubspace {
    Span(Vec<Vec<Fqm>>),
    Dual(Vec<Vec<Fqm>>),
}

/// The subspace as an F_q-subspace of F_q^{mk}.
pub fn expand_subspace(field: &ExtField, k: usize, w: &ExtSubspace) -> Result<FqSubspace> {
    let given = match w {
        ExtSubspace::Span(v) | ExtSubspace::Dual(v) => v,
    };
    if let Some(v) = given.iter().find(|v| v.len() != k) {
        return Err(Error::AmbientMismatch { left: k, right: v.len() });
    }
    let gens = match w {
        ExtSubspace::Span(v) => v.clone(),
        ExtSubspace::Dual(normals) => ext_null_space(field, k, normals),
    };
    let mut rows = Vec::with_capacity(gens.len() * field.m() as usize);
    for g in &gens {
        for &gamma in field.basis() {
            let scaled: Vec<Fqm> = g.iter().map(|&x| field.mul(gamma, x)).collect();
            rows.push(expand_vector(field, &scaled));
        }
    }
    FqSubspace::span(field.q(), field.m() as usize * k, &rows)
}

/// `dim_{F_q}(U ∩ W)`.
pub fn weight_of(u: &QSystem, w: &ExtSubspace) -> Result<usize> {
    let ws = expand_subspace(u.field(), u.k(), w)?;
    let sum = u.expanded().sum_dim(&ws)?;
    Ok(u.n() + ws.dim() - sum)
}

/// `(rk(uG), n - wt_U(⟨u⟩⊥))`; the two entries agree for every nondegenerate code.
pub fn rank_weight_duality_check(code: &RankCode, u: &[Fqm]) -> Result<(usize, usize)> {
    if u.iter().all(|x| x.is_zero()) {
        return Err(Error::ZeroMessage);
    }
    let sys = QSystem::of_code(code)?;
    let rank = code.rank_of(&code.encode(u));
    let wt = weight_of(&sys, &ExtSubspace::Dual(vec![u.to_vec()]))?;
    Ok((rank, code.n() - wt))
}

fn cap_check(q: u32, n: usize, cap: u64) -> Result<()> {
    let total = (q as u128).pow(n as u32) - 1;
    if total > cap as u128 {
        return Err(Error::EnumerationCapExceeded { requested: total, cap });
    }
    Ok(())
}

/// Points of `L_U` (normalized) with their weights, sorted by representative.
pub fn points_with_weights(u: &QSystem, cap: u64) -> Result<Vec<(Vec<Fqm>, usize)>> {
    let q = u.field().q();
    cap_check(q, u.n(), cap)?;
    let mut counts: BTreeMap<Vec<Fqm>, u64> = BTreeMap::new();
    let mut coeffs = vec![0u32; u.n()];
    let total = (q as u64).pow(u.n() as u32);
    for c in 1..total {
        let mut t = c;
        for x in coeffs.iter_mut() {
            *x = (t % q as u64) as u32;
            t /= q as u64;
        }
        let v = u.vector(&coeffs);
        let p = normalize(u.field(), &v).expect("basis vectors are independent");
        *counts.entry(p).or_insert(0) += 1;
    }
    Ok(counts
        .into_iter()
        .map(|(p, c)| {
            // c = q^w - 1
            let mut w = 0;
            let mut size = 1u64;
            while size - 1 < c {
                size *= q as u64;
                w += 1;
            }
            debug_assert_eq!(size - 1, c);
            (p, w)
        })
        .collect())
}

/// weight -> number of points of `L_U` with that weight.
pub fn point_weight_spectrum(u: &QSystem, cap: u64) -> Result<BTreeMap<usize, u64>> {
    let mut out = BTreeMap::new();
    for (_, w) in points_with_weights(u, cap)? {
        *out.entry(w).or_insert(0) += 1;
    }
    Ok(out)
}

pub fn is_scattered(u: &QSystem, cap: u64) -> Result<bool> {
    Ok(point_weight_spectrum(u, cap)?.keys().all(|&w| w == 1))
}

/// Every hyperplane normal (in projective order) with its weight.
pub fn hyperplane_weights(u: &QSystem, cap: u64) -> Result<Vec<(Vec<Fqm>, usize)>> {
    Ok(enumerate_hyperplanes(u.field(), u.k(), cap)?
        .map(|h| {
            let w = u.hyperplane_weight(&h);
            (h, w)
        })
        .collect())
}

pub fn max_hyperplane_weight(u: &QSystem, cap: u64) -> Result<usize> {
    if u.k() == 1 {
        // The only hyperplane of F_{q^m}^1 is {0}.
        return Ok(0);
    }
    Ok(hyperplane_weights(u, cap)?.into_iter().map(|(_, w)| w).max().unwrap_or(0))
}

pub fn is_scattered_wrt_hyperplanes(u: &QSystem, cap: u64) -> Result<bool> {
    Ok(u.k() == 1 || max_hyperplane_weight(u, cap)? < u.k())
}

/// Two hyperplanes (by normalized normal vectors) with `(U∩H1) + (U∩H2) = U`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpannabilityWitness {
    pub h1: Vec<Fqm>,
    pub h2: Vec<Fqm>,
    pub w1: usize,
    pub w2: usize,
}

/// Re-checks a witness with a fresh sum computation.
pub fn check_witness(u: &QSystem, w: &SpannabilityWitness) -> bool {
    let k1 = u.hyperplane_kernel(&w.h1);
    let k2 = u.hyperplane_kernel(&w.h2);
    k1.dim() == w.w1 && k2.dim() == w.w2 && k1.sum_dim(&k2).is_ok_and(|d| d == u.n())
}

/// Decides 2-spannability; `Some(witness)` when spannable.
///
/// Hyperplanes are visited by descending weight. A pair can only span when
/// `w1 + w2 ≥ n`, so the larger of the two has weight at least `⌈n/2⌉`.
pub fn is_2_spannable(u: &QSystem, cap: u64) -> Result<Option<SpannabilityWitness>> {
    if u.k() == 1 {
        return Err(Error::UnsupportedDimension("2-spannability needs k >= 2"));
    }
    let n = u.n();
    let mut hs: Vec<(Vec<Fqm>, FqSubspace)> = enumerate_hyperplanes(u.field(), u.k(), cap)?
        .map(|h| {
            let kern = u.hyperplane_kernel(&h);
            (h, kern)
        })
        .collect();
    // Stable: ties keep projective order.
    hs.sort_by_key(|h| core::cmp::Reverse(h.1.dim()));
    let half = n.div_ceil(2);
    for i in 0..hs.len() {
        let wi = hs[i].1.dim();
        if wi < half {
            break;
        }
        for j in i + 1..hs.len() {
            let wj = hs[j].1.dim();
            if wi + wj < n {
                break;
            }
            if hs[i].1.sum_dim(&hs[j].1)? == n {
                return Ok(Some(SpannabilityWitness { h1: hs[i].0.clone(), h2: hs[j].0.clone(), w1: wi, w2: wj }));
            }
        }
    }
    Ok(None)
}

/// Solves `a(q^{m-1} - 1) + b(q^{m-2} - 1) = q^{2m-2} - 1`, `a + b = q^m + 1`.
pub fn hyperplane_weight_partition_solution(q: u32, m: u32) -> Result<(u64, u64)> {
    if q < 2 || m < 2 {
        return Err(Error::InvalidParameters("need q >= 2 and m >= 2".into()));
    }
    let qi = q as i128;
    let p = |e: u32| qi.pow(e);
    let (a11, a12, r1) = (p(m - 1) - 1, p(m - 2) - 1, p(2 * m - 2) - 1);
    let (a21, a22, r2) = (1i128, 1i128, p(m) + 1);
    let det = a11 * a22 - a12 * a21;
    let na = r1 * a22 - a12 * r2;
    let nb = a11 * r2 - r1 * a21;
    if det == 0 || na % det != 0 || nb % det != 0 {
        return Err(Error::NoIntegralSolution { q, m });
    }
    let (a, b) = (na / det, nb / det);
    if a < 0 || b < 0 {
        return Err(Error::NoIntegralSolution { q, m });
    }
    Ok((a as u64, b as u64))
}
