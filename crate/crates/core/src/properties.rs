//! Property predicates on rank-metric codes.
//!
//! Pairwise scans work on one normalized message per projective codeword.
//! Supports are deduplicated first; when `q^n` is small each distinct
//! support also gets a membership bitset over F_q^n, which turns the
//! intersection and containment tests into word operations.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::code::{rank_of, support, RankCode};
use crate::error::{Error, Result};
use crate::field::{ExtField, Fqm};
use crate::linalg::FqSubspace;

/// Default cap on projective codewords for pairwise scans.
pub const DEFAULT_PAIR_CAP: u64 = 200_000;

/// Largest `q^n` for which supports are turned into bitsets.
const BITSET_LIMIT: u64 = 1 << 12;

/// Evidence attached to a verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// `2d > n` settled the question without a scan.
    SufficientCondition { d: usize, n: usize },
    /// No counterexample among `checked` candidates.
    Exhaustive { checked: u64 },
    /// Two messages (normalized) whose codewords violate the property.
    Pair { first: Vec<Fqm>, second: Vec<Fqm> },
    /// Three words violating a triangle or descendant condition.
    Triple { x: Vec<Fqm>, y: Vec<Fqm>, z: Vec<Fqm> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub certificate: Certificate,
}

impl Verdict {
    fn yes(certificate: Certificate) -> Self {
        Verdict { holds: true, certificate }
    }

    fn no(certificate: Certificate) -> Self {
        Verdict { holds: false, certificate }
    }
}

/// Deduplicated supports of all projective codewords.
struct SupportTable {
    q: u32,
    messages: Vec<Vec<Fqm>>,
    /// message index -> support index
    support_of: Vec<usize>,
    supports: Vec<FqSubspace>,
    /// support index -> messages with that support, in projective order
    members: Vec<Vec<usize>>,
    bits: Option<Vec<Vec<u64>>>,
}

fn vector_index(q: u32, v: &[u32]) -> usize {
    v.iter().rev().fold(0usize, |acc, &x| acc * q as usize + x as usize)
}

fn membership_bits(s: &FqSubspace) -> Vec<u64> {
    let q = s.q();
    let size = (q as usize).pow(s.ambient_dim() as u32);
    let mut bits = vec![0u64; size.div_ceil(64)];
    bits[0] |= 1;
    for v in s.vectors_in_range(1, (q as u64).pow(s.dim() as u32)) {
        let i = vector_index(q, &v);
        bits[i / 64] |= 1 << (i % 64);
    }
    bits
}

impl SupportTable {
    fn build(code: &RankCode, cap: u64) -> Result<Self> {
        let messages: Vec<Vec<Fqm>> = code.projective_messages(cap)?.collect();
        let field = code.field();
        let mut index: BTreeMap<FqSubspace, usize> = BTreeMap::new();
        let mut supports = Vec::new();
        let mut members: Vec<Vec<usize>> = Vec::new();
        let mut support_of = Vec::with_capacity(messages.len());
        for (i, u) in messages.iter().enumerate() {
            let s = support(field, &code.encode(u));
            let id = *index.entry(s.clone()).or_insert_with(|| {
                supports.push(s);
                members.push(Vec::new());
                supports.len() - 1
            });
            members[id].push(i);
            support_of.push(id);
        }
        let q = field.q();
        let small = (q as u128).pow(code.n() as u32) <= BITSET_LIMIT as u128;
        let bits = small.then(|| supports.iter().map(membership_bits).collect());
        Ok(SupportTable { q, messages, support_of, supports, members, bits })
    }

    fn meets(&self, a: usize, b: usize) -> bool {
        match &self.bits {
            Some(bits) => {
                let (x, y) = (&bits[a], &bits[b]);
                (x[0] & y[0]) & !1 != 0 || x[1..].iter().zip(&y[1..]).any(|(p, r)| p & r != 0)
            }
            None => {
                let (s, t) = (&self.supports[a], &self.supports[b]);
                s.dim() + t.dim() > s.sum_dim(t).expect("same ambient space")
            }
        }
    }

    fn contained_in(&self, a: usize, b: usize) -> bool {
        match &self.bits {
            Some(bits) => {
                let s = &self.supports[a];
                (0..s.dim()).all(|r| {
                    let i = vector_index(self.q, s.basis().row(r));
                    bits[b][i / 64] >> (i % 64) & 1 == 1
                })
            }
            None => self.supports[a].is_subspace_of(&self.supports[b]),
        }
    }

    fn first_message(&self, s: usize) -> &Vec<Fqm> {
        &self.messages[self.members[s][0]]
    }
}

fn require_nondegenerate(code: &RankCode) -> Result<()> {
    if code.is_nondegenerate() {
        Ok(())
    } else {
        Err(Error::DegenerateCode)
    }
}

/// First pair of distinct supports with trivial intersection, as message
/// indices, plus the number of support pairs examined.
fn disjoint_support_pair(t: &SupportTable) -> (Option<(usize, usize)>, u64) {
    let mut checked = 0u64;
    for a in 0..t.supports.len() {
        for b in a + 1..t.supports.len() {
            checked += 1;
            if !t.meets(a, b) {
                return (Some((t.members[a][0], t.members[b][0])), checked);
            }
        }
    }
    (None, checked)
}

/// Every two nonzero codewords have supports meeting nontrivially.
pub fn is_rank_intersecting(code: &RankCode, cap: u64) -> Result<Verdict> {
    require_nondegenerate(code)?;
    let d = code.min_distance(cap)?;
    if 2 * d > code.n() {
        return Ok(Verdict::yes(Certificate::SufficientCondition { d, n: code.n() }));
    }
    rank_intersecting_scan(code, cap)
}

/// The pair scan of [`is_rank_intersecting`] without the `2d > n` shortcut.
pub fn rank_intersecting_scan(code: &RankCode, cap: u64) -> Result<Verdict> {
    require_nondegenerate(code)?;
    let t = SupportTable::build(code, cap)?;
    Ok(match disjoint_support_pair(&t) {
        (Some((i, j)), _) => {
            Verdict::no(Certificate::Pair { first: t.messages[i].clone(), second: t.messages[j].clone() })
        }
        (None, checked) => Verdict::yes(Certificate::Exhaustive { checked }),
    })
}

/// No two nonzero codewords have disjoint sets of nonzero coordinates.
pub fn is_hamming_intersecting(code: &RankCode, cap: u64) -> Result<Verdict> {
    let words = code.n().div_ceil(64);
    let mut masks: BTreeMap<Vec<u64>, Vec<Fqm>> = BTreeMap::new();
    for u in code.projective_messages(cap)? {
        let c = code.encode(&u);
        let mut mask = vec![0u64; words];
        for (j, x) in c.iter().enumerate() {
            if !x.is_zero() {
                mask[j / 64] |= 1 << (j % 64);
            }
        }
        masks.entry(mask).or_insert(u);
    }
    // Order pairs by first appearance of each mask.
    let mut entries: Vec<(Vec<u64>, Vec<Fqm>)> = masks.into_iter().collect();
    entries.sort_by(|a, b| {
        crate::linalg::projective_index(code.field().order(), &a.1)
            .cmp(&crate::linalg::projective_index(code.field().order(), &b.1))
    });
    let mut checked = 0u64;
    for a in 0..entries.len() {
        for b in a + 1..entries.len() {
            checked += 1;
            if entries[a].0.iter().zip(&entries[b].0).all(|(x, y)| x & y == 0) {
                return Ok(Verdict::no(Certificate::Pair {
                    first: entries[a].1.clone(),
                    second: entries[b].1.clone(),
                }));
            }
        }
    }
    Ok(Verdict::yes(Certificate::Exhaustive { checked }))
}

/// `σ(c) ⊆ σ(c′)` only when `c′ ∈ ⟨c⟩`.
pub fn is_minimal(code: &RankCode, cap: u64) -> Result<Verdict> {
    require_nondegenerate(code)?;
    let t = SupportTable::build(code, cap)?;
    if let Some(group) = t.members.iter().find(|g| g.len() > 1) {
        return Ok(Verdict::no(Certificate::Pair {
            first: t.messages[group[0]].clone(),
            second: t.messages[group[1]].clone(),
        }));
    }
    let mut order: Vec<usize> = (0..t.supports.len()).collect();
    order.sort_by_key(|&s| t.supports[s].dim());
    let mut checked = 0u64;
    for (pos, &a) in order.iter().enumerate() {
        let da = t.supports[a].dim();
        // Distinct supports of equal dimension cannot contain one another.
        let start = pos + order[pos..].partition_point(|&s| t.supports[s].dim() == da);
        for &b in &order[start..] {
            checked += 1;
            if t.contained_in(a, b) {
                return Ok(Verdict::no(Certificate::Pair {
                    first: t.first_message(a).clone(),
                    second: t.first_message(b).clone(),
                }));
            }
        }
    }
    Ok(Verdict::yes(Certificate::Exhaustive { checked }))
}

/// Largest `d` with `km ≤ max(m,n)·(min(n,m) − d + 1)`.
pub fn singleton_bound(_q: u32, m: usize, n: usize, k: usize) -> usize {
    let big = m.max(n);
    (n.min(m) + 1).saturating_sub((k * m).div_ceil(big))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MrdStatus {
    /// Meets the Singleton bound with equality.
    Mrd,
    /// `d` equals the largest value allowed, but `max(m,n)` does not divide `km`.
    QuasiMrd,
    NotOptimal,
}

impl MrdStatus {
    pub fn label(self) -> &'static str {
        match self {
            MrdStatus::Mrd => "MRD",
            MrdStatus::QuasiMrd => "quasi-MRD (Singleton-optimal)",
            MrdStatus::NotOptimal => "not Singleton-optimal",
        }
    }
}

pub fn mrd_status(code: &RankCode, cap: u64) -> Result<MrdStatus> {
    let m = code.field().m() as usize;
    let (n, k) = (code.n(), code.k());
    let d = code.min_distance(cap)?;
    Ok(if d != singleton_bound(code.field().q(), m, n, k) {
        MrdStatus::NotOptimal
    } else if (k * m).is_multiple_of(m.max(n)) {
        MrdStatus::Mrd
    } else {
        MrdStatus::QuasiMrd
    })
}

pub fn is_mrd(code: &RankCode, cap: u64) -> Result<bool> {
    Ok(mrd_status(code, cap)? == MrdStatus::Mrd)
}

/// `rk(c + c′) < rk(c) + rk(c′)` for all nonzero `c`, `c′ ∉ ⟨c⟩`.
///
/// If the supports of `c` and `c′` meet, `σ(c + μc′) ⊆ σ(c) + σ(c′)` already
/// gives the strict inequality for every `μ`; otherwise all `μ ∈ F_{q^m}^*`
/// are tried.
pub fn is_21_separating(code: &RankCode, cap: u64) -> Result<Verdict> {
    let t = SupportTable::build(code, cap)?;
    let f = code.field();
    let words: Vec<Vec<Fqm>> = t.messages.iter().map(|u| code.encode(u)).collect();
    let ranks: Vec<usize> = t.support_of.iter().map(|&s| t.supports[s].dim()).collect();
    let mut checked = 0u64;
    let mut sum = vec![Fqm::ZERO; code.n()];
    let bound = code.n().min(f.m() as usize);
    for i in 0..words.len() {
        for j in i + 1..words.len() {
            let (si, sj) = (t.support_of[i], t.support_of[j]);
            checked += 1;
            // rk(c + μc′) ≤ min(m, n) rules out equality for larger rank sums.
            if si == sj || ranks[i] + ranks[j] > bound || t.meets(si, sj) {
                continue;
            }
            for mu in f.elements().skip(1) {
                for (o, (&a, &b)) in sum.iter_mut().zip(words[i].iter().zip(&words[j])) {
                    *o = f.add(a, f.mul(mu, b));
                }
                if rank_of(f, &sum) == ranks[i] + ranks[j] {
                    let z: Vec<Fqm> = words[j].iter().map(|&b| f.neg(f.mul(mu, b))).collect();
                    return Ok(Verdict::no(Certificate::Triple {
                        x: words[i].clone(),
                        y: vec![Fqm::ZERO; code.n()],
                        z,
                    }));
                }
            }
        }
    }
    Ok(Verdict::yes(Certificate::Exhaustive { checked }))
}

/// The triangle condition over pairwise distinct triples of an explicit word set.
pub fn is_21_separating_set(field: &ExtField, words: &[Vec<Fqm>], cap: u64) -> Result<Verdict> {
    let s = words.len() as u128;
    if s * s * s > cap as u128 {
        return Err(Error::EnumerationCapExceeded { requested: s * s * s, cap });
    }
    let diff = |a: &[Fqm], b: &[Fqm]| -> Vec<Fqm> { a.iter().zip(b).map(|(&x, &y)| field.sub(x, y)).collect() };
    let n = words.len();
    let mut dist = vec![0usize; n * n];
    for a in 0..n {
        for b in 0..n {
            dist[a * n + b] = rank_of(field, &diff(&words[a], &words[b]));
        }
    }
    let mut checked = 0u64;
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if x == y || y == z || x == z || words[x] == words[y] || words[y] == words[z] || words[x] == words[z] {
                    continue;
                }
                checked += 1;
                if dist[x * n + z] >= dist[x * n + y] + dist[y * n + z] {
                    return Ok(Verdict::no(Certificate::Triple {
                        x: words[x].clone(),
                        y: words[y].clone(),
                        z: words[z].clone(),
                    }));
                }
            }
        }
    }
    Ok(Verdict::yes(Certificate::Exhaustive { checked }))
}

/// Largest explicit code size on which the literal frameproof triple scan runs.
pub const FRAMEPROOF_LITERAL_LIMIT: u128 = 512;

/// No codeword outside `{c, c′}` is a descendant of the pair.
///
/// By linearity this is the pair scan of [`is_rank_intersecting`]. For codes
/// with at most [`FRAMEPROOF_LITERAL_LIMIT`] words the literal definition is
/// checked as well, and a disagreement is reported as an error.
pub fn is_2_rank_frameproof(code: &RankCode, cap: u64) -> Result<Verdict> {
    let reduced = rank_intersecting_scan(code, cap)?;
    let size = (code.field().order() as u128).pow(code.k() as u32);
    if size > FRAMEPROOF_LITERAL_LIMIT {
        return Ok(reduced);
    }
    let literal = frameproof_literal(code)?;
    if literal.holds != reduced.holds {
        return Err(Error::CrossCheckFailed("frameproof literal and reduced scans"));
    }
    Ok(literal)
}

/// Every message in little-endian base-Q counter order.
fn all_messages(code: &RankCode) -> Vec<Vec<Fqm>> {
    let f = code.field();
    let order = f.order();
    let total = order.pow(code.k() as u32);
    (0..total)
        .map(|mut c| {
            (0..code.k())
                .map(|_| {
                    let x = f.element(c % order).expect("digit below field order");
                    c /= order;
                    x
                })
                .collect()
        })
        .collect()
}

fn message_index(f: &ExtField, u: &[Fqm]) -> usize {
    u.iter().rev().fold(0usize, |acc, x| acc * f.order() as usize + x.encoding() as usize)
}

/// All triples `(x, c, c′)` of distinct codewords. `x − c` is the codeword
/// of `u_x − u_c`, so one support per codeword suffices.
fn frameproof_literal(code: &RankCode) -> Result<Verdict> {
    let f = code.field();
    let messages = all_messages(code);
    let words: Vec<Vec<Fqm>> = messages.iter().map(|u| code.encode(u)).collect();
    let sups: Vec<FqSubspace> = words.iter().map(|w| support(f, w)).collect();
    let small = (f.q() as u128).pow(code.n() as u32) <= BITSET_LIMIT as u128;
    let bits: Option<Vec<Vec<u64>>> = small.then(|| sups.iter().map(membership_bits).collect());
    let trivial = |a: usize, b: usize| -> bool {
        match &bits {
            Some(bits) => {
                let (x, y) = (&bits[a], &bits[b]);
                (x[0] & y[0]) & !1 == 0 && x[1..].iter().zip(&y[1..]).all(|(p, r)| p & r == 0)
            }
            None => {
                let (s, t) = (&sups[a], &sups[b]);
                s.dim() + t.dim() == s.sum_dim(t).expect("same ambient space")
            }
        }
    };
    let size = words.len();
    let mut diff = vec![0u32; size * size];
    for x in 0..size {
        for c in 0..size {
            let d: Vec<Fqm> = messages[x].iter().zip(&messages[c]).map(|(&a, &b)| f.sub(a, b)).collect();
            diff[x * size + c] = message_index(f, &d) as u32;
        }
    }
    let mut checked = 0u64;
    for i in 0..size {
        for j in i + 1..size {
            for x in 0..size {
                if x == i || x == j {
                    continue;
                }
                checked += 1;
                if trivial(diff[x * size + i] as usize, diff[x * size + j] as usize) {
                    return Ok(Verdict::no(Certificate::Triple {
                        x: words[x].clone(),
                        y: words[i].clone(),
                        z: words[j].clone(),
                    }));
                }
            }
        }
    }
    Ok(Verdict::yes(Certificate::Exhaustive { checked }))
}

/// Membership in the rank-metric descendant set of `S`:
/// `w` belongs when `∩_{c∈S} σ(w − c) = {0}`.
#[derive(Clone, Debug)]
pub struct Descendants<'a> {
    field: &'a ExtField,
    set: Vec<Vec<Fqm>>,
}

pub fn descendants<'a>(field: &'a ExtField, set: &[Vec<Fqm>]) -> Result<Descendants<'a>> {
    if set.is_empty() {
        return Err(Error::EmptyDescendantSet);
    }
    Ok(Descendants { field, set: set.to_vec() })
}

impl Descendants<'_> {
    pub fn contains(&self, w: &[Fqm]) -> bool {
        let f = self.field;
        let mut acc: Option<FqSubspace> = None;
        for c in &self.set {
            let d: Vec<Fqm> = w.iter().zip(c).map(|(&a, &b)| f.sub(a, b)).collect();
            let s = support(f, &d);
            let next = match acc {
                None => s,
                Some(prev) => prev.intersect(&s).expect("supports share the ambient space"),
            };
            if next.dim() == 0 {
                return true;
            }
            acc = Some(next);
        }
        false
    }
}

/// Outcome of the feasibility rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Feasibility {
    Impossible,
    Open,
    KnownConstructible,
}

impl Feasibility {
    pub fn name(self) -> &'static str {
        match self {
            Feasibility::Impossible => "Impossible",
            Feasibility::Open => "Open",
            Feasibility::KnownConstructible => "KnownConstructible",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeasibilityVerdict {
    pub q: u32,
    pub m: u32,
    pub k: u32,
    pub n: u32,
    pub d: Option<u32>,
    pub verdict: Feasibility,
    /// Which rule fired.
    pub citation: &'static str,
}

/// Whether a nondegenerate rank-intersecting `[n, k]_{q^m/q}` code
/// (optionally with minimum distance `d`) exists, is known, or is open.
///
/// Without `n`, the best verdict over `1 ≤ n ≤ 2m` is returned
/// (KnownConstructible before Open before Impossible, smallest `n` first).
pub fn feasibility(q: u32, m: u32, k: u32, n: Option<u32>, d: Option<u32>) -> Result<FeasibilityVerdict> {
    if !crate::poly::is_prime(q as u64) {
        return Err(Error::InvalidParameters(alloc::format!("q = {q} is not a prime")));
    }
    if m == 0 || k == 0 || n == Some(0) || d == Some(0) {
        return Err(Error::InvalidParameters("m, k, n and d must be positive".into()));
    }
    match n {
        Some(n) => Ok(feasibility_at(q, m, k, n, d)),
        None => {
            let mut best: Option<FeasibilityVerdict> = None;
            for n in 1..=2 * m {
                let v = feasibility_at(q, m, k, n, d);
                if best.as_ref().is_none_or(|b| v.verdict > b.verdict) {
                    best = Some(v);
                }
            }
            Ok(best.expect("at least one length is tried"))
        }
    }
}

fn feasibility_at(q: u32, m: u32, k: u32, n: u32, d: Option<u32>) -> FeasibilityVerdict {
    let (verdict, citation) = feasibility_rule(q, m, k, n, d);
    FeasibilityVerdict { q, m, k, n, d, verdict, citation }
}

fn feasibility_rule(q: u32, m: u32, k: u32, n: u32, d: Option<u32>) -> (Feasibility, &'static str) {
    use Feasibility::*;
    if k == 1 {
        // A one-dimensional code is spanned by a single word c, and every
        // nonzero codeword λc has the same support, so it is intersecting.
        // Nondegeneracy means rk(c) = n, which needs n ≤ m and forces d = n.
        if n > m {
            return (Impossible, "k = 1: nondegenerate needs n <= m");
        }
        if d.is_some_and(|d| d != n) {
            return (Impossible, "k = 1: the only distance is d = n");
        }
        return (KnownConstructible, "k = 1: every nonzero word is self-intersecting");
    }
    if n < 2 * k - 1 {
        return (Impossible, "length lower bound n >= 2k - 1");
    }
    if n + 3 > 2 * m {
        return (Impossible, "length upper bound n <= 2m - 3");
    }
    if let Some(d) = d {
        if d < k || d > m {
            return (Impossible, "distance range k <= d <= m");
        }
        if d as usize > singleton_bound(q, m as usize, n as usize, k as usize) {
            return (Impossible, "rank-metric Singleton bound");
        }
    }
    if (m, k) == (5, 3) && n == 7 {
        return (Impossible, "(m, k) = (5, 3), n = 7 forces a 2-spannable system");
    }
    if (q, m, k, n) == (2, 5, 3, 6) {
        return (Impossible, "no nondegenerate [6,3,3]_{32/2} intersecting code");
    }
    if 2 * k <= m + 1 && n + 2 * k <= 2 * m + 1 {
        if n <= m {
            return (KnownConstructible, "Gabidulin codes with 2d > n");
        }
        return (KnownConstructible, "scattered system plus direct extension, m <= n <= 2m - 2k + 1");
    }
    if 2 * k > m + 1 {
        return (Open, "k > (m + 1)/2 regime");
    }
    (Open, "gray area 2m - 2k + 2 <= n <= 2m - 3")
}
