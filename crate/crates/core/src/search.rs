//! Exhaustive search over extensions of the three canonical 5-dimensional
//! systems in F_{q^5}^3.
//!
//! Candidate `i` of a form is decoded as `i = p·(Q² − 1) + e`, where `p`
//! is the parameter tuple read in base `Q = q^5` (first parameter most
//! significant) and `e + 1 = α·Q + β` gives the extension vector
//! `(0, α, β)`.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::constructions::vector_by_index;
use crate::error::{Error, Result};
use crate::field::{ExtField, Fqm};
use crate::geometry::{check_witness, is_2_spannable, QSystem, SpannabilityWitness};
use crate::linalg::{complete_basis, ext_rank, projective_count};

/// Extension degree of the searched field.
pub const SEARCH_DEGREE: u32 = 5;

/// Number of parameters of canonical form `form` (1, 2 or 3).
pub fn form_arity(form: u8) -> Result<usize> {
    match form {
        1 => Ok(4),
        2 => Ok(3),
        3 => Ok(2),
        _ => Err(Error::InvalidParameters(alloc::format!("unknown form {form}"))),
    }
}

/// `(q^5)^arity · ((q^5)^2 − 1)`.
pub fn search_space_size(q: u32, form: u8) -> Result<u128> {
    let order = (q as u128).pow(SEARCH_DEGREE);
    Ok(order.pow(form_arity(form)? as u32) * (order * order - 1))
}

/// Image of `x` under the map of the given form.
pub fn form_image(field: &ExtField, form: u8, params: &[Fqm], x: Fqm) -> Vec<Fqm> {
    let fr = |i: u32| field.frobenius(x, i);
    let lin = |terms: &[(Fqm, u32)]| terms.iter().fold(Fqm::ZERO, |acc, &(c, i)| field.add(acc, field.mul(c, fr(i))));
    let one = Fqm::ONE;
    match form {
        // (x, x^q + A x^{q^3} + B x^{q^4}, x^{q^2} + C x^{q^3} + D x^{q^4})
        1 => {
            vec![x, lin(&[(one, 1), (params[0], 3), (params[1], 4)]), lin(&[(one, 2), (params[2], 3), (params[3], 4)])]
        }
        // (x, x^q + A x^{q^2} + B x^{q^4}, x^{q^3} + C x^{q^4})
        2 => vec![x, lin(&[(one, 1), (params[0], 2), (params[1], 4)]), lin(&[(one, 3), (params[2], 4)])],
        // (x, x^{q^2} + A x^{q^4}, x^{q^3} + B x^{q^4})
        _ => vec![x, lin(&[(one, 2), (params[0], 4)]), lin(&[(one, 3), (params[1], 4)])],
    }
}

/// The 5-dimensional system of a canonical form over `F_{q^5}`.
/// Fails with `NotASystem` when the images do not span F_{q^5}^3.
pub fn canonical_system(field: &Arc<ExtField>, form: u8, params: &[Fqm]) -> Result<QSystem> {
    let arity = form_arity(form)?;
    if params.len() != arity {
        return Err(Error::ArityMismatch { form, expected: arity, found: params.len() });
    }
    if field.m() != SEARCH_DEGREE {
        return Err(Error::InvalidParameters("canonical forms live over F_{q^5}".into()));
    }
    let basis: Vec<Vec<Fqm>> = field.basis().iter().map(|&x| form_image(field, form, params, x)).collect();
    QSystem::new(field.clone(), 3, basis)
}

/// `U′ + ⟨(0, α, β)⟩_{F_q}`.
pub fn extended_candidate(u: &QSystem, alpha: Fqm, beta: Fqm) -> Result<QSystem> {
    if alpha.is_zero() && beta.is_zero() {
        return Err(Error::ZeroExtension);
    }
    u.with_vector(vec![Fqm::ZERO, alpha, beta])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum N6Verdict {
    Spannable(SpannabilityWitness),
    Survivor,
}

impl N6Verdict {
    pub fn is_spannable(&self) -> bool {
        matches!(self, N6Verdict::Spannable(_))
    }
}

fn cross(f: &ExtField, a: &[Fqm], b: &[Fqm]) -> [Fqm; 3] {
    let m = |x, y| f.mul(x, y);
    [f.sub(m(a[1], b[2]), m(a[2], b[1])), f.sub(m(a[2], b[0]), m(a[0], b[2])), f.sub(m(a[0], b[1]), m(a[1], b[0]))]
}

/// Scales to first nonzero coordinate 1 and returns the projective index
/// (see [`crate::linalg::ProjectiveIter`]); `None` for the zero vector.
fn normalize3(f: &ExtField, v: &mut [Fqm; 3]) -> Option<usize> {
    let order = f.order() as usize;
    let lead = v.iter().position(|x| !x.is_zero())?;
    if v[lead] != Fqm::ONE {
        let inv = f.inv(v[lead]);
        for x in v[lead..].iter_mut() {
            *x = f.mul(*x, inv);
        }
    }
    Some(match lead {
        0 => v[1].encoding() as usize * order + v[2].encoding() as usize,
        1 => order * order + v[2].encoding() as usize,
        _ => order * order + order,
    })
}

/// Reusable buffers for [`Decider::decide`], sized for PG(2, q^m).
pub struct Decider {
    field: Arc<ExtField>,
    point_count: Vec<u32>,
    pair_count: Vec<u32>,
    count_sum: Vec<u64>,
    points: Vec<(usize, [Fqm; 3])>,
    lines: Vec<(usize, [Fqm; 3])>,
}

impl Decider {
    pub fn new(field: Arc<ExtField>) -> Self {
        let size = projective_count(field.order(), 3) as usize;
        Decider {
            field,
            point_count: vec![0; size],
            pair_count: vec![0; size],
            count_sum: vec![0; size],
            points: Vec::new(),
            lines: Vec::new(),
        }
    }

    /// Decides 2-spannability of a 6-dimensional system in F_{q^m}^3.
    ///
    /// Line weights come from the points of `L_U`: a line holding `N ≥ 2`
    /// points with vector counts `c_P = q^{wt(P)} − 1` is met by
    /// `N(N−1)/2` point pairs, and summing `c_P + c_P′` over those pairs
    /// gives `(N − 1)·Σ c_P = (N − 1)(q^{wt} − 1)`. Lines through a single
    /// point never reach weight 3 unless some line reaches weight 4.
    ///
    /// A line of weight at least 4 always gives a witness together with a
    /// line through a complement of its intersection. Otherwise the system
    /// is spannable exactly when two weight-3 lines meet outside `L_U`.
    pub fn decide(&mut self, u: &QSystem) -> Result<N6Verdict> {
        if u.n() != 6 || u.k() != 3 {
            return Err(Error::DimensionMismatch { expected: 6, found: u.n() });
        }
        let f = self.field.clone();
        let f = &*f;
        let q = f.q() as u64;
        // Points of L_U with their vector counts.
        self.points.clear();
        let basis: Vec<[Fqm; 3]> = u.basis().iter().map(|b| [b[0], b[1], b[2]]).collect();
        let mut v = [Fqm::ZERO; 3];
        let mut coeffs = [0u32; 6];
        let total = q.pow(6);
        for c in 1..total {
            if q == 2 {
                // Gray code: flip the basis vector of the lowest set bit.
                let j = c.trailing_zeros() as usize;
                for (x, &b) in v.iter_mut().zip(&basis[j]) {
                    *x = f.add(*x, b);
                }
            } else {
                let mut t = c;
                for x in coeffs.iter_mut() {
                    *x = (t % q) as u32;
                    t /= q;
                }
                v = [Fqm::ZERO; 3];
                for (b, &cj) in basis.iter().zip(&coeffs) {
                    if cj != 0 {
                        for (x, &y) in v.iter_mut().zip(b) {
                            *x = f.add(*x, f.scale(y, cj));
                        }
                    }
                }
            }
            let mut p = v;
            let idx = normalize3(f, &mut p).expect("basis is independent");
            if self.point_count[idx] == 0 {
                self.points.push((idx, p));
            }
            self.point_count[idx] += 1;
        }

        self.lines.clear();
        for i in 0..self.points.len() {
            let (pi, a) = self.points[i];
            for &(pj, b) in &self.points[i + 1..] {
                let key = line_key(f, &a, &b);
                if self.pair_count[key] == 0 {
                    self.lines.push((key, [Fqm::ZERO; 3]));
                }
                self.pair_count[key] += 1;
                self.count_sum[key] += (self.point_count[pi] + self.point_count[pj]) as u64;
            }
        }

        // Keys are visited in discovery order; ties are broken by key so the
        // witness does not depend on that order.
        let mut heavy: Option<(usize, usize)> = None;
        let mut weight3: Vec<usize> = Vec::new();
        for &(key, _) in &self.lines {
            let pairs = self.pair_count[key] as u64;
            // N(N-1)/2 = pairs
            let n_points = isqrt(1 + 8 * pairs).div_ceil(2);
            debug_assert_eq!(n_points * (n_points - 1) / 2, pairs);
            let vectors = self.count_sum[key] / (n_points - 1);
            let w = log_q(vectors + 1, q);
            if w >= 4 && heavy.is_none_or(|(hk, hw)| (w, core::cmp::Reverse(key)) > (hw, core::cmp::Reverse(hk))) {
                heavy = Some((key, w));
            } else if w == 3 {
                weight3.push(key);
            }
        }
        weight3.sort_unstable();
        let weight3: Vec<[Fqm; 3]> = weight3.into_iter().map(|key| line_normal(f, key)).collect();

        let verdict = if let Some((key, w)) = heavy {
            N6Verdict::Spannable(self.complement_witness(u, line_normal(f, key), w)?)
        } else {
            let mut found = None;
            'outer: for a in 0..weight3.len() {
                for b in a + 1..weight3.len() {
                    let mut r = cross(f, &weight3[a], &weight3[b]);
                    let idx = normalize3(f, &mut r).expect("distinct lines meet in a point");
                    if self.point_count[idx] == 0 {
                        found = Some(SpannabilityWitness {
                            h1: weight3[a].to_vec(),
                            h2: weight3[b].to_vec(),
                            w1: 3,
                            w2: 3,
                        });
                        break 'outer;
                    }
                }
            }
            found.map_or(N6Verdict::Survivor, N6Verdict::Spannable)
        };

        for &(idx, _) in &self.points {
            self.point_count[idx] = 0;
        }
        for &(key, _) in &self.lines {
            self.pair_count[key] = 0;
            self.count_sum[key] = 0;
        }
        if let N6Verdict::Spannable(w) = &verdict {
            if !check_witness(u, w) {
                return Err(Error::CrossCheckFailed("n = 6 witness failed the sum test"));
            }
        }
        Ok(verdict)
    }

    /// Pairs the heavy line `l` with a line through a complement of `U ∩ l`.
    fn complement_witness(&self, u: &QSystem, l: [Fqm; 3], w: usize) -> Result<SpannabilityWitness> {
        let f = &*self.field;
        let kern = u.hyperplane_kernel(&l);
        let rows = kern.basis().row_vecs();
        let full = complete_basis(f.q(), u.n(), &rows)?;
        let comp: Vec<Vec<Fqm>> = (rows.len()..u.n()).map(|r| u.vector(full.row(r))).collect();
        let h2 = if ext_rank(f, &comp) == 2 {
            let mut h = cross(f, &comp[0], &comp[1]);
            normalize3(f, &mut h);
            h
        } else {
            let p = &comp[0];
            let mut chosen = None;
            for i in 0..3 {
                let mut e = [Fqm::ZERO; 3];
                e[i] = Fqm::ONE;
                let mut h = cross(f, p, &e);
                if normalize3(f, &mut h).is_some() && h != l {
                    chosen = Some(h);
                    break;
                }
            }
            chosen.expect("two of the three lines through p differ")
        };
        let w2 = u.hyperplane_weight(&h2);
        Ok(SpannabilityWitness { h1: l.to_vec(), h2: h2.to_vec(), w1: w, w2 })
    }
}

/// Key of the line through two distinct normalized points. In the chart
/// `X0 = 1` with coordinates `(x, y) = (X1, X2)`, the line `y = s·x + t`
/// has key `s·Q + t`, the line `x = c` has key `Q² + c`, and `X0 = 0` has
/// key `Q² + Q`.
fn line_key(f: &ExtField, a: &[Fqm; 3], b: &[Fqm; 3]) -> usize {
    let order = f.order() as usize;
    let slope_line = |s: Fqm, x: Fqm, y: Fqm| {
        let t = f.sub(y, f.mul(s, x));
        s.encoding() as usize * order + t.encoding() as usize
    };
    match (a[0].is_zero(), b[0].is_zero()) {
        (false, false) => {
            if a[1] == b[1] {
                order * order + a[1].encoding() as usize
            } else {
                let s = f.div(f.sub(b[2], a[2]), f.sub(b[1], a[1]));
                slope_line(s, a[1], a[2])
            }
        }
        (false, true) | (true, false) => {
            let (p, d) = if a[0].is_zero() { (b, a) } else { (a, b) };
            if d[1].is_zero() {
                // direction (0, 0, 1): vertical
                order * order + p[1].encoding() as usize
            } else {
                // direction (0, 1, s)
                slope_line(d[2], p[1], p[2])
            }
        }
        (true, true) => order * order + order,
    }
}

/// Normalized normal vector of the line with the given [`line_key`].
fn line_normal(f: &ExtField, key: usize) -> [Fqm; 3] {
    let order = f.order() as usize;
    let el = |e: usize| f.element(e as u64).expect("digit below field order");
    let mut n = if key < order * order {
        // X2 = s X1 + t X0
        let (s, t) = (el(key / order), el(key % order));
        [t, s, f.neg(Fqm::ONE)]
    } else if key < order * order + order {
        // X1 = c X0
        [el(key - order * order), f.neg(Fqm::ONE), Fqm::ZERO]
    } else {
        [Fqm::ONE, Fqm::ZERO, Fqm::ZERO]
    };
    normalize3(f, &mut n);
    n
}

fn isqrt(x: u64) -> u64 {
    if x < 2 {
        return x;
    }
    let mut r = x;
    let mut y = r.div_ceil(2);
    while y < r {
        r = y;
        y = (r + x / r) / 2;
    }
    r
}

fn log_q(mut x: u64, q: u64) -> usize {
    let mut e = 0;
    while x > 1 {
        debug_assert_eq!(x % q, 0);
        x /= q;
        e += 1;
    }
    e
}

/// [`Decider::decide`] with fresh buffers.
pub fn spannability_witness_n6(u: &QSystem) -> Result<N6Verdict> {
    Decider::new(u.field_arc().clone()).decide(u)
}

/// Decoded candidate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub form: u8,
    pub params: Vec<Fqm>,
    pub alpha: Fqm,
    pub beta: Fqm,
}

/// Outcome of one contiguous candidate range.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RangeOutcome {
    /// Candidates decided (skipped ones excluded).
    pub examined: u64,
    /// Candidates whose base system does not span F_{q^5}^3.
    pub skipped: u64,
    /// Indices of candidates not shown to be 2-spannable, ascending.
    pub survivors: Vec<u64>,
    /// Candidates additionally checked with the generic decision.
    pub oracle_checks: u64,
}

impl RangeOutcome {
    pub fn merge(&mut self, other: &RangeOutcome) {
        self.examined += other.examined;
        self.skipped += other.skipped;
        self.survivors.extend_from_slice(&other.survivors);
        self.oracle_checks += other.oracle_checks;
    }
}

/// Runs candidate ranges of one form sequentially.
pub struct Searcher {
    field: Arc<ExtField>,
    form: u8,
    length: usize,
    oracle_stride: u64,
    total: u64,
    decider: Decider,
    base: Option<(u64, Option<QSystem>)>,
}

impl Searcher {
    /// `length` is 6 (specialized decision) or 7 (one extra vector, generic decision).
    /// Every candidate whose index is a multiple of `oracle_stride` is
    /// re-decided generically (0 disables this).
    pub fn new(q: u32, form: u8, length: usize, oracle_stride: u64) -> Result<Self> {
        if length != 6 && length != 7 {
            return Err(Error::InvalidParameters(alloc::format!("length must be 6 or 7, got {length}")));
        }
        let total = search_space_size(q, form)?;
        let total = u64::try_from(total)
            .map_err(|_| Error::InvalidParameters("search space does not fit in 64 bits".into()))?;
        let field = Arc::new(ExtField::new(q, SEARCH_DEGREE, None)?);
        Ok(Searcher { decider: Decider::new(field.clone()), field, form, length, oracle_stride, total, base: None })
    }

    pub fn field(&self) -> &Arc<ExtField> {
        &self.field
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    fn extensions(&self) -> u64 {
        let order = self.field.order();
        order * order - 1
    }

    pub fn decode(&self, index: u64) -> Candidate {
        let order = self.field.order();
        let ext = self.extensions();
        let mut p = index / ext;
        let e = index % ext + 1;
        let arity = form_arity(self.form).expect("validated form");
        let mut params = vec![Fqm::ZERO; arity];
        for x in params.iter_mut().rev() {
            *x = self.field.element(p % order).expect("digit below field order");
            p /= order;
        }
        Candidate {
            form: self.form,
            params,
            alpha: self.field.element(e / order).expect("digit below field order"),
            beta: self.field.element(e % order).expect("digit below field order"),
        }
    }

    /// The system of a candidate (6- or 7-dimensional), or `None` when its base is skipped.
    pub fn candidate_system(&mut self, index: u64) -> Result<Option<QSystem>> {
        let c = self.decode(index);
        let p = index / self.extensions();
        if self.base.as_ref().is_none_or(|b| b.0 != p) {
            let sys = match canonical_system(&self.field, self.form, &c.params) {
                Ok(s) => Some(s),
                Err(Error::NotASystem) => None,
                Err(e) => return Err(e),
            };
            self.base = Some((p, sys));
        }
        let Some(base) = &self.base.as_ref().expect("just set").1 else {
            return Ok(None);
        };
        let mut u = extended_candidate(base, c.alpha, c.beta)?;
        if self.length == 7 {
            let total = (self.field.order() as u128).pow(3);
            let v = (1..total)
                .map(|i| vector_by_index(&self.field, 3, i))
                .find(|v| !u.contains(v))
                .expect("a 6-dimensional system is a proper subspace");
            u = u.with_vector(v)?;
        }
        Ok(Some(u))
    }

    /// Processes candidates `start..end`.
    pub fn run_range(&mut self, start: u64, end: u64) -> Result<RangeOutcome> {
        if start > end || end > self.total {
            return Err(Error::InvalidRange { start, end, total: self.total });
        }
        let mut out = RangeOutcome::default();
        for i in start..end {
            let Some(u) = self.candidate_system(i)? else {
                out.skipped += 1;
                continue;
            };
            out.examined += 1;
            let spannable = if self.length == 6 {
                self.decider.decide(&u)?.is_spannable()
            } else {
                is_2_spannable(&u, u64::MAX)?.is_some()
            };
            if self.oracle_stride != 0 && i % self.oracle_stride == 0 {
                out.oracle_checks += 1;
                if is_2_spannable(&u, u64::MAX)?.is_some() != spannable {
                    return Err(Error::CrossCheckFailed("specialized and generic spannability disagree"));
                }
            }
            if !spannable {
                out.survivors.push(i);
            }
        }
        Ok(out)
    }
}
