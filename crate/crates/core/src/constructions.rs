//! Gabidulin, simplex and club codes, the direct-extension construction,
//! and the named example codes with their expected properties.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::code::RankCode;
use crate::error::{Error, Result};
use crate::field::{ExtField, Fqm};
use crate::geometry::{max_hyperplane_weight, QSystem};
use crate::linalg::{FqSubspace, DEFAULT_ENUMERATION_CAP};

/// `1, α, …, α^{n-1}`.
pub fn default_points(field: &ExtField, n: usize) -> Vec<Fqm> {
    let a = field.alpha();
    (0..n).map(|i| field.pow(a, i as u64)).collect()
}

/// `Gab_{n,k}(a_1, …, a_n)`, generated by the Moore matrix `(a_j^{q^i})`.
pub fn gabidulin(field: Arc<ExtField>, points: &[Fqm], k: usize) -> Result<RankCode> {
    let n = points.len();
    let m = field.m() as usize;
    if n > m {
        return Err(Error::LengthExceedsDegree { n, m });
    }
    if k == 0 || k > n {
        return Err(Error::InvalidParameters(alloc::format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    let rows: Vec<Vec<u32>> = points.iter().map(|&a| field.expand(a)).collect();
    if FqSubspace::span(field.q(), m, &rows)?.dim() != n {
        return Err(Error::DependentPoints);
    }
    let g = (0..k).map(|i| points.iter().map(|&a| field.frobenius(a, i as u32)).collect()).collect();
    RankCode::new(field, g)
}

/// `(I_k  α I_k  …  α^{m-1} I_k)`.
pub fn simplex(field: Arc<ExtField>, k: usize) -> Result<RankCode> {
    if k == 0 {
        return Err(Error::InvalidParameters("k must be at least 1".into()));
    }
    let m = field.m() as usize;
    let powers = default_points(&field, m);
    let g = (0..k)
        .map(|i| {
            let mut row = vec![Fqm::ZERO; k * m];
            for (b, &p) in powers.iter().enumerate() {
                row[b * k + i] = p;
            }
            row
        })
        .collect();
    RankCode::new(field, g)
}

/// The `[h, 2, 2]_{q^h/q}` code with columns `(α^j, 0)` for `1 ≤ j ≤ h-2`,
/// then `(α^{h-1}, 1)` and `(0, α)`; its linear set is an (h-2)-club.
pub fn club_code(field: Arc<ExtField>) -> Result<RankCode> {
    let h = field.m();
    if h < 3 {
        return Err(Error::DegreeTooSmall(h));
    }
    let a = field.alpha();
    let mut top: Vec<Fqm> = (1..h - 1).map(|j| field.pow(a, j as u64)).collect();
    let mut bottom = vec![Fqm::ZERO; top.len()];
    top.push(field.pow(a, h as u64 - 1));
    bottom.push(Fqm::ONE);
    top.push(Fqm::ZERO);
    bottom.push(a);
    RankCode::new(field, vec![top, bottom])
}

/// Vectors of F_{q^m}^k, `index` read in base `Q = q^m` with the first
/// coordinate most significant.
pub fn vector_by_index(field: &ExtField, k: usize, mut index: u128) -> Vec<Fqm> {
    let order = field.order() as u128;
    let mut v = vec![Fqm::ZERO; k];
    for x in v.iter_mut().rev() {
        *x = field.element((index % order) as u64).expect("digit below field order");
        index /= order;
    }
    v
}

/// Adds `r` vectors to a hyperplane-scattered `[m, k]` system `W`, each the
/// first vector (in [`vector_by_index`] order) outside the current span.
/// The result has every hyperplane weight below `n/2`; this is re-checked.
pub fn extend_to_intersecting(w: &QSystem, r: usize) -> Result<QSystem> {
    let m = w.field().m() as usize;
    let k = w.k();
    if w.n() != m {
        return Err(Error::InvalidParameters(alloc::format!(
            "system to extend must have dimension m = {m}, found {}",
            w.n()
        )));
    }
    let max = (m + 1).saturating_sub(2 * k);
    if r > max || m + 1 < 2 * k {
        return Err(Error::ExtensionTooLarge { r, max });
    }
    if max_hyperplane_weight(w, DEFAULT_ENUMERATION_CAP)? >= k {
        return Err(Error::NotHyperplaneScattered);
    }
    let mut u = w.clone();
    let total = (w.field().order() as u128).pow(k as u32);
    let mut next = 1u128;
    for _ in 0..r {
        loop {
            if next >= total {
                return Err(Error::CrossCheckFailed("ran out of extension vectors"));
            }
            let v = vector_by_index(w.field(), k, next);
            next += 1;
            if !u.contains(&v) {
                u = u.with_vector(v)?;
                break;
            }
        }
    }
    if 2 * max_hyperplane_weight(&u, DEFAULT_ENUMERATION_CAP)? >= u.n() {
        return Err(Error::CrossCheckFailed("extended system has a hyperplane of weight >= n/2"));
    }
    Ok(u)
}

/// An expected property value recorded with a recipe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expected {
    Bool(bool),
    Int(u64),
    Label(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expectation {
    pub property: String,
    pub value: Expected,
    /// Short description of the fact this expectation comes from.
    pub citation: String,
}

fn expect(property: &str, value: Expected, citation: &str) -> Expectation {
    Expectation { property: property.to_string(), value, citation: citation.to_string() }
}

#[derive(Clone, Debug)]
pub struct Recipe {
    pub name: String,
    pub code: RankCode,
    pub expected: Vec<Expectation>,
}

pub const EXAMPLE_IDS: &[&str] =
    &["gab_3_2_f8", "club_4_2_f16", "minimal_9_3_f128", "quasimrd_6_2_f32", "simplex_2_3", "gab_5_3_f32"];

fn field(q: u32, m: u32) -> Result<Arc<ExtField>> {
    Ok(Arc::new(ExtField::new(q, m, None)?))
}

/// One of the named example codes (`simplex_{k}_{m}` is binary).
pub fn example_code(id: &str) -> Result<RankCode> {
    Ok(recipe(id)?.code)
}

pub fn recipe(id: &str) -> Result<Recipe> {
    use Expected::*;
    let (code, expected) = match id {
        "gab_3_2_f8" => {
            let f = field(2, 3)?;
            let code = gabidulin(f.clone(), &default_points(&f, 3), 2)?;
            (
                code,
                vec![
                    expect("distance", Int(2), "Gab_{3,2}(1, a, a^2) is a [3,2,2] code"),
                    expect("intersecting", Bool(true), "Gab_{3,2} supports have dimension >= 2 in F_2^3"),
                    expect("frameproof", Bool(true), "frameproof iff intersecting"),
                    expect("spannable", Bool(false), "intersecting iff system not 2-spannable"),
                    expect("mrd", Bool(true), "Gabidulin codes are MRD"),
                ],
            )
        }
        "gab_5_3_f32" => {
            let f = field(2, 5)?;
            let code = gabidulin(f.clone(), &default_points(&f, 5), 3)?;
            (
                code,
                vec![
                    expect("distance", Int(3), "Gabidulin distance n - k + 1"),
                    expect("mrd", Bool(true), "Gabidulin codes are MRD"),
                    expect("intersecting", Bool(true), "Gab_{5,3} over F_32 is intersecting"),
                ],
            )
        }
        "club_4_2_f16" => {
            let code = club_code(field(2, 4)?)?;
            (
                code,
                vec![
                    expect("distance", Int(2), "[4,2,2]_{16/2} club code"),
                    expect("intersecting", Bool(true), "intersecting although 2d = n"),
                    expect("spannable", Bool(false), "2-club system is not 2-spannable"),
                    expect("mrd", Bool(false), "d = 2 is below the Singleton value 3"),
                ],
            )
        }
        "minimal_9_3_f128" => {
            let f = field(2, 7)?;
            let a = f.alpha();
            let g = (0..3u32)
                .map(|i| {
                    let mut row: Vec<Fqm> = (0..7u64).map(|j| f.pow(a, j << i)).collect();
                    row.push(if i == 1 { Fqm::ONE } else { Fqm::ZERO });
                    row.push(if i == 2 { Fqm::ONE } else { Fqm::ZERO });
                    row
                })
                .collect();
            let code = RankCode::new(f, g)?;
            (
                code,
                vec![
                    expect("distance", Int(5), "[9,3,5]_{128/2} code"),
                    expect("minimal", Bool(true), "scattered [9,3] system gives a minimal code"),
                    expect("intersecting", Bool(true), "2d > n sufficient condition with d = 5"),
                    expect("separating", Bool(true), "minimal codes are (2,1)-separating"),
                ],
            )
        }
        "quasimrd_6_2_f32" => {
            let f = field(2, 5)?;
            let gab = gabidulin(f.clone(), &default_points(&f, 5), 2)?;
            let mut g = gab.generator().to_vec();
            g[0].push(Fqm::ZERO);
            g[1].push(Fqm::ONE);
            let code = RankCode::new(f, g)?;
            (
                code,
                vec![
                    expect("distance", Int(4), "[6,2,4] extension of Gab_{5,2}"),
                    expect("mrd_label", Label("quasi-MRD (Singleton-optimal)".into()), "[6,2,4] is quasi-MRD"),
                    expect("intersecting", Bool(true), "direct extension of a scattered system is intersecting"),
                    expect("spannable", Bool(false), "intersecting iff system not 2-spannable"),
                ],
            )
        }
        _ => {
            let Some((k, m)) = parse_simplex_id(id) else {
                return Err(Error::UnknownExample(id.to_string()));
            };
            let code = simplex(field(2, m as u32)?, k)?;
            let mut expected = vec![
                expect("distance", Int(m as u64), "simplex codewords all have rank m"),
                expect("minimal", Bool(true), "constant-weight simplex code is minimal"),
                expect("separating", Bool(true), "rk(c + c') <= m < 2m"),
            ];
            if k >= 2 {
                expected.push(expect("intersecting", Bool(false), "sigma(e1 G) and sigma(e2 G) meet trivially"));
                expected.push(expect("frameproof", Bool(false), "frameproof iff intersecting"));
            }
            (code, expected)
        }
    };
    Ok(Recipe { name: id.to_string(), code, expected })
}

fn parse_simplex_id(id: &str) -> Option<(usize, usize)> {
    let rest = id.strip_prefix("simplex_")?;
    let (k, m) = rest.split_once('_')?;
    let (k, m): (usize, usize) = (k.parse().ok()?, m.parse().ok()?);
    // F_{2^m} must fit the supported field sizes.
    (k >= 1 && (1..=32).contains(&m)).then_some((k, m))
}
