use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rankint_core::code::support;
use rankint_core::constructions::{default_points, example_code, gabidulin, simplex};
use rankint_core::properties::{
    descendants, is_21_separating, is_21_separating_set, is_2_rank_frameproof, is_hamming_intersecting, is_minimal,
    is_rank_intersecting, rank_intersecting_scan, singleton_bound, Certificate,
};
use rankint_core::{Error, ExtField, Fqm, RankCode};

const CAP: u64 = 1 << 20;

fn f8() -> Arc<ExtField> {
    Arc::new(ExtField::new(2, 3, None).unwrap())
}

fn all_codewords(c: &RankCode) -> Vec<Vec<Fqm>> {
    let f = c.field();
    let order = f.order();
    (0..order.pow(c.k() as u32))
        .map(|mut i| {
            let u: Vec<Fqm> = (0..c.k())
                .map(|_| {
                    let x = f.element(i % order).unwrap();
                    i /= order;
                    x
                })
                .collect();
            c.encode(&u)
        })
        .collect()
}

#[test]
fn hamming_intersecting_examples() {
    let f = f8();
    let (o, z) = (Fqm::ONE, Fqm::ZERO);
    let block = RankCode::new(f.clone(), vec![vec![o, o, z, z], vec![z, z, o, f.alpha()]]).unwrap();
    let v = is_hamming_intersecting(&block, CAP).unwrap();
    assert!(!v.holds);
    assert!(matches!(v.certificate, Certificate::Pair { .. }));
    let one = RankCode::new(f.clone(), vec![vec![o]]).unwrap();
    assert!(is_hamming_intersecting(&one, CAP).unwrap().holds);
    assert!(is_rank_intersecting(&one, CAP).unwrap().holds);
    assert!(is_2_rank_frameproof(&one, CAP).unwrap().holds);
    for id in ["gab_3_2_f8", "club_4_2_f16", "quasimrd_6_2_f32"] {
        assert!(is_hamming_intersecting(&example_code(id).unwrap(), CAP).unwrap().holds, "{id}");
    }
}

#[test]
fn degenerate_codes_are_refused() {
    // Columns 1, α, α+1 over F_4 span only a 2-dimensional F_2-space.
    let f4 = Arc::new(ExtField::new(2, 2, None).unwrap());
    let a = f4.alpha();
    let c = RankCode::new(f4.clone(), vec![vec![Fqm::ONE, a, f4.add(a, Fqm::ONE)]]).unwrap();
    assert!(!c.is_nondegenerate());
    assert_eq!(c.column_rank(), 2);
    assert_eq!(is_rank_intersecting(&c, CAP).unwrap_err(), Error::DegenerateCode);
    assert_eq!(is_minimal(&c, CAP).unwrap_err(), Error::DegenerateCode);
    assert_eq!(is_2_rank_frameproof(&c, CAP).unwrap_err(), Error::DegenerateCode);
}

#[test]
fn support_matches_the_row_space() {
    // (1, α, α²) over F_8 has the identity as coordinate matrix.
    let f = f8();
    let a = f.alpha();
    let x = vec![Fqm::ONE, a, f.mul(a, a)];
    assert_eq!(support(&f, &x).dim(), 3);
    let y = vec![Fqm::ONE, Fqm::ONE, Fqm::ZERO];
    let s = support(&f, &y);
    assert_eq!(s.dim(), 1);
    assert!(s.contains(&[1, 1, 0]));
    // Scaling by any nonzero element keeps the support.
    for l in f.elements().skip(1) {
        let z: Vec<Fqm> = y.iter().map(|&v| f.mul(l, v)).collect();
        assert_eq!(support(&f, &z), s);
    }
}

#[test]
fn gabidulin_containments_are_scanned() {
    let c = example_code("gab_3_2_f8").unwrap();
    let v = is_minimal(&c, CAP).unwrap();
    assert!(!v.holds);
    let Certificate::Pair { first, second } = v.certificate else { panic!("expected a pair") };
    let (a, b) = (support(c.field(), &c.encode(&first)), support(c.field(), &c.encode(&second)));
    assert!(a.is_subspace_of(&b));
}

#[test]
fn simplex_certificate_meets_trivially() {
    let c = simplex(f8(), 2).unwrap();
    let v = is_rank_intersecting(&c, CAP).unwrap();
    let Certificate::Pair { first, second } = v.certificate else { panic!("expected a pair") };
    let (a, b) = (support(c.field(), &c.encode(&first)), support(c.field(), &c.encode(&second)));
    assert_eq!(a.intersect(&b).unwrap().dim(), 0);
    let e1 = support(c.field(), &c.encode(&[Fqm::ONE, Fqm::ZERO]));
    let e2 = support(c.field(), &c.encode(&[Fqm::ZERO, Fqm::ONE]));
    assert_eq!(e1.intersect(&e2).unwrap().dim(), 0);
}

#[test]
fn frameproof_literal_scan_agrees() {
    // 64 and 512 codewords: both run the literal triple scan.
    let gab = example_code("gab_3_2_f8").unwrap();
    assert!(is_2_rank_frameproof(&gab, CAP).unwrap().holds);
    let s = simplex(f8(), 2).unwrap();
    let v = is_2_rank_frameproof(&s, CAP).unwrap();
    assert!(!v.holds);
    assert!(matches!(v.certificate, Certificate::Triple { .. }));
    let s3 = simplex(Arc::new(ExtField::new(2, 2, None).unwrap()), 3).unwrap();
    assert!(!is_2_rank_frameproof(&s3, CAP).unwrap().holds);
}

#[test]
fn separating_set_examples() {
    let f = f8();
    let gab = example_code("gab_3_2_f8").unwrap();
    let words = all_codewords(&gab);
    assert_eq!(is_21_separating_set(&f, &words, CAP).unwrap().holds, is_21_separating(&gab, CAP).unwrap().holds);
    let (o, z) = (Fqm::ONE, Fqm::ZERO);
    // y − x and z − y have complementary supports, so the triangle is tight.
    let tight = vec![vec![z, z], vec![o, z], vec![o, f.alpha()]];
    assert!(!is_21_separating_set(&f, &tight, CAP).unwrap().holds);
    assert!(is_21_separating_set(&f, &tight[..2], CAP).unwrap().holds);
    assert!(is_21_separating_set(&f, &[], CAP).unwrap().holds);
    assert!(is_21_separating_set(&f, &words, 10).is_err());
    // The tiny q = 2, m = 3, n = 3 corpus: both paths agree.
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..20 {
        let k = rng.gen_range(1..=2);
        let g = (0..k).map(|_| (0..3).map(|_| f.element(rng.gen_range(0..8)).unwrap()).collect()).collect();
        let Ok(c) = RankCode::new(f.clone(), g) else { continue };
        let words = all_codewords(&c);
        assert_eq!(is_21_separating_set(&f, &words, CAP).unwrap().holds, is_21_separating(&c, CAP).unwrap().holds);
    }
}

#[test]
fn descendant_membership() {
    let f = f8();
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let rand_word =
        |rng: &mut ChaCha8Rng| -> Vec<Fqm> { (0..3).map(|_| f.element(rng.gen_range(0..8)).unwrap()).collect() };
    let c = rand_word(&mut rng);
    let single = descendants(&f, std::slice::from_ref(&c)).unwrap();
    assert!(single.contains(&c));
    let mut other = c.clone();
    other[0] = f.add(other[0], Fqm::ONE);
    assert!(!single.contains(&other));
    let c2 = rand_word(&mut rng);
    assert!(descendants(&f, &[c.clone(), c2]).unwrap().contains(&c));
    assert_eq!(descendants(&f, &[]).unwrap_err(), Error::EmptyDescendantSet);
    // S = {0, c} with rk(c) = n.
    let a = f.alpha();
    let full = vec![Fqm::ONE, a, f.mul(a, a)];
    let zero = vec![Fqm::ZERO; 3];
    let d = descendants(&f, &[zero.clone(), full.clone()]).unwrap();
    for _ in 0..200 {
        let w = rand_word(&mut rng);
        let diff: Vec<Fqm> = w.iter().zip(&full).map(|(&x, &y)| f.sub(x, y)).collect();
        let (s1, s2) = (support(&f, &w), support(&f, &diff));
        let meet = s1.dim() + s2.dim() - s1.sum_dim(&s2).unwrap();
        assert_eq!(d.contains(&w), meet == 0);
    }
}

#[test]
fn mrd_codes_intersect_exactly_when_2d_exceeds_n() {
    for &(q, m) in &[(2u32, 5u32), (3, 3), (2, 4)] {
        let f = Arc::new(ExtField::new(q, m, None).unwrap());
        for n in 1..=m as usize {
            for k in 1..=n.min(4) {
                let c = gabidulin(f.clone(), &default_points(&f, n), k).unwrap();
                let d = c.distance().unwrap();
                assert_eq!(d, n - k + 1);
                assert_eq!(d, singleton_bound(q, m as usize, n, k));
                assert_eq!(rank_intersecting_scan(&c, CAP).unwrap().holds, 2 * d > n, "[{n},{k}] over {q}^{m}");
            }
        }
    }
}

#[test]
fn alternative_modulus_keeps_the_theorem_properties() {
    // x^5 + x^3 + 1 instead of the default x^5 + x^2 + 1.
    let f = Arc::new(ExtField::new(2, 5, Some(&[1, 0, 0, 1, 0, 1])).unwrap());
    let gab = gabidulin(f.clone(), &default_points(&f, 5), 3).unwrap();
    assert_eq!(gab.distance().unwrap(), 3);
    assert!(is_rank_intersecting(&gab, CAP).unwrap().holds);
    let f7 = Arc::new(ExtField::new(2, 7, Some(&[1, 0, 0, 1, 0, 0, 0, 1])).unwrap());
    let a = f7.alpha();
    let g = (0..3u32)
        .map(|i| {
            let mut row: Vec<Fqm> = (0..7u64).map(|j| f7.pow(a, j << i)).collect();
            row.push(if i == 1 { Fqm::ONE } else { Fqm::ZERO });
            row.push(if i == 2 { Fqm::ONE } else { Fqm::ZERO });
            row
        })
        .collect();
    let c = RankCode::new(f7, g).unwrap();
    assert_eq!(c.distance().unwrap(), 5);
    assert!(is_minimal(&c, 1 << 20).unwrap().holds);
}
